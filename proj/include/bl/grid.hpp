#pragma once
// Discretization of the quadrant (0,inf)x(0,inf): x-marching stations plus a
// fixed similarity grid in z = y/sqrt(x+1). All layer fields live on this
// grid; decay weights in z are station-independent node weights.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bl/util.hpp"

namespace bl {

struct RegularityBudget {
  int k_max = 1;  // max x-derivative order
  int j_max = 2;  // max y-derivative order
  int m_max = 6;  // max z-weight power
  // Mirrors the per-layer constraint 2k + j <= ell.
  int ell() const { return 2 * k_max + j_max; }
};

// z(s) = z_max*(exp(a*s)-1)/(exp(a)-1) on uniform s in [0,1]; a = ln(1/wall_cluster).
// a -> 0 degenerates smoothly to the uniform grid.
struct SimilarityGrid {
  std::vector<double> x;   // stations, x[0] = 0, strictly increasing
  std::vector<double> z;   // nodes, z[0] = 0 .. z_max, wall-clustered
  std::vector<double> s;   // uniform map parameter per node
  std::vector<double> zs;  // dz/ds at nodes (analytic)
  std::vector<double> zss; // d2z/ds2 at nodes (analytic)
  double z_max = 0.0;
  double a = 0.0;
  double hs = 0.0;         // uniform s spacing

  std::size_t nx() const { return x.size(); }
  std::size_t nz() const { return z.size(); }
  double X(std::size_t i) const { return x[i] + 1.0; }
  double y_of(std::size_t i, std::size_t j) const { return z[j] * std::sqrt(X(i)); }
};

SimilarityGrid build_grid(double x_max, int n_x, double z_max, int n_z,
                          double wall_cluster);

// Real samples indexed (station, z-node); optional derivative cache keyed
// (k, j) for d_x^k d_y^j.
struct Field {
  std::size_t nx = 0, nz = 0;
  std::vector<double> v;
  std::map<std::pair<int, int>, std::vector<double>> deriv_cache;

  Field() = default;
  Field(std::size_t nx_, std::size_t nz_, double fill = 0.0)
      : nx(nx_), nz(nz_), v(nx_ * nz_, fill) {}

  double& at(std::size_t i, std::size_t j) { return v[i * nz + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * nz + j]; }
  double* row(std::size_t i) { return v.data() + i * nz; }
  const double* row(std::size_t i) const { return v.data() + i * nz; }

  double max_abs() const {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
  }
};

Field make_field(const SimilarityGrid& g, double fill = 0.0);

// d/dz of every station row through the smooth stretching map (O(h^2)).
Field d_dz(const Field& f, const SimilarityGrid& g);
// y-derivative of the given order at fixed x: d_y^j = X^{-j/2} d_z^j.
Field d_dy(const Field& f, const SimilarityGrid& g, int order);
// x-derivative at fixed z (station finite differences, one-sided at ends).
Field d_dx_fixed_z(const Field& f, const SimilarityGrid& g);
// x-derivative at fixed y: d_x|_y = d_x|_z - (z/(2X)) d_z.
Field d_dx_fixed_y(const Field& f, const SimilarityGrid& g);

struct IntegrateResult {
  Field f;
  bool truncation_dominated = false;
  double tail_ratio = 0.0;  // |f(Z_max)| / max|f|
};

enum class IntegrateFrom { Zero, Infinity };

// Composite trapezoid antiderivative in y along each station.
// From Zero:      F(y) = int_0^y f
// From Infinity:  F(y) = int_y^{Y(Z_max)} f with zero tail correction; the
//                 result is flagged truncation-dominated when |f(Z_max)|
//                 exceeds tail_tol * max|f|.
IntegrateResult integrate_y(const Field& f, const SimilarityGrid& g,
                            IntegrateFrom from, double tail_tol = 1e-8);

// Derivative cache on demand: get(k, j) = d_x^k|_y d_y^j of base.
class FieldJet {
 public:
  FieldJet() = default;
  FieldJet(Field base, const SimilarityGrid* g) : g_(g) {
    cache_[{0, 0}] = std::move(base);
  }
  const Field& get(int k, int j) const;
  const SimilarityGrid* grid() const { return g_; }

 private:
  const SimilarityGrid* g_ = nullptr;
  mutable std::map<std::pair<int, int>, Field> cache_;
};

// CSV with header x,z,value[,d10,d01,...]; derivative columns named d<k><j>.
void write_field_csv(const std::string& path, const Field& f,
                     const SimilarityGrid& g);
Field read_field_csv(const std::string& path, const SimilarityGrid& g);

// Version-tagged binary cache.
void write_field_bin(const std::string& path, const Field& f);
Field read_field_bin(const std::string& path);

}  // namespace bl
