#pragma once
// Nonlinear Prandtl perturbation layer (i = 0): datum generation with
// parabolic compatibility projection, global x-march of the perturbation
// system around Blasius, and the Background bundle used by every later layer.

#include <optional>
#include <string>
#include <vector>

#include "bl/blasius.hpp"
#include "bl/grid.hpp"
#include "bl/march.hpp"

namespace bl {

struct Datum {
  std::vector<double> u0;      // perturbation samples at x = 0 (z-line, y==z)
  std::vector<double> u0_ypp;  // analytic second y-derivative when available
  double certificate = 0.0;    // ||u0 <y>^m_wt||_{C^l_wt} after delta* scaling
  double delta_star = 0.0;
  bool compat0 = false;        // zeroth-order parabolic compatibility
  bool compat1 = false;        // first-order (wall) compatibility
  std::string shape;
  int m_weight = 6;
  int l_weight = 2;
};

// shape in {"zero", "bump", "bump_wide", "bump_incompatible"}; the last one
// deliberately violates the wall condition (for error-path tests).
Datum make_datum(const std::string& shape, double delta_star,
                 const SimilarityGrid& g);

struct PerturbationField {
  Field u;       // utilde^0_p
  Field vbar;    // vtilde^0_p = -int_0^y d_x utilde
  double delta_star = 0.0;
  std::vector<StationLog> log;
  int max_picard = 0;
};

struct MarchOptions {
  double tol = 1e-10;
  int max_picard = 50;
};

// Global march of the perturbation system
//   ubar* d_x u + u d_x ubar* + vbar* d_y u + vbar[u] d_y ubar* - d_y^2 u
//     = -delta* (u d_x u + vbar[u] d_y u)
// with the separation guard on the wall shear of ubar* + delta* u.
PerturbationField march_nonlinear(const Datum& datum, const BlasiusField& blas,
                                  const SimilarityGrid& g,
                                  MarchOptions opts = {});

// Background [ubar_B, vbar_B] = [ubar*, vbar*] + delta** [utilde, vtilde].
class Background {
 public:
  Background(const BlasiusField* blas, const PerturbationField* pert,
             double delta_ss);

  const Field& ub(int k, int j) const;
  const Field& vb(int k, int j) const;
  const SimilarityGrid& grid() const { return blas_->grid(); }
  const BlasiusField& blasius() const { return *blas_; }
  double delta_ss() const { return delta_ss_; }
  bool pure_blasius() const { return pert_ == nullptr || delta_ss_ == 0.0; }

  // d_y ubar_B(x, 0); positive for admissible backgrounds
  std::vector<double> wall_shear() const;
  // ubar_B values at x = 0 (z-line)
  std::vector<double> ub0_slice() const;

 private:
  const BlasiusField* blas_;
  const PerturbationField* pert_;
  double delta_ss_;
  std::optional<FieldJet> uj_, vj_;
  mutable std::map<std::pair<int, int>, Field> ucache_, vcache_;
};

Background background(const PerturbationField* pert, const BlasiusField& blas,
                      double delta_ss);

// Comparability profile b(z) of the background lemma: z below 3/4, 1 above 1,
// monotone quintic bridge between.
double b_of_z(double z);

}  // namespace bl
