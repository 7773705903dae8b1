#pragma once
// Euler correctors: harmonic pairs (u^i_E, v^i_E) on the half plane built
// from a wall trace by Poisson-kernel quadrature. We carry the holomorphic
// function Phi = u - i v and its first three complex derivatives, so that
// every d_x^k d_Y^j of both components comes from one table and the pair
// satisfies Cauchy-Riemann structurally:
//   d_x^k d_Y^j u = Re(i^j Phi^{(k+j)}),   d_x^k d_Y^j v = -Im(i^j Phi^{(k+j)}).

#include <complex>
#include <map>
#include <vector>

#include "bl/grid.hpp"
#include "bl/util.hpp"

namespace bl {

// Smooth extension of a wall trace to the whole line: identical to the trace
// on [0, x_max] (spline through the samples, blended into the algebraic model
// c (1+t)^{-1/2} near x_max), a C^K Hermite-blended Taylor stub on [-1, 0],
// and identically zero below -1.
class BoundaryExtension {
 public:
  BoundaryExtension() = default;
  double eval(double t, int order = 0) const;
  double operator()(double t) const { return eval(t, 0); }
  double x_max() const { return xmax_; }
  double tail_c() const { return c_; }
  int order_K() const { return K_; }

  friend BoundaryExtension extend_boundary(const std::vector<double>& xs,
                                           const std::vector<double>& gs, int K);

 private:
  CubicSpline core_;
  std::vector<double> taylor_;  // degree-K polynomial coefficients at 0+
  double xmax_ = 0.0;
  double blend_lo_ = 0.0;  // model blend window [blend_lo_, xmax_]
  double c_ = 0.0;
  int K_ = 4;
};

BoundaryExtension extend_boundary(const std::vector<double>& xs,
                                  const std::vector<double>& gs, int K = 4);

std::vector<double> make_euler_ynodes(double Y_max, int nY,
                                      double cluster = 0.1);

class EulerLayer {
 public:
  EulerLayer() = default;
  EulerLayer(BoundaryExtension ext, std::vector<double> stations,
             std::vector<double> ynodes, double quad_tol = 1e-9);

  // derivative tables at grid nodes; k + j <= 3 (k + j <= 2 on the wall row)
  double u(int k, int j, std::size_t i, std::size_t p) const;
  double v(int k, int j, std::size_t i, std::size_t p) const;
  // cubic interpolation in Y at a station
  double interp_u(int k, int j, std::size_t i, double Y) const;
  double interp_v(int k, int j, std::size_t i, double Y) const;

  // meshless evaluation straight from the quadrature (refinement studies)
  CVec<4> phi_at(double x, double Y) const;

  double u_wall(std::size_t i) const { return wall_u_[i]; }
  double ux_wall(std::size_t i) const { return wall_ux_[i]; }
  double v_wall(std::size_t i) const { return ext_.eval(x_[i], 0); }

  const std::vector<double>& stations() const { return x_; }
  const std::vector<double>& ynodes() const { return Y_; }
  const BoundaryExtension& extension() const { return ext_; }

 private:
  std::complex<double> phi(int n, std::size_t i, std::size_t p) const;

  BoundaryExtension ext_;
  std::vector<double> x_, Y_;
  double tol_ = 1e-9;
  // Phi^{(n)}, n = 0..3, row-major (station * nY + node)
  std::vector<std::vector<std::complex<double>>> tab_;
  std::vector<double> wall_u_, wall_ux_, wall_uxx_;
  mutable std::map<long, std::vector<CubicSpline>> spl_;
};

// Wall trace -> harmonic v with v(x,0) = trace, v -> 0 at infinity, plus the
// conjugate u normalized to vanish at Y = infinity. (The returned layer
// carries both components; `conjugate` exists as the spec's named operation.)
EulerLayer harmonic_extend(const BoundaryExtension& ext,
                           const std::vector<double>& stations,
                           const std::vector<double>& ynodes,
                           double quad_tol = 1e-9);
inline const EulerLayer& conjugate(const EulerLayer& layer) { return layer; }

// Phat^i_E on the Euler grid of layers[0] (all layers share grids here):
//   Phat^i = -[ 1/2 eps^{(i-2)/2} (|u^{i-1}|^2 + |v^{i-1}|^2)
//               + sum_{j=1}^{i-2} eps^{(j-1)/2} (u^{i-1} u^j + v^{i-1} v^j) ]
// laid out as a Field with nz = #ynodes. layers[j] holds Euler layer j+1.
Field euler_phat(const std::vector<EulerLayer>& layers, int i, double eps);

// Right-hand side of the cancellation identity at layer i:
//   (eps^{-i/2}(F_E + G_E), eps^{-(i-1)/2}(H_E + J_E))
// evaluated from the bundle formulas on the Euler grid.
void euler_quadratic_sources(const std::vector<EulerLayer>& layers, int i,
                             double eps, Field& fx, Field& fy);

}  // namespace bl
