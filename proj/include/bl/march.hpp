#pragma once
// Implicit x-marching core shared by the nonlinear perturbation march and the
// linearized layer solves. Backward Euler in x; Newton on the local terms;
// Picard ("freeze vbar, resolve, repeat") on the nonlocal vbar coupling.
//
// Solves, on the similarity grid, for u(x,z) with zero Dirichlet rows at
// z = 0 and z = Z_max:
//
//   a0 d_x|y u + a1 u + a2 d_y u + a3 vbar[u] - d_y^2 u
//       + quad (u d_x|y u + vbar[u] d_y u) = F,
//   vbar[u] = - int_0^y d_x|y u.

#include <functional>
#include <vector>

#include "bl/grid.hpp"

namespace bl {

struct MarchProblem {
  const SimilarityGrid* g = nullptr;
  const Field* a0 = nullptr;  // ubar_B
  const Field* a1 = nullptr;  // d_x ubar_B
  const Field* a2 = nullptr;  // vbar_B
  const Field* a3 = nullptr;  // d_y ubar_B
  const Field* forcing = nullptr;  // may be null (zero)
  std::vector<double> datum;       // u at station 0
  double quad = 0.0;               // quadratic coupling strength (delta*)
  double tol = 1e-10;
  int max_picard = 50;
  int max_newton = 25;
  // optional guard evaluated after each station; returns false to abort
  std::function<bool(std::size_t, const double*)> station_guard;
};

struct StationLog {
  int picard = 0;
  int newton = 0;
  double residual = 0.0;
};

struct MarchResult {
  Field u;
  Field vbar;  // output reconstruction: -int_0^y d_x|y u, centered stencils
  std::vector<StationLog> log;
  int max_picard_seen = 0;
};

MarchResult march(const MarchProblem& p);

// Residual of the marched equation evaluated with centered (output-grade)
// stencils; for refinement studies.
Field march_residual(const MarchProblem& p, const Field& u);

}  // namespace bl
