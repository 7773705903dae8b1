#pragma once
// Abstract linearized Prandtl problem around a Background: boundary
// homogenization through the compactly supported lift phi, the marched solve,
// the good-variable transform q = psi/ubar_B, and parabolic compatibility
// reports.

#include <array>
#include <string>
#include <vector>

#include "bl/grid.hpp"
#include "bl/march.hpp"
#include "bl/prandtl.hpp"

namespace bl {

// phi: C^inf-type lift with phi(0) = 1, supp phi in [0,1), int_0^inf phi = 0.
// Ihat(z) = int_0^z phi, Jhat(z) = int_0^z w phi'(w) dw; both vanish for z>=1.
struct LiftPhi {
  double operator()(double z) const { return eval(z, 0); }
  double eval(double z, int order) const;  // order <= 2
  double Ihat(double z) const;
  double Jhat(double z) const;
  double B = 0.0;  // fixed by the zero-mean constraint
};

LiftPhi make_phi();

struct HomogenizedProblem {
  const SimilarityGrid* g = nullptr;
  Field H;                      // homogenization forcing H^{(i)}_p
  std::vector<double> trace;    // e(x) = u^i_E(x, 0)
  std::vector<double> trace_x;  // e'(x)
  std::vector<double> phi_z;    // phi at grid z-nodes
  std::vector<double> Ihat_z, Jhat_z;
  std::vector<double> datum;    // homogenized datum u0 + phi e(0)
};

// Lift the inhomogeneous wall condition u^i_p(x,0) = -e(x) into the forcing.
// `raw_datum` is U^i_p at x = 0 sampled on the z-line.
HomogenizedProblem homogenize(const std::vector<double>& trace,
                              const std::vector<double>& trace_x,
                              const std::vector<double>& raw_datum,
                              const Background& bg);

struct LinearSolveResult {
  Field u;      // homogenized unknown
  Field vbar;   // -int_0^y d_x u
  Field u_raw;  // u^i_p = u - phi e(x)
  Field vbar_raw;  // vbar^i_p
  std::vector<double> v_wall;  // v^i_p(x,0) = -vbar^i_p(x,infinity)
  std::vector<StationLog> log;
};

// March the homogenized problem with total forcing F (layer bundle) plus the
// homogenization forcing; same scheme contract as the nonlinear march.
LinearSolveResult solve_linear(const HomogenizedProblem& hp, const Field* F,
                               const Background& bg, MarchOptions opts = {});

struct GoodVariables {
  Field q;  // psi / ubar_B, wall value by one-sided Taylor ratio
  Field U;  // d_y q
  Field V;  // -d_x q
};

// u must vanish at the wall; wall shear of the background must stay positive.
GoodVariables to_good_variables(const Field& u, const Background& bg);

struct CompatReport {
  double order0 = 0.0;          // |U^i_p(0) + u^i_E(0,0)|
  double order1 = 0.0;          // extrapolated wall value of the comp-2 bracket
  std::vector<double> order1_samples;  // bracket at the first interior nodes
};

// order: 0 or 1. F may be null (treated as zero forcing). The first-order
// condition reduces at the corner to W(0) = 0 with
// W(y) = F(0,y) - (ubar_Bx U + vbar_B U' - U''); the singular 1/ubar_B
// quotients of the full bracket cancel there, so the report extrapolates W
// wall-ward from the first interior nodes.
CompatReport check_compatibility(const Datum& datum, const Field* F,
                                 double trace00, const Background& bg,
                                 int order);

}  // namespace bl
