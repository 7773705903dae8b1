#pragma once
// Blasius self-similar profile: shooting solve of the similarity ODE and
// analytic evaluation of [ubar*, vbar*] with derivatives of any requested
// order on a SimilarityGrid. No numerical differentiation of f is used; all
// derivatives go through the similarity chain rule and the ODE identity
// f''' = -1/2 f f''.

#include <map>
#include <vector>

#include "bl/grid.hpp"

namespace bl {

struct BlasiusProfile {
  // dense uniform line
  double h = 1e-4;
  double z_far = 15.0;
  std::vector<double> f, fp, fpp;
  double fpp0 = 0.0;   // shooting parameter f''(0)
  double x0 = 1.0;     // leading-edge convention, fixed
  double tol = 0.0;

  double displacement() const { return z_far - f.back(); }  // lim (z - f)

  // f^{(0..n)} at arbitrary z (quintic Hermite between dense nodes, ODE
  // recursion above order 2; asymptotic branch beyond z_far).
  void jet(double z, int n, double* out) const;
  double eval_f(double z) const;
  double eval_fp(double z) const;
  double eval_fpp(double z) const;
};

BlasiusProfile solve_blasius(double tol);

// A self-similar quantity X^{-r} * G(z) sampled at the grid's z-nodes.
struct SelfSimilar {
  double r = 0.0;
  std::vector<double> G;
};

class BlasiusField {
 public:
  BlasiusField() = default;
  BlasiusField(BlasiusProfile prof, const SimilarityGrid* g,
               RegularityBudget budget);

  // d_x^k d_y^j of ubar* = f'(z) and vbar* = (z f' - f) / (2 sqrt(x+1)).
  const Field& ubar(int k, int j) const;
  const Field& vbar(int k, int j) const;
  SelfSimilar ubar_ss(int k, int j) const;
  SelfSimilar vbar_ss(int k, int j) const;

  // vbar*(x, infinity) = disp/2 * X^{-1/2}
  double v_infinity(std::size_t station) const;
  // d_y ubar*(x, 0) = f''(0) X^{-1/2}
  std::vector<double> wall_shear() const;

  const BlasiusProfile& profile() const { return prof_; }
  const SimilarityGrid& grid() const { return *g_; }
  const RegularityBudget& budget() const { return budget_; }

 private:
  SelfSimilar derive(bool v_part, int k, int j) const;
  const Field& materialize(std::map<std::pair<int, int>, Field>& cache,
                           bool v_part, int k, int j) const;

  BlasiusProfile prof_;
  const SimilarityGrid* g_ = nullptr;
  RegularityBudget budget_;
  int jet_len_ = 0;
  std::vector<std::vector<double>> fjet_;  // per z-node: f^{(0..jet_len-1)}
  mutable std::map<std::pair<int, int>, Field> ucache_, vcache_;
};

BlasiusField eval_blasius(const BlasiusProfile& prof, const SimilarityGrid& g,
                          RegularityBudget budget);

}  // namespace bl
