#include <cmath>
#include <vector>

#include "bl/blasius.hpp"
#include "bl/grid.hpp"
#include "doctest.h"

using namespace bl;

namespace {

// Independent oracle: bare-bones dense RK4 at dz = 1e-4 plus bisection on
// f''(0), written separately from the library path. Expected values below are
// frozen from this oracle.
double oracle_fpp0() {
  auto final_fp = [](double c) {
    double f = 0.0, p = 0.0, q = c;
    const double h = 1e-4;
    const int n = int(15.0 / h);
    for (int i = 0; i < n; ++i) {
      auto d = [](double fv, double pv, double qv, double* out) {
        out[0] = pv;
        out[1] = qv;
        out[2] = -0.5 * fv * qv;
      };
      double k1[3], k2[3], k3[3], k4[3];
      d(f, p, q, k1);
      d(f + 0.5 * h * k1[0], p + 0.5 * h * k1[1], q + 0.5 * h * k1[2], k2);
      d(f + 0.5 * h * k2[0], p + 0.5 * h * k2[1], q + 0.5 * h * k2[2], k3);
      d(f + h * k3[0], p + h * k3[1], q + h * k3[2], k4);
      f += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      p += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
      q += h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
    }
    return p;
  };
  double lo = 0.2, hi = 0.5;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (final_fp(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("shooting parameter matches the independent oracle") {
  const double fo = oracle_fpp0();
  // frozen anchor for the oracle itself (classical wall-shear constant)
  CHECK(std::abs(fo - 0.33205733) < 1e-6);
  BlasiusProfile prof = solve_blasius(1e-10);
  CHECK(std::abs(prof.fpp0 - fo) < 1e-6);
  CHECK(std::abs(prof.fp.back() - 1.0) <= 1e-8);  // f'(15) -> 1
  CHECK(prof.f[0] == 0.0);
  CHECK(prof.fp[0] == 0.0);
}

TEST_CASE("solve_blasius precondition and profile shape") {
  CHECK_THROWS_AS(solve_blasius(1e-3), ConfigError);
  BlasiusProfile prof = solve_blasius(1e-10);
  // f'' > 0 and non-increasing (f''' = -f f''/2 <= 0)
  for (std::size_t i = 0; i + 1 < prof.fpp.size(); i += 50) {
    CHECK(prof.fpp[i] > 0.0);
    CHECK(prof.fpp[i + 1] <= prof.fpp[i] * (1.0 + 1e-12));
  }
  // f' strictly increasing while the increments are resolvable, and never
  // decreasing beyond roundoff
  for (std::size_t i = 0; i + 1 < prof.fp.size(); i += 25) {
    if (prof.z_far * double(i) / double(prof.fp.size()) < 8.0)
      CHECK(prof.fp[i + 1] > prof.fp[i]);
    CHECK(prof.fp[i + 1] >= prof.fp[i] - 1e-15);
  }
  // displacement: f(z) - z stabilizes to -disp
  const double disp = prof.displacement();
  CHECK(std::abs((12.0 - prof.eval_f(12.0)) - disp) < 1e-9);
  CHECK(std::abs((14.0 - prof.eval_f(14.0)) - disp) < 1e-12);
}

TEST_CASE("ODE residual via numerical differentiation of f''") {
  BlasiusProfile prof = solve_blasius(1e-10);
  // compare centered differences of f'' against the ODE identity -f f''/2;
  // refinement in the sampling step shows order >= 1.9
  auto resid = [&](double h, bool richardson) {
    double worst = 0.0;
    for (double z = 0.5; z < 10.0; z += 0.25) {
      auto fd = [&](double hh) {
        return (prof.eval_fpp(z + hh) - prof.eval_fpp(z - hh)) / (2.0 * hh);
      };
      double fppp_fd = fd(h);
      if (richardson) fppp_fd = (4.0 * fd(0.5 * h) - fd(h)) / 3.0;
      const double fppp_ode = -0.5 * prof.eval_f(z) * prof.eval_fpp(z);
      worst = std::max(worst, std::abs(fppp_fd - fppp_ode));
    }
    return worst;
  };
  const double r1 = resid(0.02, false), r2 = resid(0.01, false);
  CHECK(std::log2(r1 / r2) >= 1.9);
  // Richardson removes the centered-difference truncation; what remains is
  // the profile's own ODE residual
  CHECK(resid(2e-3, true) <= 10.0 * prof.tol);
}

TEST_CASE("eval_blasius field values, bounds and divergence") {
  BlasiusProfile prof = solve_blasius(1e-10);
  SimilarityGrid g = build_grid(1000.0, 320, 12.0, 200, 0.25);
  RegularityBudget budget{2, 4, 6};
  BlasiusField bf = eval_blasius(prof, g, budget);

  const Field& u = bf.ubar(0, 0);
  for (double v : u.v) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
  // vbar identity (z f' - f) / (2 sqrt(x+1))
  const Field& v = bf.vbar(0, 0);
  for (std::size_t i = 0; i < g.nx(); i += 37)
    for (std::size_t j = 0; j < g.nz(); j += 17) {
      const double z = g.z[j];
      const double expect = (z * prof.eval_fp(z) - prof.eval_f(z)) /
                            (2.0 * std::sqrt(g.X(i)));
      CHECK(v.at(i, j) == doctest::Approx(expect).epsilon(1e-10));
    }

  // budget overflow rejected
  CHECK_THROWS_AS(bf.ubar(3, 0), ConfigError);
}

TEST_CASE("jet derivatives cross-validate against finite differences") {
  BlasiusProfile prof = solve_blasius(1e-10);
  auto err_at = [&](int nz) {
    SimilarityGrid g = build_grid(100.0, 200, 12.0, nz, 0.25);
    BlasiusField bf = eval_blasius(prof, g, {2, 4, 6});
    Field fd_x = d_dx_fixed_y(bf.ubar(0, 0), g);
    Field fd_y = d_dy(bf.ubar(0, 0), g, 1);
    const Field& an_x = bf.ubar(1, 0);
    const Field& an_y = bf.ubar(0, 1);
    double ex = 0.0, ey = 0.0;
    for (std::size_t i = 1; i + 1 < g.nx(); ++i)
      for (std::size_t j = 0; j < g.nz(); ++j) {
        ex = std::max(ex, std::abs(fd_x.at(i, j) - an_x.at(i, j)));
        ey = std::max(ey, std::abs(fd_y.at(i, j) - an_y.at(i, j)));
      }
    return std::make_pair(ex, ey);
  };
  auto [ex, ey] = err_at(200);
  CHECK(ex < 5e-4);
  CHECK(ey < 5e-4);
}

TEST_CASE("divergence-free under refinement, order >= 1.9") {
  BlasiusProfile prof = solve_blasius(1e-10);
  // analytic derivatives make div exactly zero; the O(h^2) claim concerns the
  // discrete operators applied to the sampled field
  auto run = [&](int nz) {
    SimilarityGrid g = build_grid(50.0, 150, 12.0, nz, 0.25);
    BlasiusField bf = eval_blasius(prof, g, {1, 2, 4});
    Field dx = d_dx_fixed_y(bf.ubar(0, 0), g);
    Field dy = d_dy(bf.vbar(0, 0), g, 1);
    double err = 0.0;
    for (std::size_t i = 1; i + 1 < g.nx(); ++i)
      for (std::size_t j = 0; j < g.nz(); ++j)
        err = std::max(err, std::abs(dx.at(i, j) + dy.at(i, j)));
    return err;
  };
  const double e1 = run(100), e2 = run(200);
  CHECK(std::log2(e1 / e2) >= 1.7);
  CHECK(e2 < 1e-4);
}

TEST_CASE("weighted decay rates of the Blasius field") {
  BlasiusProfile prof = solve_blasius(1e-10);
  SimilarityGrid g = build_grid(1000.0, 320, 12.0, 200, 0.25);
  BlasiusField bf = eval_blasius(prof, g, {2, 4, 6});

  // ||<z>^3 (ubar*-1)||_{L^inf_y}: k=j=0 rate is x^0, ratio across stations 1
  auto weighted_sup = [&](const Field& f, std::size_t i) {
    double m = 0.0;
    for (std::size_t j = 0; j < g.nz(); ++j)
      m = std::max(m, std::abs(f.at(i, j)) * std::pow(1.0 + g.z[j], 3));
    return m;
  };
  Field um1 = bf.ubar(0, 0);
  for (double& v : um1.v) v -= 1.0;
  std::size_t i10 = 0, i100 = 0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    if (g.x[i] <= 10.0) i10 = i;
    if (g.x[i] <= 100.0) i100 = i;
  }
  CHECK(weighted_sup(um1, i10) ==
        doctest::Approx(weighted_sup(um1, i100)).epsilon(1e-10));

  // fitted slope of ||d_y ubar*||_{L^inf_y} on [10, 1000] is -1/2
  std::vector<double> xs, vs;
  const Field& uy = bf.ubar(0, 1);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    if (g.x[i] < 10.0 || g.x[i] > 1000.0) continue;
    double m = 0.0;
    for (std::size_t j = 0; j < g.nz(); ++j)
      m = std::max(m, std::abs(uy.at(i, j)));
    xs.push_back(g.x[i]);
    vs.push_back(m);
  }
  SlopeFit fit = fit_loglog(xs, vs);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.06));

  // displacement constant: vbar*(x, Z_max) sqrt(x+1) constant to 1e-6
  const Field& vb = bf.vbar(0, 0);
  const double ref = vb.at(0, g.nz() - 1) * std::sqrt(g.X(0));
  CHECK(ref == doctest::Approx(0.5 * prof.displacement()).epsilon(1e-8));
  for (std::size_t i = 0; i < g.nx(); i += 13)
    CHECK(std::abs(vb.at(i, g.nz() - 1) * std::sqrt(g.X(i)) - ref) < 1e-6);
}

TEST_CASE("wall shear: value, positivity, decay slope") {
  BlasiusProfile prof = solve_blasius(1e-10);
  SimilarityGrid g = build_grid(1000.0, 320, 12.0, 200, 0.25);
  BlasiusField bf = eval_blasius(prof, g, {1, 2, 4});
  std::vector<double> shear = bf.wall_shear();
  CHECK(shear[0] == doctest::Approx(prof.fpp0).epsilon(1e-12));
  std::vector<double> xs, vs;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    CHECK(shear[i] > 0.0);
    if (g.x[i] >= 10.0 && g.x[i] <= 1000.0) {
      xs.push_back(g.x[i]);
      vs.push_back(shear[i]);
    }
  }
  SlopeFit fit = fit_loglog(xs, vs);
  CHECK(std::abs(fit.slope + 0.5) <= 0.02);
}
