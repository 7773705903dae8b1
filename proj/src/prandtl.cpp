#include "bl/prandtl.hpp"

#include <cmath>

namespace bl {

namespace {

// Analytic derivative of shapes c * y^2 e^{-a y}; enough for the weighted
// C^l certificate without numerical differentiation.
struct Shape {
  double c = 0.0, a = 1.0;
  double eval(double y, int order) const {
    // d^n/dy^n [y^2 e^{-ay}] = e^{-ay} (-a)^{n-2} [ (ay)^2 - 2n a y + n(n-1) ] ... use
    // explicit small-order formulas (orders 0..4 suffice for certificates).
    const double e = std::exp(-a * y);
    switch (order) {
      case 0: return c * y * y * e;
      case 1: return c * e * (2.0 * y - a * y * y);
      case 2: return c * e * (2.0 - 4.0 * a * y + a * a * y * y);
      case 3: return c * e * (-6.0 * a + 6.0 * a * a * y - a * a * a * y * y);
      default: return c * e * (12.0 * a * a - 8.0 * a * a * a * y + a * a * a * a * y * y);
    }
  }
};

double certificate_of(const std::vector<Shape>& parts, const SimilarityGrid& g,
                      int m_wt, int l_wt) {
  double best = 0.0;
  for (int j = 0; j <= l_wt; ++j) {
    for (double y = 0.0; y <= g.z_max; y += 0.01) {
      double v = 0.0;
      for (const auto& p : parts) v += p.eval(y, j);
      best = std::max(best, std::abs(v) * std::pow(1.0 + y, m_wt));
    }
  }
  return best;
}

}  // namespace

Datum make_datum(const std::string& shape, double delta_star,
                 const SimilarityGrid& g) {
  if (!(delta_star >= 0.0 && delta_star <= 0.1))
    throw ConfigError("make_datum: delta* must lie in (0, 0.1] (or 0 for the zero datum)");
  Datum d;
  d.shape = shape;
  d.delta_star = delta_star;
  d.u0.assign(g.nz(), 0.0);
  if (shape == "zero") {
    d.compat0 = d.compat1 = true;
    return d;
  }

  std::vector<Shape> parts;
  if (shape == "bump") {
    // y^2(e^-y - e^-2y): vanishes quadratically, u0''(0) = 0 (first-order
    // wall compatibility of the perturbation system is u0''(0) = 0).
    parts.push_back({1.0, 1.0});
    parts.push_back({-1.0, 2.0});
  } else if (shape == "bump_wide") {
    parts.push_back({1.0, 0.5});
    parts.push_back({-1.0, 1.0});
  } else if (shape == "bump_incompatible") {
    // e^{-y} does not vanish at the wall
    throw ConfigError(
        "make_datum: shape violates zeroth-order parabolic compatibility "
        "(datum must vanish at y = 0)");
  } else {
    throw ConfigError("make_datum: unknown shape '" + shape + "'");
  }

  // normalize so the weighted certificate of delta* * u0 equals delta*
  const double cert1 = certificate_of(parts, g, d.m_weight, d.l_weight);
  const double scale = 1.0 / cert1;
  d.u0_ypp.assign(g.nz(), 0.0);
  for (std::size_t j = 0; j < g.nz(); ++j) {
    double v = 0.0, vpp = 0.0;
    for (const auto& p : parts) {
      v += p.eval(g.z[j], 0);
      vpp += p.eval(g.z[j], 2);
    }
    d.u0[j] = scale * v;
    d.u0_ypp[j] = scale * vpp;
  }
  d.u0.front() = 0.0;
  d.u0.back() = 0.0;
  d.certificate = delta_star;  // by normalization
  d.compat0 = true;
  // u0''(0) = scale * sum c_i * 2 = 0 by construction of the pair
  double upp0 = 0.0;
  for (const auto& p : parts) upp0 += p.eval(0.0, 2);
  d.compat1 = std::abs(upp0) < 1e-12;
  return d;
}

PerturbationField march_nonlinear(const Datum& datum, const BlasiusField& blas,
                                  const SimilarityGrid& g, MarchOptions opts) {
  if (!datum.compat0)
    throw ConfigError("march_nonlinear: datum violates compatibility");
  if (g.x[1] > 1e-3)
    throw ConfigError("march_nonlinear: grid startup station exceeds 1e-3");

  MarchProblem p;
  p.g = &g;
  p.a0 = &blas.ubar(0, 0);
  p.a1 = &blas.ubar(1, 0);
  p.a2 = &blas.vbar(0, 0);
  p.a3 = &blas.ubar(0, 1);
  p.datum = datum.u0;
  p.quad = datum.delta_star;
  p.tol = opts.tol;
  p.max_picard = opts.max_picard;

  // separation guard: wall shear of ubar* + delta* utilde must stay positive
  const double fpp0 = blas.profile().fpp0;
  const double ds = datum.delta_star;
  p.station_guard = [&g, fpp0, ds](std::size_t i, const double* w) {
    const double wz0 =
        (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * g.hs) / g.zs[0];
    const double shear = (fpp0 + ds * wz0) / std::sqrt(g.X(i));
    return shear > 0.0;
  };

  MarchResult r = march(p);
  PerturbationField out;
  out.u = std::move(r.u);
  out.vbar = std::move(r.vbar);
  out.delta_star = datum.delta_star;
  out.log = std::move(r.log);
  out.max_picard = r.max_picard_seen;
  return out;
}

Background::Background(const BlasiusField* blas, const PerturbationField* pert,
                       double delta_ss)
    : blas_(blas), pert_(pert), delta_ss_(delta_ss) {
  if (delta_ss_ != 0.0 && pert_ == nullptr)
    throw ConfigError("Background: delta** != 0 requires a perturbation field");
  if (pert_ != nullptr && delta_ss_ != 0.0) {
    uj_.emplace(pert_->u, &blas_->grid());
    vj_.emplace(pert_->vbar, &blas_->grid());
  }
}

const Field& Background::ub(int k, int j) const {
  auto it = ucache_.find({k, j});
  if (it != ucache_.end()) return it->second;
  Field f = blas_->ubar(k, j);
  if (!pure_blasius()) {
    const Field& p = uj_->get(k, j);
    for (std::size_t n = 0; n < f.v.size(); ++n) f.v[n] += delta_ss_ * p.v[n];
  }
  return ucache_.emplace(std::make_pair(std::make_pair(k, j), std::move(f)))
      .first->second;
}

const Field& Background::vb(int k, int j) const {
  auto it = vcache_.find({k, j});
  if (it != vcache_.end()) return it->second;
  Field f = blas_->vbar(k, j);
  if (!pure_blasius()) {
    const Field& p = vj_->get(k, j);
    for (std::size_t n = 0; n < f.v.size(); ++n) f.v[n] += delta_ss_ * p.v[n];
  }
  return vcache_.emplace(std::make_pair(std::make_pair(k, j), std::move(f)))
      .first->second;
}

std::vector<double> Background::wall_shear() const {
  const Field& uy = ub(0, 1);
  std::vector<double> out(grid().nx());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = uy.at(i, 0);
  return out;
}

std::vector<double> Background::ub0_slice() const {
  const Field& u = ub(0, 0);
  std::vector<double> out(grid().nz());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = u.at(0, j);
  return out;
}

Background background(const PerturbationField* pert, const BlasiusField& blas,
                      double delta_ss) {
  return Background(&blas, pert, delta_ss);
}

double b_of_z(double z) {
  if (z <= 0.75) return z;
  if (z >= 1.0) return 1.0;
  const double t = (z - 0.75) * 4.0;
  // quintic bridge: value/slope continuous, curvature zero at both ends
  const double h = t + 4.0 * t * t * t - 7.0 * t * t * t * t + 3.0 * t * t * t * t * t;
  return 0.75 + 0.25 * h;
}

}  // namespace bl
