#include "bl/linear.hpp"

#include <cmath>

namespace bl {

namespace {

// b1(w) = exp(w^2/(w^2-1)) on [0,1): value 1 at 0, C^inf, supported [0,1)
double b1(double w, int order) {
  if (w <= -1.0 || w >= 1.0) return 0.0;
  const double d = w * w - 1.0;
  const double g = w * w / d;
  const double e = std::exp(g);
  if (order == 0) return e;
  const double gp = -2.0 * w / (d * d);
  if (order == 1) return gp * e;
  const double gpp = -2.0 / (d * d) + 8.0 * w * w / (d * d * d);
  return (gpp + gp * gp) * e;
}

// bump centered at c with half width s, zero value/derivatives at the edges
double b2(double w, int order) {
  const double c = 0.5, s = 0.3;
  const double t = (w - c) / s;
  if (t <= -1.0 || t >= 1.0) return 0.0;
  const double d = 1.0 - t * t;
  const double e = std::exp(-1.0 / d);
  if (order == 0) return e;
  const double hp = -2.0 * t / (d * d);
  if (order == 1) return hp * e / s;
  // h(t) = -1/d; h' = -2t/d^2; h'' = -2/d^2 - 8t^2/d^3
  const double hpp = -2.0 / (d * d) - 8.0 * t * t / (d * d * d);
  return (hpp + hp * hp) * e / (s * s);
}

}  // namespace

LiftPhi make_phi() {
  LiftPhi phi;
  const double I1 = adaptive_simpson([](double w) { return b1(w, 0); }, 0.0, 1.0, 1e-13);
  const double I2 = adaptive_simpson([](double w) { return b2(w, 0); }, 0.0, 1.0, 1e-13);
  phi.B = I1 / I2;
  return phi;
}

double LiftPhi::eval(double z, int order) const {
  return b1(z, order) - B * b2(z, order);
}

double LiftPhi::Ihat(double z) const {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 0.0;  // zero mean on the full support
  const double B_ = B;
  return adaptive_simpson([B_](double w) { return b1(w, 0) - B_ * b2(w, 0); },
                          0.0, z, 1e-12);
}

double LiftPhi::Jhat(double z) const {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 0.0;  // int_0^inf w phi'(w) dw = 0
  const double B_ = B;
  return adaptive_simpson(
      [B_](double w) { return w * (b1(w, 1) - B_ * b2(w, 1)); }, 0.0, z, 1e-12);
}

HomogenizedProblem homogenize(const std::vector<double>& trace,
                              const std::vector<double>& trace_x,
                              const std::vector<double>& raw_datum,
                              const Background& bg) {
  const SimilarityGrid& g = bg.grid();
  if (trace.size() != g.nx() || trace_x.size() != g.nx())
    throw ConfigError("homogenize: wall trace must be sampled at every station with one x-derivative");
  if (raw_datum.size() != g.nz())
    throw ConfigError("homogenize: datum size mismatch");

  LiftPhi phi = make_phi();
  HomogenizedProblem hp;
  hp.g = &g;
  hp.trace = trace;
  hp.trace_x = trace_x;
  hp.phi_z.resize(g.nz());
  hp.Ihat_z.resize(g.nz());
  hp.Jhat_z.resize(g.nz());
  std::vector<double> phi_p(g.nz()), phi_pp(g.nz());
  for (std::size_t j = 0; j < g.nz(); ++j) {
    hp.phi_z[j] = phi.eval(g.z[j], 0);
    phi_p[j] = phi.eval(g.z[j], 1);
    phi_pp[j] = phi.eval(g.z[j], 2);
    hp.Ihat_z[j] = phi.Ihat(g.z[j]);
    hp.Jhat_z[j] = phi.Jhat(g.z[j]);
  }

  // H^{(i)}_p, assembled term by term:
  //   ub phi e' - (z/2X) ub phi' e + ub_x phi e + vb X^{-1/2} phi' e
  //   - ub_y e' sqrt(X) Ihat + ub_y (e/(2 sqrt X)) Jhat - (1/X) phi'' e
  const Field& ub = bg.ub(0, 0);
  const Field& ubx = bg.ub(1, 0);
  const Field& uby = bg.ub(0, 1);
  const Field& vb = bg.vb(0, 0);
  hp.H = Field(g.nx(), g.nz());
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double X = g.X(i), sX = std::sqrt(X);
    const double e = trace[i], ep = trace_x[i];
    for (std::size_t j = 0; j < g.nz(); ++j) {
      const double z = g.z[j];
      double h = ub.at(i, j) * hp.phi_z[j] * ep;
      h -= 0.5 * z / X * ub.at(i, j) * phi_p[j] * e;
      h += ubx.at(i, j) * hp.phi_z[j] * e;
      h += vb.at(i, j) * phi_p[j] * e / sX;
      h -= uby.at(i, j) * ep * sX * hp.Ihat_z[j];
      h += uby.at(i, j) * e / (2.0 * sX) * hp.Jhat_z[j];
      h -= phi_pp[j] * e / X;
      hp.H.at(i, j) = h;
    }
  }

  hp.datum.resize(g.nz());
  for (std::size_t j = 0; j < g.nz(); ++j)
    hp.datum[j] = raw_datum[j] + hp.phi_z[j] * trace[0];
  if (std::abs(hp.datum[0]) > 1e-9)
    throw ConfigError("homogenize: datum violates zeroth-order compatibility "
                      "U(0) + u_E(0,0) = " + std::to_string(hp.datum[0]));
  hp.datum[0] = 0.0;
  hp.datum.back() = 0.0;
  return hp;
}

LinearSolveResult solve_linear(const HomogenizedProblem& hp, const Field* F,
                               const Background& bg, MarchOptions opts) {
  const SimilarityGrid& g = bg.grid();
  Field total = hp.H;
  if (F) {
    for (std::size_t n = 0; n < total.v.size(); ++n) total.v[n] += F->v[n];
  }
  MarchProblem p;
  p.g = &g;
  p.a0 = &bg.ub(0, 0);
  p.a1 = &bg.ub(1, 0);
  p.a2 = &bg.vb(0, 0);
  p.a3 = &bg.ub(0, 1);
  p.forcing = &total;
  p.datum = hp.datum;
  p.quad = 0.0;
  p.tol = opts.tol;
  p.max_picard = opts.max_picard;
  MarchResult r = march(p);

  LinearSolveResult out;
  out.u = std::move(r.u);
  out.vbar = std::move(r.vbar);
  out.log = std::move(r.log);

  out.u_raw = Field(g.nx(), g.nz());
  out.vbar_raw = Field(g.nx(), g.nz());
  out.v_wall.resize(g.nx());
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double X = g.X(i), sX = std::sqrt(X);
    const double e = hp.trace[i], ep = hp.trace_x[i];
    for (std::size_t j = 0; j < g.nz(); ++j) {
      out.u_raw.at(i, j) = out.u.at(i, j) - hp.phi_z[j] * e;
      out.vbar_raw.at(i, j) = out.vbar.at(i, j) + ep * sX * hp.Ihat_z[j] -
                              e / (2.0 * sX) * hp.Jhat_z[j];
    }
    out.v_wall[i] = -out.vbar_raw.at(i, g.nz() - 1);
  }
  return out;
}

GoodVariables to_good_variables(const Field& u, const Background& bg) {
  const SimilarityGrid& g = bg.grid();
  for (std::size_t i = 0; i < g.nx(); ++i)
    if (std::abs(u.at(i, 0)) > 1e-9)
      throw ConfigError("to_good_variables: u must vanish at the wall");
  const std::vector<double> shear = bg.wall_shear();
  for (double s : shear)
    if (s < 1e-8)
      throw NumericError("to_good_variables: wall shear below 1e-8, transform singular");

  Field psi = integrate_y(u, g, IntegrateFrom::Zero).f;
  const Field& ub = bg.ub(0, 0);
  GoodVariables gv;
  gv.q = Field(g.nx(), g.nz());
  for (std::size_t i = 0; i < g.nx(); ++i) {
    gv.q.at(i, 0) = 0.0;  // psi/ubar_B vanishes linearly at the wall
    for (std::size_t j = 1; j < g.nz(); ++j)
      gv.q.at(i, j) = psi.at(i, j) / ub.at(i, j);
  }
  gv.U = d_dy(gv.q, g, 1);
  // wall row by the Taylor ratio: U(x,0) = u_y(x,0) / (2 ubar_By(x,0)),
  // three-point one-sided stencils
  Field uy = d_dy(u, g, 1);
  for (std::size_t i = 0; i < g.nx(); ++i)
    gv.U.at(i, 0) = 0.5 * uy.at(i, 0) / shear[i];
  gv.V = d_dx_fixed_y(gv.q, g);
  for (double& v : gv.V.v) v = -v;
  return gv;
}

CompatReport check_compatibility(const Datum& datum, const Field* F,
                                 double trace00, const Background& bg,
                                 int order) {
  const SimilarityGrid& g = bg.grid();
  CompatReport rep;
  rep.order0 = std::abs(datum.u0[0] + trace00);
  if (order == 0) return rep;

  // W(y) = F(0,y) - (ub_x U + vb U' - U'') at x = 0; first-order parabolic
  // compatibility is W(0) = 0 (all transport factors vanish at the corner).
  const Field& ubx = bg.ub(1, 0);
  const Field& vb = bg.vb(0, 0);
  const std::size_t nz = g.nz();
  std::vector<double> Up(nz), Upp(nz);
  if (!datum.u0_ypp.empty()) {
    Upp = datum.u0_ypp;
  } else {
    std::vector<double> us(nz), uss(nz);
    d_ds_uniform(datum.u0.data(), us.data(), nz, g.hs);
    d2_ds2_uniform(datum.u0.data(), uss.data(), nz, g.hs);
    for (std::size_t j = 0; j < nz; ++j)
      Upp[j] = (uss[j] - us[j] * g.zss[j] / g.zs[j]) / (g.zs[j] * g.zs[j]);
  }
  {
    std::vector<double> us(nz);
    d_ds_uniform(datum.u0.data(), us.data(), nz, g.hs);
    for (std::size_t j = 0; j < nz; ++j) Up[j] = us[j] / g.zs[j];
  }
  auto W = [&](std::size_t j) {
    double w = -(ubx.at(0, j) * datum.u0[j] + vb.at(0, j) * Up[j] - Upp[j]);
    if (F) w += F->at(0, j);
    return w;
  };
  // wall-ward samples of the bracket's finite part; linear extrapolation to 0
  const std::size_t ns = std::min<std::size_t>(6, nz - 2);
  double sy = 0, sw = 0, syy = 0, syw = 0;
  for (std::size_t j = 1; j <= ns; ++j) {
    const double y = g.z[j], w = W(j);
    rep.order1_samples.push_back(w);
    sy += y;
    sw += w;
    syy += y * y;
    syw += y * w;
  }
  const double n = double(ns);
  const double denom = n * syy - sy * sy;
  rep.order1 = std::abs((syy * sw - sy * syw) / denom);  // extrapolated W(0)
  return rep;
}

}  // namespace bl
