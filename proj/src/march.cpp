#include "bl/march.hpp"

#include <cmath>
#include <string>

namespace bl {

namespace {

struct StationWork {
  const SimilarityGrid* g;
  std::size_t i;        // station index being solved
  double X, sX, dx;
  const double* uprev;  // row i-1
  const double* a0;
  const double* a1;
  const double* a2;
  const double* a3;
  const double* F;      // may be null
  double quad;

  std::size_t nz() const { return g->nz(); }

  // alpha, beta, gamma stencil factors (see march.hpp derivation)
  double alpha(std::size_t j) const { return 1.0 / (2.0 * g->hs * g->zs[j]); }
  double beta(std::size_t j) const { return 1.0 / (g->hs * g->hs * g->zs[j] * g->zs[j]); }
  double gamma(std::size_t j) const {
    return g->zss[j] / (2.0 * g->hs * g->zs[j] * g->zs[j] * g->zs[j]);
  }

  void vbar_of(const std::vector<double>& w, std::vector<double>& vb) const {
    // vbar = -sqrt(X) * cumtrapz_z(d_x|y w)
    const std::size_t n = nz();
    std::vector<double> dxy(n);
    for (std::size_t j = 0; j < n; ++j) {
      double wz;
      if (j == 0)
        wz = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * g->hs) / g->zs[0];
      else if (j == n - 1)
        wz = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * g->hs) / g->zs[j];
      else
        wz = (w[j + 1] - w[j - 1]) * alpha(j);
      dxy[j] = (w[j] - uprev[j]) / dx - 0.5 * g->z[j] / X * wz;
    }
    vb[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      const double dz = g->z[j] - g->z[j - 1];
      vb[j] = vb[j - 1] + 0.5 * dz * (dxy[j] + dxy[j - 1]);
    }
    for (std::size_t j = 0; j < n; ++j) vb[j] *= -sX;
  }

  // full residual on interior nodes with given vbar
  double residual(const std::vector<double>& w, const std::vector<double>& vb,
                  std::vector<double>* out) const {
    const std::size_t n = nz();
    double sup = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double wz = (w[j + 1] - w[j - 1]) * alpha(j);
      const double wzz = beta(j) * (w[j + 1] - 2.0 * w[j] + w[j - 1]) -
                         gamma(j) * (w[j + 1] - w[j - 1]);
      const double dxy = (w[j] - uprev[j]) / dx - 0.5 * g->z[j] / X * wz;
      double r = a0[j] * dxy + a1[j] * w[j] + a2[j] * wz / sX + a3[j] * vb[j] -
                 wzz / X;
      if (quad != 0.0) r += quad * (w[j] * dxy + vb[j] * wz / sX);
      if (F) r -= F[j];
      if (out) (*out)[j] = r;
      sup = std::max(sup, std::abs(r));
    }
    return sup;
  }

  // one Newton step for the local system with frozen vbar
  void newton_step(std::vector<double>& w, const std::vector<double>& vb) const {
    const std::size_t n = nz();
    std::vector<double> sub(n, 0.0), dia(n, 1.0), sup(n, 0.0), rhs(n, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double al = alpha(j), be = beta(j), ga = gamma(j);
      const double wz = (w[j + 1] - w[j - 1]) * al;
      const double wzz = be * (w[j + 1] - 2.0 * w[j] + w[j - 1]) -
                         ga * (w[j + 1] - w[j - 1]);
      const double dxy = (w[j] - uprev[j]) / dx - 0.5 * g->z[j] / X * wz;
      double r = a0[j] * dxy + a1[j] * w[j] + a2[j] * wz / sX + a3[j] * vb[j] -
                 wzz / X;
      if (quad != 0.0) r += quad * (w[j] * dxy + vb[j] * wz / sX);
      if (F) r -= F[j];
      rhs[j] = -r;

      const double zc = 0.5 * g->z[j] / X;
      double d = a0[j] / dx + a1[j] + 2.0 * be / X;
      double lo = a0[j] * zc * al - a2[j] * al / sX - be / X - ga / X;
      double hi = -a0[j] * zc * al + a2[j] * al / sX - be / X + ga / X;
      if (quad != 0.0) {
        d += quad * (dxy + w[j] / dx);
        lo += quad * (w[j] * zc * al - vb[j] * al / sX);
        hi += quad * (-w[j] * zc * al + vb[j] * al / sX);
      }
      sub[j] = lo;
      dia[j] = d;
      sup[j] = hi;
    }
    // Dirichlet rows pinned at zero correction
    dia[0] = 1.0;
    sup[0] = 0.0;
    rhs[0] = 0.0;
    sub[n - 1] = 0.0;
    dia[n - 1] = 1.0;
    rhs[n - 1] = 0.0;
    solve_tridiag(sub, dia, sup, rhs);
    for (std::size_t j = 0; j < n; ++j) w[j] += rhs[j];
  }
};

}  // namespace

MarchResult march(const MarchProblem& p) {
  const SimilarityGrid& g = *p.g;
  const std::size_t nx = g.nx(), nz = g.nz();
  if (p.datum.size() != nz) throw ConfigError("march: datum size mismatch");
  if (std::abs(p.datum.front()) > 1e-12 || std::abs(p.datum.back()) > 1e-12)
    throw ConfigError("march: datum must vanish at z=0 and z=Z_max");

  MarchResult res;
  res.u = Field(nx, nz);
  res.log.resize(nx);
  for (std::size_t j = 0; j < nz; ++j) res.u.at(0, j) = p.datum[j];

  std::vector<double> w(nz), vb(nz, 0.0), vb_new(nz);
  for (std::size_t i = 1; i < nx; ++i) {
    StationWork st;
    st.g = &g;
    st.i = i;
    st.X = g.X(i);
    st.sX = std::sqrt(st.X);
    st.dx = g.x[i] - g.x[i - 1];
    st.uprev = res.u.row(i - 1);
    st.a0 = p.a0->row(i);
    st.a1 = p.a1->row(i);
    st.a2 = p.a2->row(i);
    st.a3 = p.a3->row(i);
    st.F = p.forcing ? p.forcing->row(i) : nullptr;
    st.quad = p.quad;

    for (std::size_t j = 0; j < nz; ++j) w[j] = st.uprev[j];
    w[0] = 0.0;
    w[nz - 1] = 0.0;
    st.vbar_of(w, vb);

    int picard = 0, newton_total = 0;
    double sup = 0.0;
    for (;; ++picard) {
      if (picard >= p.max_picard)
        throw NumericError("march: Picard failed to converge at station " +
                           std::to_string(i) + " (x=" + std::to_string(g.x[i]) +
                           "), residual " + std::to_string(sup));
      // inner Newton on local terms, vbar frozen
      for (int nit = 0; nit < p.max_newton; ++nit) {
        st.newton_step(w, vb);
        ++newton_total;
        if (st.residual(w, vb, nullptr) <= 0.1 * p.tol) break;
        if (p.quad == 0.0) break;  // linear: one solve is exact
      }
      st.vbar_of(w, vb_new);
      sup = st.residual(w, vb_new, nullptr);
      vb = vb_new;
      if (sup <= p.tol) break;
    }
    res.log[i] = {picard + 1, newton_total, sup};
    res.max_picard_seen = std::max(res.max_picard_seen, picard + 1);
    for (std::size_t j = 0; j < nz; ++j) res.u.at(i, j) = w[j];
    if (p.station_guard && !p.station_guard(i, w.data()))
      throw NumericError("march: station guard aborted at station " +
                         std::to_string(i) + " (x=" + std::to_string(g.x[i]) + ")");
  }

  Field dxu = d_dx_fixed_y(res.u, g);
  res.vbar = integrate_y(dxu, g, IntegrateFrom::Zero).f;
  for (double& v : res.vbar.v) v = -v;
  return res;
}

Field march_residual(const MarchProblem& p, const Field& u) {
  const SimilarityGrid& g = *p.g;
  Field ux = d_dx_fixed_y(u, g);
  Field uy = d_dy(u, g, 1);
  Field uyy = d_dy(u, g, 2);
  Field vb = integrate_y(ux, g, IntegrateFrom::Zero).f;
  for (double& v : vb.v) v = -v;
  Field r(u.nx, u.nz);
  for (std::size_t i = 0; i < u.nx; ++i)
    for (std::size_t j = 0; j < u.nz; ++j) {
      double val = p.a0->at(i, j) * ux.at(i, j) + p.a1->at(i, j) * u.at(i, j) +
                   p.a2->at(i, j) * uy.at(i, j) + p.a3->at(i, j) * vb.at(i, j) -
                   uyy.at(i, j);
      if (p.quad != 0.0)
        val += p.quad * (u.at(i, j) * ux.at(i, j) + vb.at(i, j) * uy.at(i, j));
      if (p.forcing) val -= p.forcing->at(i, j);
      r.at(i, j) = val;
    }
  return r;
}

}  // namespace bl
