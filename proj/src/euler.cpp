#include "bl/euler.hpp"

#include <cmath>

namespace bl {

namespace {

// dense LS polynomial fit of degree K on [0, win]; tiny normal-equation solve
std::vector<double> fit_poly(const CubicSpline& s, double win, int K) {
  const int n = K + 1, samples = 80;
  std::vector<double> A(n * n, 0.0), b(n, 0.0);
  for (int m = 0; m <= samples; ++m) {
    const double t = win * m / samples;
    const double y = s(t);
    double pw_i = 1.0;
    for (int i = 0; i < n; ++i) {
      double pw_j = 1.0;
      for (int j = 0; j < n; ++j) {
        A[i * n + j] += pw_i * pw_j;
        pw_j *= t;
      }
      b[i] += pw_i * y;
      pw_i *= t;
    }
  }
  // Gaussian elimination with partial pivoting
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
    for (int j = 0; j < n; ++j) std::swap(A[c * n + j], A[piv * n + j]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < n; ++r) {
      const double w = A[r * n + c] / A[c * n + c];
      for (int j = c; j < n; ++j) A[r * n + j] -= w * A[c * n + j];
      b[r] -= w * b[c];
    }
  }
  std::vector<double> coef(n);
  for (int c = n - 1; c >= 0; --c) {
    double acc = b[c];
    for (int j = c + 1; j < n; ++j) acc -= A[c * n + j] * coef[j];
    coef[c] = acc / A[c * n + c];
  }
  return coef;
}

double poly_eval(const std::vector<double>& c, double t, int order) {
  double out = 0.0;
  for (std::size_t p = order; p < c.size(); ++p) {
    double coef = c[p];
    for (int d = 0; d < order; ++d) coef *= double(p - d);
    out += coef * std::pow(t, double(p - order));
  }
  return out;
}

}  // namespace

BoundaryExtension extend_boundary(const std::vector<double>& xs,
                                  const std::vector<double>& gs, int K) {
  if (xs.size() != gs.size() || xs.size() < 8)
    throw ConfigError("extend_boundary: need matched samples (>= 8)");
  BoundaryExtension e;
  e.K_ = K;
  e.xmax_ = xs.back();
  e.blend_lo_ = 0.8 * e.xmax_;
  e.core_ = CubicSpline(xs, gs);
  e.c_ = gs.back() * std::sqrt(1.0 + e.xmax_);
  const double win = std::min(1.0, e.xmax_ / 10.0);
  e.taylor_ = fit_poly(e.core_, win, K);
  return e;
}

double BoundaryExtension::eval(double t, int order) const {
  if (t <= -1.0) return 0.0;
  if (t < 0.0) {
    // Taylor stub times the C^4 blend W(t+1): W(1)=1 with vanishing
    // derivatives, so g~ matches the Taylor data at 0 through order K
    const double W0 = smoothstep9(t + 1.0, 0);
    const double W1 = smoothstep9(t + 1.0, 1);
    const double W2 = smoothstep9(t + 1.0, 2);
    const double T0 = poly_eval(taylor_, t, 0);
    if (order == 0) return T0 * W0;
    const double T1 = poly_eval(taylor_, t, 1);
    if (order == 1) return T1 * W0 + T0 * W1;
    const double T2 = poly_eval(taylor_, t, 2);
    return T2 * W0 + 2.0 * T1 * W1 + T0 * W2;
  }
  auto model = [&](double tt, int o) {
    const double b = 1.0 + tt;
    if (o == 0) return c_ * std::pow(b, -0.5);
    if (o == 1) return -0.5 * c_ * std::pow(b, -1.5);
    return 0.75 * c_ * std::pow(b, -2.5);
  };
  if (t >= xmax_) return model(t, order);
  if (t <= blend_lo_) return core_.eval(t, order);
  const double span = xmax_ - blend_lo_;
  const double s = (t - blend_lo_) / span;
  const double W0 = smoothstep9(s, 0);
  const double W1 = smoothstep9(s, 1) / span;
  const double W2 = smoothstep9(s, 2) / (span * span);
  const double f0 = core_.eval(t, 0), m0 = model(t, 0);
  if (order == 0) return (1.0 - W0) * f0 + W0 * m0;
  const double f1 = core_.eval(t, 1), m1 = model(t, 1);
  if (order == 1) return (1.0 - W0) * f1 + W0 * m1 + W1 * (m0 - f0);
  const double f2 = core_.eval(t, 2), m2 = model(t, 2);
  return (1.0 - W0) * f2 + W0 * m2 + 2.0 * W1 * (m1 - f1) + W2 * (m0 - f0);
}

std::vector<double> make_euler_ynodes(double Y_max, int nY, double cluster) {
  if (nY < 16) throw ConfigError("make_euler_ynodes: need >= 16 nodes");
  std::vector<double> Y(nY);
  const double b = std::log(1.0 / cluster);
  for (int j = 0; j < nY; ++j) {
    const double s = double(j) / (nY - 1);
    Y[j] = (b < 1e-12) ? Y_max * s : Y_max * std::expm1(b * s) / std::expm1(b);
  }
  Y[0] = 0.0;
  return Y;
}

EulerLayer::EulerLayer(BoundaryExtension ext, std::vector<double> stations,
                       std::vector<double> ynodes, double quad_tol)
    : ext_(std::move(ext)), x_(std::move(stations)), Y_(std::move(ynodes)),
      tol_(quad_tol) {
  const std::size_t nx = x_.size(), nY = Y_.size();
  tab_.assign(4, std::vector<std::complex<double>>(nx * nY, 0.0));
  wall_u_.assign(nx, 0.0);
  wall_ux_.assign(nx, 0.0);
  wall_uxx_.assign(nx, 0.0);

  const double T1 = ext_.x_max() + 10.0;
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = x_[i];
    // principal-value wall quantities (1/pi) PV int g~^{(d)}(t)/(x-t) dt
    auto pv = [&](int d) {
      const double del = std::min({1.0, 0.25 * (1.0 + x), 0.5 * (T1 - x)});
      double acc = 0.0;
      auto kern = [&](double t) { return ext_.eval(t, d) / (x - t); };
      if (x - del - 1e-12 > -1.0)
        acc += adaptive_simpson(kern, -1.0, x - del, tol_);
      acc += adaptive_simpson(
          [&](double s) {
            if (s < 1e-7) {
              if (d <= 1) return -2.0 * ext_.eval(x, d + 1);
              s = 1e-7;
            }
            return (ext_.eval(x - s, d) - ext_.eval(x + s, d)) / s;
          },
          0.0, del, tol_);
      acc += adaptive_simpson(kern, x + del, T1, tol_);
      // algebraic tail beyond T1: g~^{(d)} = c m_d (1+t)^{-1/2-d} gives
      //   int_T1^inf g~^{(d)}(t) (x-t)^{-1} dt
      //     = c m_d 2 s1^{1-2d} int_0^1 r^{2d} (a2 r^2 - s1^2)^{-1} dr,
      // s1 = sqrt(1+T1), a2 = 1+x (same substitution as the phi_at tail).
      static const double md[3] = {1.0, -0.5, 0.75};
      const double s1 = std::sqrt(1.0 + T1);
      const double a2 = 1.0 + x;
      acc += 2.0 * ext_.tail_c() * md[d] * std::pow(s1, 1.0 - 2.0 * d) *
             adaptive_simpson(
                 [&](double r) {
                   return std::pow(r, 2.0 * d) / (a2 * r * r - s1 * s1);
                 },
                 0.0, 1.0, tol_);
      return acc / M_PI;
    };
    wall_u_[i] = pv(0);
    wall_ux_[i] = pv(1);
    wall_uxx_[i] = pv(2);

    for (std::size_t p = 0; p < nY; ++p) {
      if (p == 0) {
        tab_[0][i * nY + 0] = {wall_u_[i], -ext_.eval(x, 0)};
        tab_[1][i * nY + 0] = {wall_ux_[i], -ext_.eval(x, 1)};
        tab_[2][i * nY + 0] = {wall_uxx_[i], -ext_.eval(x, 2)};
        // order-3 wall entries copy the first interior node (diagnostics only)
        continue;
      }
      CVec<4> ph = phi_at(x, Y_[p]);
      for (int n = 0; n < 4; ++n) tab_[n][i * nY + p] = ph[n];
    }
    tab_[3][i * nY + 0] = tab_[3][i * nY + 1];
  }
}

CVec<4> EulerLayer::phi_at(double x, double Y) const {
  const std::complex<double> w(x, Y);
  const double T1 = ext_.x_max() + 10.0;
  static const double beta[4] = {1.0 / M_PI, -1.0 / M_PI, 2.0 / M_PI,
                                 -6.0 / M_PI};
  AdaptiveSimpson<4> q;
  q.tol = tol_;
  q.f = [&](double t) {
    const std::complex<double> q1 = 1.0 / (w - t);
    const double g = ext_.eval(t, 0);
    CVec<4> out;
    std::complex<double> pw = q1;
    for (int n = 0; n < 4; ++n) {
      out[n] = beta[n] * g * pw;
      pw *= q1;
    }
    return out;
  };
  // breakpoints: extension start, origin, a window around the kernel peak,
  // the model seam, and the analytic tail from T1
  const double pk = std::max(8.0 * Y, 0.05 * (1.0 + x));
  std::vector<double> bp = {-1.0, 0.0, x - pk, x + pk, ext_.x_max(), T1};
  std::sort(bp.begin(), bp.end());
  CVec<4> acc{};
  for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
    double a = std::max(bp[s], -1.0), b = std::min(bp[s + 1], T1);
    if (b - a < 1e-14) continue;
    CVec<4> part = q.integrate(a, b);
    for (int n = 0; n < 4; ++n) acc[n] += part[n];
  }
  // tail: g~ = c (1+t)^{-1/2} beyond T1, substituted t = s^2 - 1, s = s1/r:
  //   int_T1^inf (1+t)^{-1/2} (w-t)^{-(n+1)} dt
  //     = 2 s1 int_0^1 r^{2n} (a2 r^2 - s1^2)^{-(n+1)} dr,  a2 = w + 1
  const double s1 = std::sqrt(1.0 + T1);
  const std::complex<double> a2 = w + 1.0;
  AdaptiveSimpson<4> qt;
  qt.tol = tol_;
  qt.f = [&](double r) {
    const std::complex<double> den = a2 * r * r - s1 * s1;
    CVec<4> out;
    std::complex<double> inv = 1.0 / den;
    double rp = 1.0;
    std::complex<double> pw = inv;
    for (int n = 0; n < 4; ++n) {
      out[n] = beta[n] * 2.0 * ext_.tail_c() * s1 * rp * pw;
      rp *= r * r;
      pw *= inv;
    }
    return out;
  };
  CVec<4> tail = qt.integrate(0.0, 1.0);
  for (int n = 0; n < 4; ++n) acc[n] += tail[n];
  return acc;
}

std::complex<double> EulerLayer::phi(int n, std::size_t i, std::size_t p) const {
  return tab_[n][i * Y_.size() + p];
}

namespace {
inline std::complex<double> ipow(int j) {
  switch (j & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}
}  // namespace

double EulerLayer::u(int k, int j, std::size_t i, std::size_t p) const {
  if (k + j > 3) throw ConfigError("EulerLayer: derivative order exceeds 3");
  return (ipow(j) * phi(k + j, i, p)).real();
}
double EulerLayer::v(int k, int j, std::size_t i, std::size_t p) const {
  if (k + j > 3) throw ConfigError("EulerLayer: derivative order exceeds 3");
  return -(ipow(j) * phi(k + j, i, p)).imag();
}

double EulerLayer::interp_u(int k, int j, std::size_t i, double Y) const {
  const long key = ((long(k) * 4 + j) * 2 + 0) + 16L;
  auto it = spl_.find(key);
  if (it == spl_.end()) {
    std::vector<CubicSpline> per;
    per.reserve(x_.size());
    std::vector<double> vals(Y_.size());
    for (std::size_t s = 0; s < x_.size(); ++s) {
      for (std::size_t p = 0; p < Y_.size(); ++p) vals[p] = u(k, j, s, p);
      per.emplace_back(Y_, vals);
    }
    it = spl_.emplace(key, std::move(per)).first;
  }
  return it->second[i](Y);
}

double EulerLayer::interp_v(int k, int j, std::size_t i, double Y) const {
  const long key = ((long(k) * 4 + j) * 2 + 1) + 16L;
  auto it = spl_.find(key);
  if (it == spl_.end()) {
    std::vector<CubicSpline> per;
    per.reserve(x_.size());
    std::vector<double> vals(Y_.size());
    for (std::size_t s = 0; s < x_.size(); ++s) {
      for (std::size_t p = 0; p < Y_.size(); ++p) vals[p] = v(k, j, s, p);
      per.emplace_back(Y_, vals);
    }
    it = spl_.emplace(key, std::move(per)).first;
  }
  return it->second[i](Y);
}

EulerLayer harmonic_extend(const BoundaryExtension& ext,
                           const std::vector<double>& stations,
                           const std::vector<double>& ynodes, double quad_tol) {
  return EulerLayer(ext, stations, ynodes, quad_tol);
}

Field euler_phat(const std::vector<EulerLayer>& layers, int i, double eps) {
  if (i < 1) throw ConfigError("euler_phat: layer index must be >= 1");
  const bool have_prev = i >= 2;
  if (have_prev && int(layers.size()) < i - 1)
    throw ConfigError("euler_phat: missing lower Euler layers");
  const auto& ref = layers.at(0);
  const std::size_t nx = ref.stations().size(), nY = ref.ynodes().size();
  Field P(nx, nY, 0.0);
  if (!have_prev) {
    // i = 1: only [u^0_E, v^0_E] = [1, 0] enters; Phat is constant,
    // normalized to zero (its gradient is what matters)
    return P;
  }
  const EulerLayer& lm = layers[i - 2];  // layer i-1
  for (std::size_t s = 0; s < nx; ++s)
    for (std::size_t p = 0; p < nY; ++p) {
      double acc = 0.5 * std::pow(eps, 0.5 * (i - 2)) *
                   (sq(lm.u(0, 0, s, p)) + sq(lm.v(0, 0, s, p)));
      for (int j = 1; j <= i - 2; ++j) {
        const EulerLayer& lj = layers[j - 1];
        acc += std::pow(eps, 0.5 * (j - 1)) *
               (lm.u(0, 0, s, p) * lj.u(0, 0, s, p) +
                lm.v(0, 0, s, p) * lj.v(0, 0, s, p));
      }
      P.at(s, p) = -acc;
    }
  return P;
}

void euler_quadratic_sources(const std::vector<EulerLayer>& layers, int i,
                             double eps, Field& fx, Field& fy) {
  const auto& ref = layers.at(0);
  const std::size_t nx = ref.stations().size(), nY = ref.ynodes().size();
  fx = Field(nx, nY, 0.0);
  fy = Field(nx, nY, 0.0);
  if (i < 2) return;  // layer 0 is constant: all sums vanish
  const EulerLayer& lm = layers[i - 2];
  for (std::size_t s = 0; s < nx; ++s)
    for (std::size_t p = 0; p < nY; ++p) {
      // F_E^{(i)} + G_E^{(i)} (x-momentum) and H_E^{(i)} + J_E^{(i)}
      // (Y-momentum), scaled by eps^{-i/2} and eps^{-(i-1)/2} respectively
      double FE = 0.0, GE = 0.0, HE = 0.0, JE = 0.0;
      for (int j = 1; j <= i - 1; ++j) {
        const EulerLayer& lj = layers[j - 1];
        FE += std::pow(eps, 0.5 * (i - 1) + 0.5 * j) * lm.u(0, 0, s, p) *
              lj.u(1, 0, s, p);
        GE += std::pow(eps, 0.5 * (i - 2) + 0.5 * (j + 1)) * lm.v(0, 0, s, p) *
              lj.u(0, 1, s, p);
        HE += std::pow(eps, 0.5 * (i - 2) + 0.5 * j) * lm.v(1, 0, s, p) *
              lj.u(0, 0, s, p);
        JE += std::pow(eps, 0.5 * (i - 2) + 0.5 * j) * lm.v(0, 0, s, p) *
              lj.v(0, 1, s, p);
      }
      for (int j = 1; j <= i - 2; ++j) {
        const EulerLayer& lj = layers[j - 1];
        FE += std::pow(eps, 0.5 * (i - 1) + 0.5 * j) * lm.u(1, 0, s, p) *
              lj.u(0, 0, s, p);
        GE += std::pow(eps, 0.5 * i + 0.5 * (j - 1)) * lm.u(0, 1, s, p) *
              lj.v(0, 0, s, p);
        HE += std::pow(eps, 0.5 * (i - 1) + 0.5 * (j - 1)) * lm.u(0, 0, s, p) *
              lj.v(1, 0, s, p);
        JE += std::pow(eps, 0.5 * (i - 1) + 0.5 * (j - 1)) * lm.v(0, 1, s, p) *
              lj.v(0, 0, s, p);
      }
      fx.at(s, p) = std::pow(eps, -0.5 * i) * (FE + GE);
      fy.at(s, p) = std::pow(eps, -0.5 * (i - 1)) * (HE + JE);
    }
}

}  // namespace bl
