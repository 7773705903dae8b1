#pragma once
// Small shared numerics: tridiagonal solve, nonuniform stencils, cubic
// splines, adaptive quadrature, log-log regression, C^4 smoothstep.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bl {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised/flagged when a quadrature or tail is dominated by domain truncation.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double sq(double a) { return a * a; }

// --------------------------------------------------------------------------
// Thomas algorithm. a = sub, b = diag, c = super; rhs overwritten with x.
inline void solve_tridiag(std::vector<double>& a, std::vector<double>& b,
                          std::vector<double>& c, std::vector<double>& rhs) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
  }
}

// --------------------------------------------------------------------------
// Second-order first/second derivative of samples on a uniform grid in the
// parameter s (spacing h); one-sided at the ends.
inline void d_ds_uniform(const double* f, double* out, std::size_t n, double h) {
  if (n < 3) throw NumericError("d_ds_uniform: need >= 3 nodes");
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
}

inline void d2_ds2_uniform(const double* f, double* out, std::size_t n, double h) {
  if (n < 4) throw NumericError("d2_ds2_uniform: need >= 4 nodes");
  const double h2 = h * h;
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
}

// Nonuniform 3-point first derivative (second order), one-sided ends.
inline void d_dx_nonuniform(const std::vector<double>& x, const double* f,
                            double* out) {
  const std::size_t n = x.size();
  if (n < 3) throw NumericError("d_dx_nonuniform: need >= 3 nodes");
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t i0 = (i == 0) ? 0 : (i == n - 1 ? n - 3 : i - 1);
    const double x0 = x[i0], x1 = x[i0 + 1], x2 = x[i0 + 2];
    const double xv = x[i];
    // derivative of the Lagrange interpolant through (x0,x1,x2) at xv
    const double c0 = (2.0 * xv - x1 - x2) / ((x0 - x1) * (x0 - x2));
    const double c1 = (2.0 * xv - x0 - x2) / ((x1 - x0) * (x1 - x2));
    const double c2 = (2.0 * xv - x0 - x1) / ((x2 - x0) * (x2 - x1));
    out[i] = c0 * f[i0] + c1 * f[i0 + 1] + c2 * f[i0 + 2];
  }
}

// --------------------------------------------------------------------------
// Natural cubic spline on a strictly increasing abscissa.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw NumericError("CubicSpline: bad sizes");
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
    b[0] = 1.0;
    b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
      a[i] = hl / 6.0;
      b[i] = (hl + hr) / 3.0;
      c[i] = hr / 6.0;
      r[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    solve_tridiag(a, b, c, r);
    m_ = std::move(r);  // second derivatives
  }

  double operator()(double x) const { return eval(x, 0); }
  double deriv(double x) const { return eval(x, 1); }

  double eval(double x, int order) const {
    std::size_t i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    if (order == 0) {
      return A * y_[i] + B * y_[i + 1] +
             ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    }
    if (order == 1) {
      return (y_[i + 1] - y_[i]) / h -
             (3.0 * A * A - 1.0) / 6.0 * h * m_[i] +
             (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
    }
    return A * m_[i] + B * m_[i + 1];  // order == 2
  }

  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }

 private:
  std::size_t locate(double x) const {
    const std::size_t n = x_.size();
    if (x <= x_[0]) return 0;
    if (x >= x_[n - 1]) return n - 2;
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    return lo;
  }
  std::vector<double> x_, y_, m_;
};

// --------------------------------------------------------------------------
// Adaptive Simpson on [a,b] for vector-valued complex integrands (all
// components share the subdivision; error controlled on the max component).
template <std::size_t N>
using CVec = std::array<std::complex<double>, N>;

template <std::size_t N>
struct AdaptiveSimpson {
  std::function<CVec<N>(double)> f;
  double tol = 1e-9;
  int max_depth = 48;
  mutable long evals = 0;

  CVec<N> integrate(double a, double b) const {
    CVec<N> fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    evals += 3;
    return rec(a, b, fa, fm, fb, tol, max_depth);
  }

 private:
  static double norm(const CVec<N>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
  }
  CVec<N> rec(double a, double b, const CVec<N>& fa, const CVec<N>& fm,
              const CVec<N>& fb, double eps, int depth) const {
    const double m = 0.5 * (a + b), h = b - a;
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    CVec<N> flm = f(lm), frm = f(rm);
    evals += 2;
    CVec<N> S, SL, SR, out;
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      S[i] = h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
      SL[i] = h / 12.0 * (fa[i] + 4.0 * flm[i] + fm[i]);
      SR[i] = h / 12.0 * (fm[i] + 4.0 * frm[i] + fb[i]);
      out[i] = SL[i] + SR[i] + (SL[i] + SR[i] - S[i]) / 15.0;
      err = std::max(err, std::abs(SL[i] + SR[i] - S[i]));
    }
    if (depth <= 0) throw NumericError("AdaptiveSimpson: max depth reached");
    if (err <= 15.0 * eps || h < 1e-14 * (std::abs(a) + std::abs(b) + 1.0)) return out;
    CVec<N> L = rec(a, m, fa, flm, fm, 0.5 * eps, depth - 1);
    CVec<N> R = rec(m, b, fm, frm, fb, 0.5 * eps, depth - 1);
    for (std::size_t i = 0; i < N; ++i) out[i] = L[i] + R[i];
    return out;
  }
};

// Scalar real adaptive Simpson.
inline double adaptive_simpson(const std::function<double(double)>& g, double a,
                               double b, double tol) {
  AdaptiveSimpson<1> q;
  q.f = [&](double t) { return CVec<1>{std::complex<double>(g(t), 0.0)}; };
  q.tol = tol;
  return q.integrate(a, b)[0].real();
}

// --------------------------------------------------------------------------
// Least-squares fit of log(value) vs log(1+x); returns slope and its 95% CI
// half width.
struct SlopeFit {
  double slope = 0.0;
  double ci = 0.0;       // 95% half-width
  double intercept = 0.0;
  std::size_t n = 0;
};

inline SlopeFit fit_loglog(const std::vector<double>& x,
                           const std::vector<double>& v) {
  if (x.size() != v.size() || x.size() < 3)
    throw NumericError("fit_loglog: need >= 3 matched samples");
  std::vector<double> lx, lv;
  lx.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(v[i] > 0.0)) throw NumericError("fit_loglog: nonpositive value in window");
    lx.push_back(std::log(1.0 + x[i]));
    lv.push_back(std::log(v[i]));
  }
  const std::size_t n = lx.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) sx += lx[i], sy += lv[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (lv[i] - my);
  }
  SlopeFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.n = n;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i)
    rss += sq(lv[i] - out.intercept - out.slope * lx[i]);
  if (n > 2) out.ci = 1.96 * std::sqrt(rss / double(n - 2) / sxx);
  return out;
}

// --------------------------------------------------------------------------
// C^4 smoothstep S: [0,1] -> [0,1], S(0)=0, S(1)=1, derivatives 1..4 vanish
// at both ends. Used for the cut-off chi and the boundary-extension blend.
inline double smoothstep9(double t, int order = 0) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return order == 0 ? 1.0 : 0.0;
  // 126 t^5 - 420 t^6 + 540 t^7 - 315 t^8 + 70 t^9
  static const double c[5] = {126.0, -420.0, 540.0, -315.0, 70.0};
  double out = 0.0;
  for (int k = 0; k < 5; ++k) {
    double p = 5 + k;
    double coef = c[k];
    for (int d = 0; d < order; ++d) coef *= (p - d);
    out += coef * std::pow(t, p - order);
  }
  return out;
}

// Decreasing cut-off: 1 on [0,1], 0 on [2,inf), C^4 transition.
inline double chi_cut(double theta, int order = 0) {
  if (theta <= 1.0) return order == 0 ? 1.0 : 0.0;
  if (theta >= 2.0) return 0.0;
  const double s = smoothstep9(theta - 1.0, order);
  return order == 0 ? 1.0 - s : -s;
}

// FNV-1a 64-bit; used for content-addressed stage stamps.
inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace bl
