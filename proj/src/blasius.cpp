#include "bl/blasius.hpp"

#include <cmath>

namespace bl {

namespace {

// ODE recursion: f^{(n+3)} = -1/2 sum_{k=0}^{n} C(n,k) f^{(k)} f^{(n-k+2)}.
void extend_jet(double* J, int len) {
  for (int m = 3; m < len; ++m) {
    const int n = m - 3;
    double acc = 0.0, binom = 1.0;
    for (int k = 0; k <= n; ++k) {
      acc += binom * J[k] * J[n - k + 2];
      binom = binom * double(n - k) / double(k + 1);
    }
    J[m] = -0.5 * acc;
  }
}

struct RK4State {
  double f, fp, fpp;
};

inline RK4State rhs(const RK4State& s) {
  return {s.fp, s.fpp, -0.5 * s.f * s.fpp};
}

inline RK4State rk4_step(const RK4State& s, double h) {
  auto add = [](const RK4State& a, const RK4State& b, double c) {
    return RK4State{a.f + c * b.f, a.fp + c * b.fp, a.fpp + c * b.fpp};
  };
  RK4State k1 = rhs(s);
  RK4State k2 = rhs(add(s, k1, 0.5 * h));
  RK4State k3 = rhs(add(s, k2, 0.5 * h));
  RK4State k4 = rhs(add(s, k3, h));
  return RK4State{
      s.f + h / 6.0 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f),
      s.fp + h / 6.0 * (k1.fp + 2 * k2.fp + 2 * k3.fp + k4.fp),
      s.fpp + h / 6.0 * (k1.fpp + 2 * k2.fpp + 2 * k3.fpp + k4.fpp)};
}

double shoot(double c, double h, double z_far, BlasiusProfile* dense) {
  const int n = int(std::llround(z_far / h));
  RK4State s{0.0, 0.0, c};
  if (dense) {
    dense->f.assign(n + 1, 0.0);
    dense->fp.assign(n + 1, 0.0);
    dense->fpp.assign(n + 1, 0.0);
    dense->f[0] = 0.0;
    dense->fp[0] = 0.0;
    dense->fpp[0] = c;
  }
  for (int i = 0; i < n; ++i) {
    s = rk4_step(s, h);
    if (dense) {
      dense->f[i + 1] = s.f;
      dense->fp[i + 1] = s.fp;
      dense->fpp[i + 1] = s.fpp;
    }
  }
  return s.fp - 1.0;
}

}  // namespace

BlasiusProfile solve_blasius(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-6))
    throw ConfigError("solve_blasius: tol must lie in [1e-12, 1e-6]");
  const double h = 1e-4, z_far = 15.0;
  double lo = 0.25, hi = 0.45;
  double flo = shoot(lo, h, z_far, nullptr);
  double fhi = shoot(hi, h, z_far, nullptr);
  if (flo * fhi > 0.0)
    throw NumericError("solve_blasius: bisection bracket failure at [" +
                       std::to_string(lo) + ", " + std::to_string(hi) +
                       "], values (" + std::to_string(flo) + ", " +
                       std::to_string(fhi) + ")");
  for (int it = 0; it < 64 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = shoot(mid, h, z_far, nullptr);
    if (fm * flo <= 0.0)
      hi = mid;
    else {
      lo = mid;
      flo = fm;
    }
  }
  BlasiusProfile prof;
  prof.h = h;
  prof.z_far = z_far;
  prof.tol = tol;
  prof.fpp0 = 0.5 * (lo + hi);
  const double miss = shoot(prof.fpp0, h, z_far, &prof);
  if (std::abs(miss) > tol)
    throw NumericError("solve_blasius: |f'(z_far) - 1| = " +
                       std::to_string(std::abs(miss)) + " exceeds tol");
  return prof;
}

void BlasiusProfile::jet(double z, int n, double* out) const {
  if (z >= z_far) {
    // f ~ z - disp with Gaussian-small corrections, far below double tail
    out[0] = z - displacement();
    if (n >= 1) out[1] = 1.0;
    for (int m = 2; m <= n; ++m) out[m] = 0.0;
    return;
  }
  if (z <= 0.0) {
    out[0] = 0.0;
    if (n >= 1) out[1] = 0.0;
    if (n >= 2) out[2] = fpp0;
    if (n >= 2) extend_jet(out, n + 1);
    return;
  }
  const std::size_t i = std::min<std::size_t>(std::size_t(z / h), f.size() - 2);
  const double t = (z - i * h) / h;
  // quintic Hermite with (value, 1st, 2nd) at both interval ends
  auto quintic = [&](double ya, double da, double sa, double yb, double db,
                     double sb) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    const double H3 = 0.5 * t3 - t4 + 0.5 * t5;
    const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double H5 = 10 * t3 - 15 * t4 + 6 * t5;
    return ya * H0 + h * da * H1 + h * h * sa * H2 + h * h * sb * H3 +
           h * db * H4 + yb * H5;
  };
  const double fa = f[i], fb = f[i + 1];
  const double pa = fp[i], pb = fp[i + 1];
  const double sa = fpp[i], sb = fpp[i + 1];
  const double ta = -0.5 * fa * sa, tb = -0.5 * fb * sb;           // f'''
  const double qa = -0.5 * (pa * sa + fa * ta);                    // f''''
  const double qb = -0.5 * (pb * sb + fb * tb);
  out[0] = quintic(fa, pa, sa, fb, pb, sb);
  if (n >= 1) out[1] = quintic(pa, sa, ta, pb, sb, tb);
  if (n >= 2) out[2] = quintic(sa, ta, qa, sb, tb, qb);
  if (n >= 3) extend_jet(out, n + 1);
}

double BlasiusProfile::eval_f(double z) const {
  double j[1];
  jet(z, 0, j);
  return j[0];
}
double BlasiusProfile::eval_fp(double z) const {
  double j[2];
  jet(z, 1, j);
  return j[1];
}
double BlasiusProfile::eval_fpp(double z) const {
  double j[3];
  jet(z, 2, j);
  return j[2];
}

BlasiusField::BlasiusField(BlasiusProfile prof, const SimilarityGrid* g,
                           RegularityBudget budget)
    : prof_(std::move(prof)), g_(g), budget_(budget) {
  // f-jet order needed: base G for vbar uses f^{(n+1)} up to n = jet_len-1;
  // each d_x consumes 2 jet orders (via z G'), each d_y one.
  jet_len_ = 2 * budget_.k_max + budget_.j_max + 4;
  fjet_.resize(g_->nz());
  std::vector<double> tmp(jet_len_ + 2);
  for (std::size_t j = 0; j < g_->nz(); ++j) {
    prof_.jet(g_->z[j], jet_len_ + 1, tmp.data());
    fjet_[j].assign(tmp.begin(), tmp.end());
  }
}

// Build the (k,j)-derivative as X^{-r} G(z) by the operator recursion:
//   d_y:   r += 1/2, G <- G'
//   d_x|y: r += 1,  G <- -r G - (z/2) G'
// carried on truncated jets per node.
SelfSimilar BlasiusField::derive(bool v_part, int k, int j) const {
  if (k > budget_.k_max || j > budget_.j_max)
    throw ConfigError("BlasiusField: derivative order exceeds budget");
  const std::size_t nz = g_->nz();
  const int L0 = jet_len_;
  // per-node working jet of G
  std::vector<std::vector<double>> G(nz, std::vector<double>(L0, 0.0));
  for (std::size_t p = 0; p < nz; ++p) {
    const auto& fj = fjet_[p];
    const double z = g_->z[p];
    for (int n = 0; n < L0; ++n) {
      if (!v_part) {
        G[p][n] = fj[n + 1];  // (f')^{(n)}
      } else {
        // ((z f' - f)/2)^{(n)} = (z f^{(n+1)} + (n-1) f^{(n)})/2
        G[p][n] = 0.5 * (z * fj[n + 1] + double(n - 1) * fj[n]);
      }
    }
  }
  double r = v_part ? 0.5 : 0.0;
  int len = L0;
  for (int d = 0; d < j; ++d) {  // y-derivatives first (cheaper in jet length)
    for (std::size_t p = 0; p < nz; ++p)
      for (int n = 0; n + 1 < len; ++n) G[p][n] = G[p][n + 1];
    len -= 1;
    r += 0.5;
  }
  for (int d = 0; d < k; ++d) {
    for (std::size_t p = 0; p < nz; ++p) {
      const double z = g_->z[p];
      std::vector<double> H(len - 2);
      for (int n = 0; n + 2 < len + 0; ++n) {
        const double zGp = z * G[p][n + 1] + double(n) * G[p][n];
        H[n] = -(r * G[p][n] + 0.5 * zGp);
      }
      for (int n = 0; n + 2 < len; ++n) G[p][n] = H[n];
    }
    len -= 2;
    r += 1.0;
  }
  SelfSimilar out;
  out.r = r;
  out.G.resize(nz);
  for (std::size_t p = 0; p < nz; ++p) out.G[p] = G[p][0];
  return out;
}

const Field& BlasiusField::materialize(std::map<std::pair<int, int>, Field>& cache,
                                       bool v_part, int k, int j) const {
  auto it = cache.find({k, j});
  if (it != cache.end()) return it->second;
  SelfSimilar ss = derive(v_part, k, j);
  Field f(g_->nx(), g_->nz());
  for (std::size_t i = 0; i < g_->nx(); ++i) {
    const double w = std::pow(g_->X(i), -ss.r);
    for (std::size_t p = 0; p < g_->nz(); ++p) f.at(i, p) = w * ss.G[p];
  }
  return cache.emplace(std::make_pair(std::make_pair(k, j), std::move(f)))
      .first->second;
}

const Field& BlasiusField::ubar(int k, int j) const {
  return materialize(ucache_, false, k, j);
}
const Field& BlasiusField::vbar(int k, int j) const {
  return materialize(vcache_, true, k, j);
}
SelfSimilar BlasiusField::ubar_ss(int k, int j) const { return derive(false, k, j); }
SelfSimilar BlasiusField::vbar_ss(int k, int j) const { return derive(true, k, j); }

double BlasiusField::v_infinity(std::size_t station) const {
  return 0.5 * prof_.displacement() / std::sqrt(g_->X(station));
}

std::vector<double> BlasiusField::wall_shear() const {
  std::vector<double> out(g_->nx());
  for (std::size_t i = 0; i < g_->nx(); ++i)
    out[i] = prof_.fpp0 / std::sqrt(g_->X(i));
  return out;
}

BlasiusField eval_blasius(const BlasiusProfile& prof, const SimilarityGrid& g,
                          RegularityBudget budget) {
  return BlasiusField(prof, &g, budget);
}

}  // namespace bl
