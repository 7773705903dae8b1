#include "bl/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace bl {

namespace {

// Geometric station ladder: x[1] = dx0, ratio r chosen so x[n-1] = x_max,
// with r capped at 1.2 (the growth cap applies once x > 1).
std::vector<double> build_stations(double x_max, int n_x, double dx0_in) {
  double dx0 = dx0_in;
  auto reach = [&](double r) {
    // total = dx0 * (r^(n-1) - 1)/(r - 1)
    double total = 0.0, dx = dx0;
    for (int k = 1; k < n_x; ++k) {
      total += dx;
      dx *= r;
    }
    return total;
  };
  double lo = 1.0 + 1e-12, hi = 1.2;
  while (reach(hi) < x_max && dx0 < 1e-3) {
    dx0 *= 2.0;  // coarse ladders may open up to the 1e-3 startup bound
    dx0 = std::min(dx0, 1e-3);
  }
  if (reach(hi) < x_max)
    throw ConfigError("build_grid: x_max unreachable with growth cap 1.2; increase n_x");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (reach(mid) < x_max ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  std::vector<double> x(n_x);
  x[0] = 0.0;
  double dx = dx0;
  for (int k = 1; k < n_x; ++k) {
    x[k] = x[k - 1] + dx;
    dx *= r;
  }
  x[n_x - 1] = x_max;  // absorb the bisection remainder in the last step
  return x;
}

}  // namespace

SimilarityGrid build_grid(double x_max, int n_x, double z_max, int n_z,
                          double wall_cluster) {
  if (!(x_max > 1.0)) throw ConfigError("build_grid: require x_max > 1");
  if (!(z_max >= 8.0)) throw ConfigError("build_grid: require z_max >= 8");
  if (n_x < 16 || n_z < 16) throw ConfigError("build_grid: require counts >= 16");
  if (!(wall_cluster > 0.0 && wall_cluster <= 1.0))
    throw ConfigError("build_grid: wall_cluster must lie in (0,1]");

  SimilarityGrid g;
  g.z_max = z_max;
  g.a = std::log(1.0 / wall_cluster);
  g.x = build_stations(x_max, n_x, 1e-4);

  g.hs = 1.0 / double(n_z - 1);
  g.s.resize(n_z);
  g.z.resize(n_z);
  g.zs.resize(n_z);
  g.zss.resize(n_z);
  const double a = g.a;
  for (int j = 0; j < n_z; ++j) {
    const double s = j * g.hs;
    g.s[j] = s;
    if (a < 1e-12) {
      g.z[j] = z_max * s;
      g.zs[j] = z_max;
      g.zss[j] = 0.0;
    } else {
      const double den = std::expm1(a);
      g.z[j] = z_max * std::expm1(a * s) / den;
      g.zs[j] = z_max * a * std::exp(a * s) / den;
      g.zss[j] = z_max * a * a * std::exp(a * s) / den;
    }
  }
  g.z[0] = 0.0;
  g.z[n_z - 1] = z_max;

  if (g.x[1] > 1e-3)
    throw ConfigError("build_grid: first interior station exceeds 1e-3");
  return g;
}

Field make_field(const SimilarityGrid& g, double fill) {
  return Field(g.nx(), g.nz(), fill);
}

Field d_dz(const Field& f, const SimilarityGrid& g) {
  Field out(f.nx, f.nz);
  std::vector<double> fs(f.nz);
  for (std::size_t i = 0; i < f.nx; ++i) {
    d_ds_uniform(f.row(i), fs.data(), f.nz, g.hs);
    for (std::size_t j = 0; j < f.nz; ++j) out.at(i, j) = fs[j] / g.zs[j];
  }
  return out;
}

Field d_dy(const Field& f, const SimilarityGrid& g, int order) {
  Field cur = f;
  for (int o = 0; o < order; ++o) cur = d_dz(cur, g);
  for (std::size_t i = 0; i < f.nx; ++i) {
    const double w = std::pow(g.X(i), -0.5 * order);
    for (std::size_t j = 0; j < f.nz; ++j) cur.at(i, j) *= w;
  }
  return cur;
}

Field d_dx_fixed_z(const Field& f, const SimilarityGrid& g) {
  Field out(f.nx, f.nz);
  std::vector<double> col(f.nx), dcol(f.nx);
  for (std::size_t j = 0; j < f.nz; ++j) {
    for (std::size_t i = 0; i < f.nx; ++i) col[i] = f.at(i, j);
    d_dx_nonuniform(g.x, col.data(), dcol.data());
    for (std::size_t i = 0; i < f.nx; ++i) out.at(i, j) = dcol[i];
  }
  return out;
}

Field d_dx_fixed_y(const Field& f, const SimilarityGrid& g) {
  Field out = d_dx_fixed_z(f, g);
  Field fz = d_dz(f, g);
  for (std::size_t i = 0; i < f.nx; ++i) {
    const double X = g.X(i);
    for (std::size_t j = 0; j < f.nz; ++j)
      out.at(i, j) -= 0.5 * g.z[j] / X * fz.at(i, j);
  }
  return out;
}

IntegrateResult integrate_y(const Field& f, const SimilarityGrid& g,
                            IntegrateFrom from, double tail_tol) {
  IntegrateResult res;
  res.f = Field(f.nx, f.nz);
  const std::size_t nz = f.nz;
  double max_abs = f.max_abs(), max_tail = 0.0;
  for (std::size_t i = 0; i < f.nx; ++i) {
    max_tail = std::max(max_tail, std::abs(f.at(i, nz - 1)));
  }
  res.tail_ratio = (max_abs > 0.0) ? max_tail / max_abs : 0.0;
  if (from == IntegrateFrom::Infinity && max_abs > 0.0 &&
      max_tail > tail_tol * max_abs)
    res.truncation_dominated = true;

  std::vector<double> cum(nz);
  for (std::size_t i = 0; i < f.nx; ++i) {
    const double sX = std::sqrt(g.X(i));
    cum[0] = 0.0;
    for (std::size_t j = 1; j < nz; ++j) {
      const double dz = g.z[j] - g.z[j - 1];
      cum[j] = cum[j - 1] + 0.5 * dz * (f.at(i, j) + f.at(i, j - 1));
    }
    if (from == IntegrateFrom::Zero) {
      for (std::size_t j = 0; j < nz; ++j) res.f.at(i, j) = sX * cum[j];
    } else {
      const double total = cum[nz - 1];
      for (std::size_t j = 0; j < nz; ++j) res.f.at(i, j) = sX * (total - cum[j]);
    }
  }
  return res;
}

const Field& FieldJet::get(int k, int j) const {
  auto it = cache_.find({k, j});
  if (it != cache_.end()) return it->second;
  if (k > 0) {
    Field d = d_dx_fixed_y(get(k - 1, j), *g_);
    return cache_.emplace(std::make_pair(std::make_pair(k, j), std::move(d)))
        .first->second;
  }
  Field d = d_dy(get(0, j - 1), *g_, 1);
  return cache_.emplace(std::make_pair(std::make_pair(k, j), std::move(d)))
      .first->second;
}

void write_field_csv(const std::string& path, const Field& f,
                     const SimilarityGrid& g) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path);
  os << "x,z,value";
  for (const auto& [kj, vals] : f.deriv_cache)
    os << ",d" << kj.first << kj.second;
  os << "\n";
  char buf[96];
  for (std::size_t i = 0; i < f.nx; ++i)
    for (std::size_t j = 0; j < f.nz; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", g.x[i], g.z[j],
                    f.at(i, j));
      os << buf;
      for (const auto& [kj, vals] : f.deriv_cache) {
        std::snprintf(buf, sizeof buf, ",%.17g", vals[i * f.nz + j]);
        os << buf;
      }
      os << "\n";
    }
}

Field read_field_csv(const std::string& path, const SimilarityGrid& g) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  std::string line;
  std::getline(is, line);  // header
  Field f(g.nx(), g.nz());
  for (std::size_t i = 0; i < f.nx; ++i)
    for (std::size_t j = 0; j < f.nz; ++j) {
      if (!std::getline(is, line)) throw ConfigError("short CSV: " + path);
      std::istringstream ss(line);
      double x, z, val;
      char c;
      ss >> x >> c >> z >> c >> val;
      f.at(i, j) = val;
    }
  return f;
}

namespace {
constexpr char kMagic[8] = {'B', 'L', 'F', 'L', 'D', '0', '0', '1'};
}

void write_field_bin(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path);
  os.write(kMagic, 8);
  std::uint64_t nx = f.nx, nz = f.nz;
  os.write(reinterpret_cast<const char*>(&nx), 8);
  os.write(reinterpret_cast<const char*>(&nz), 8);
  os.write(reinterpret_cast<const char*>(f.v.data()),
           std::streamsize(f.v.size() * sizeof(double)));
}

Field read_field_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw ConfigError("bad field cache version: " + path);
  std::uint64_t nx, nz;
  is.read(reinterpret_cast<char*>(&nx), 8);
  is.read(reinterpret_cast<char*>(&nz), 8);
  Field f(nx, nz);
  is.read(reinterpret_cast<char*>(f.v.data()),
          std::streamsize(f.v.size() * sizeof(double)));
  if (!is) throw ConfigError("truncated field cache: " + path);
  return f;
}

}  // namespace bl
