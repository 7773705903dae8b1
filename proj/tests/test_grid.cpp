#include <cmath>
#include <random>

#include "bl/grid.hpp"
#include "doctest.h"

using namespace bl;

TEST_CASE("build_grid construction contract") {
  SimilarityGrid g = build_grid(100.0, 400, 12.0, 200, 0.25);
  CHECK(g.x[0] == 0.0);
  CHECK(g.x[1] <= 1e-3);
  CHECK(g.z[0] == 0.0);
  CHECK(g.z.back() == doctest::Approx(12.0));
  // strictly increasing in both directions, growth cap after x > 1
  for (std::size_t i = 1; i < g.nx(); ++i) {
    CHECK(g.x[i] > g.x[i - 1]);
    if (g.x[i - 1] > 1.0 && i + 1 < g.nx())
      CHECK((g.x[i + 1] - g.x[i]) / (g.x[i] - g.x[i - 1]) <= 1.2 + 1e-12);
  }
  for (std::size_t j = 1; j < g.nz(); ++j) CHECK(g.z[j] > g.z[j - 1]);
  // y_of strictly increasing in both arguments
  CHECK(g.y_of(10, 5) < g.y_of(11, 5));
  CHECK(g.y_of(10, 5) < g.y_of(10, 6));
}

TEST_CASE("build_grid rejects degenerate parameters") {
  CHECK_THROWS_AS(build_grid(0.5, 400, 12.0, 200, 0.25), ConfigError);
  CHECK_THROWS_AS(build_grid(100.0, 8, 12.0, 200, 0.25), ConfigError);
  CHECK_THROWS_AS(build_grid(100.0, 400, 4.0, 200, 0.25), ConfigError);
  CHECK_THROWS_AS(build_grid(100.0, 400, 12.0, 200, 1.5), ConfigError);
}

TEST_CASE("wall clustering ratio tracks wall_cluster") {
  // [DERIVED] z-spacing ratio at the wall vs at Z_max for wall_cluster = 0.25:
  // the stretch map gives dz(0)/dz(end) = exp(-a) = wall_cluster exactly.
  SimilarityGrid g = build_grid(100.0, 400, 12.0, 200, 0.25);
  const double h0 = g.z[1] - g.z[0];
  const double h1 = g.z.back() - g.z[g.nz() - 2];
  CHECK(h0 / h1 <= 0.25 * 1.01);
  // node density near z=0 at least 4x density near Z_max
  CHECK(h1 / h0 >= 4.0 * 0.99);
}

TEST_CASE("d_dy polynomial exactness and chain rule") {
  SimilarityGrid g = build_grid(50.0, 64, 12.0, 220, 0.3);
  Field f = make_field(g);
  // f = y^2 -> d_y f = 2y; quadratics are differentiated exactly only up to
  // the mapped-stencil truncation, so check against a tight bound.
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.nz(); ++j) f.at(i, j) = sq(g.y_of(i, j));
  Field fy = d_dy(f, g, 1);
  double err = 0.0;
  for (std::size_t j = 0; j < g.nz(); ++j)
    err = std::max(err, std::abs(fy.at(0, j) - 2.0 * g.y_of(0, j)));
  CHECK(err < 1e-8);

  // constants differentiate to zero exactly
  Field c = make_field(g, 3.5);
  Field cy = d_dy(c, g, 1);
  CHECK(cy.max_abs() < 1e-12);
}

TEST_CASE("d_dy analytic chain rule with O(h^2) refinement") {
  // [DERIVED] f = e^{-z} -> d_y f = -e^{-z}/sqrt(x+1)
  auto run = [](int nz) {
    SimilarityGrid g = build_grid(50.0, 64, 12.0, nz, 0.3);
    Field f = make_field(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
      for (std::size_t j = 0; j < g.nz(); ++j) f.at(i, j) = std::exp(-g.z[j]);
    Field fy = d_dy(f, g, 1);
    double err = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i)
      for (std::size_t j = 0; j < g.nz(); ++j)
        err = std::max(err, std::abs(fy.at(i, j) +
                                     std::exp(-g.z[j]) / std::sqrt(g.X(i))));
    return err;
  };
  const double e1 = run(100), e2 = run(200);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 1.9);
}

TEST_CASE("integrate_y analytic antiderivative and flags") {
  SimilarityGrid g = build_grid(50.0, 64, 12.0, 400, 0.3);
  Field f = make_field(g);
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.nz(); ++j) f.at(i, j) = std::exp(-g.z[j]);
  // [DERIVED] int_0^y e^{-z} dy' = sqrt(x+1)(1 - e^{-z})
  IntegrateResult r = integrate_y(f, g, IntegrateFrom::Zero);
  double err = 0.0;
  for (std::size_t i = 0; i < g.nx(); i += 7)
    for (std::size_t j = 0; j < g.nz(); ++j)
      err = std::max(err, std::abs(r.f.at(i, j) -
                                   std::sqrt(g.X(i)) * (1.0 - std::exp(-g.z[j]))));
  CHECK(err < 2e-5);

  // zero integrates to zero
  Field zf = make_field(g);
  CHECK(integrate_y(zf, g, IntegrateFrom::Zero).f.max_abs() == 0.0);

  // fat tail trips the truncation flag when integrating from infinity
  Field fat = make_field(g);
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.nz(); ++j)
      fat.at(i, j) = 1.0 / (1.0 + g.z[j]);
  IntegrateResult rf = integrate_y(fat, g, IntegrateFrom::Infinity);
  CHECK(rf.truncation_dominated);
  CHECK(rf.tail_ratio >= 0.05);
}

TEST_CASE("differentiation and integration are discrete inverses, order >= 1.9") {
  auto run = [](int nz) {
    SimilarityGrid g = build_grid(20.0, 48, 12.0, nz, 0.3);
    Field f = make_field(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
      for (std::size_t j = 0; j < g.nz(); ++j)
        f.at(i, j) = std::exp(-g.z[j]) * std::sin(1.0 + 0.3 * g.z[j]);
    Field F = integrate_y(f, g, IntegrateFrom::Zero).f;
    Field back = d_dy(F, g, 1);
    double err = 0.0;
    for (std::size_t i = 0; i < g.nx(); i += 5)
      for (std::size_t j = 0; j < g.nz(); ++j)
        err = std::max(err, std::abs(back.at(i, j) - f.at(i, j)));
    return err;
  };
  const double e1 = run(100), e2 = run(200);
  CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("operators are linear to machine precision") {
  SimilarityGrid g = build_grid(20.0, 48, 12.0, 96, 0.3);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field f = make_field(g), h = make_field(g);
  for (double& v : f.v) v = dist(rng);
  for (double& v : h.v) v = dist(rng);
  const double a = 1.7, b = -0.4;
  Field combo = make_field(g);
  for (std::size_t n = 0; n < combo.v.size(); ++n)
    combo.v[n] = a * f.v[n] + b * h.v[n];

  Field d1 = d_dz(combo, g), df = d_dz(f, g), dh = d_dz(h, g);
  double err = 0.0;
  for (std::size_t n = 0; n < d1.v.size(); ++n)
    err = std::max(err, std::abs(d1.v[n] - a * df.v[n] - b * dh.v[n]));
  CHECK(err < 1e-9 * std::max(1.0, d1.max_abs()));

  Field i1 = integrate_y(combo, g, IntegrateFrom::Zero).f;
  Field if_ = integrate_y(f, g, IntegrateFrom::Zero).f;
  Field ih = integrate_y(h, g, IntegrateFrom::Zero).f;
  err = 0.0;
  for (std::size_t n = 0; n < i1.v.size(); ++n)
    err = std::max(err, std::abs(i1.v[n] - a * if_.v[n] - b * ih.v[n]));
  CHECK(err < 1e-9 * std::max(1.0, i1.max_abs()));
}

TEST_CASE("field CSV and binary round trips") {
  SimilarityGrid g = build_grid(20.0, 32, 12.0, 48, 0.3);
  Field f = make_field(g);
  for (std::size_t n = 0; n < f.v.size(); ++n) f.v[n] = std::sin(0.01 * n);
  write_field_csv("test_field.csv", f, g);
  Field r = read_field_csv("test_field.csv", g);
  double err = 0.0;
  for (std::size_t n = 0; n < f.v.size(); ++n)
    err = std::max(err, std::abs(f.v[n] - r.v[n]));
  CHECK(err == 0.0);

  write_field_bin("test_field.bin", f);
  Field rb = read_field_bin("test_field.bin");
  CHECK(rb.nx == f.nx);
  for (std::size_t n = 0; n < f.v.size(); ++n) CHECK(rb.v[n] == f.v[n]);
}
