#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dynstab/dgfamily.hpp"
#include "dynstab/mapparse.hpp"
#include "dynstab/slicemass.hpp"

using namespace dynstab;

namespace {

NormalizedLift monomial() { return NormalizedLift(parse_map_float("x^2, y^2, z^2")); }

// Monte Carlo-free oracle: fine midpoint rule on the indicator.
double area_oracle(double r, double x0, double x1, double y0, double y1) {
  const int n = 2000;
  double a = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = x0 + (i + 0.5) * (x1 - x0) / n, y = y0 + (j + 0.5) * (y1 - y0) / n;
      if (x * x + y * y <= r * r) a += 1;
    }
  return a * (x1 - x0) * (y1 - y0) / (double(n) * n);
}

}  // namespace

TEST_CASE("disk and rectangle overlap") {
  const double pi = std::numbers::pi;
  CHECK(disk_rect_area(1, -2, 2, -2, 2) == doctest::Approx(pi));
  CHECK(disk_rect_area(1, 0, 2, 0, 2) == doctest::Approx(pi / 4));
  CHECK(disk_rect_area(1, 2, 3, 0, 1) == 0);
  CHECK(disk_rect_area(2, -0.5, 0.5, -0.5, 0.5) == doctest::Approx(1));
  for (auto [x0, y0] : {std::pair{0.6, 0.5}, {-0.95, 0.1}, {0.2, -1.0}, {-0.3, 0.85}}) {
    const double h = 0.2;
    CHECK(disk_rect_area(1, x0, x0 + h, y0, y0 + h) == doctest::Approx(area_oracle(1, x0, x0 + h, y0, y0 + h)).epsilon(1e-4));
  }
}

TEST_CASE("random lines are orthonormal and reproducible") {
  const auto a = random_lines(4, 9, 64), b = random_lines(4, 9, 64);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].p == b[k].p);
    Complex dot = 0;
    double qq = 0;
    for (int i = 0; i < 3; ++i) {
      dot += std::conj(a[k].p[i]) * a[k].q[i];
      qq += std::norm(a[k].q[i]);
    }
    CHECK(std::abs(dot) < 1e-12);
    CHECK(qq == doctest::Approx(1));
  }
}

TEST_CASE("pure omega calibration") {
  const auto l = monomial();
  const auto line = random_lines(1, 3, 128)[0];
  // Closed form r^2 / (1 + r^2).
  for (double r : {0.5, 1.0, 2.0}) CHECK(chart_disk_mass(l, line, 0, r) == doctest::Approx(r * r / (1 + r * r)).epsilon(0.01));
  double prev_err = 1;
  for (int R : {64, 128, 256}) {
    LineChart c = line;
    c.resolution = R;
    const auto est = line_mass(l, c, 0, 1);
    const double err = std::abs(est.total - 1);
    CHECK(err < 0.05);
    CHECK(est.sublevel == 0);
    CHECK(err <= 0.7 * prev_err + 1e-12);
    prev_err = err;
  }
}

TEST_CASE("chart split does not change the total") {
  const NormalizedLift l(dg_build(0.3).lift);
  auto line = random_lines(1, 4, 128)[0];
  const double a = line_mass(l, line, 3, 2).total;
  line.split = 1.5;
  const double b = line_mass(l, line, 3, 2).total;
  CHECK(std::abs(a - b) < 0.02);
}

TEST_CASE("charts agree on the overlap") {
  const NormalizedLift l(dg_build(0.3).lift);
  const auto line = random_lines(1, 5, 64)[0];
  // u' (w') = u(1/w') + log |w'| for the second chart.
  for (double r : {0.8, 1.0, 1.25}) {
    const Complex w = std::polar(r, 0.7);
    Point z1(3), z2(3);
    for (int i = 0; i < 3; ++i) {
      z1[i] = line.p[i] + w * line.q[i];
      z2[i] = line.q[i] + (1.0 / w) * line.p[i];
    }
    auto u = [&](const Point& z) {
      double s = 0;
      for (const auto& c : z) s += std::norm(c);
      return 0.5 * std::log(s) + green_value(l, z, 4);
    };
    CHECK(std::abs(u(z2) - (u(z1) - std::log(std::abs(w)))) < 1e-8);
  }
}

TEST_CASE("sublevel mass is monotone in M and bounded by the total") {
  const NormalizedLift l(dg_build(0.5).lift);
  const auto line = random_lines(1, 6, 128)[0];
  double prev = 2;
  for (double M : {1.0, 2.0, 3.0, 4.0}) {
    const auto est = line_mass(l, line, 5, M);
    CHECK(est.sublevel <= est.total + 0.02);
    CHECK(est.sublevel <= prev + 0.01);
    prev = est.sublevel;
  }
  CHECK(line_mass(l, line, 5, 3).sublevel > 0.2);
}

TEST_CASE("grid values") {
  const auto l = monomial();
  const auto line = random_lines(1, 8, 32)[0];
  const auto g = line_restricted_potential(l, line, 0, 0);
  CHECK(g.u.size() == 32 * 32);
  CHECK(g.flagged == 0);
  for (double v : g.g) CHECK(v == 0);
  CHECK_THROWS_AS(line_restricted_potential(l, LineChart{line.p, line.q, 16, 1.0}, 0, 0), DomainError);
  CHECK_THROWS_AS(line_restricted_potential(l, line, 0, 2), DomainError);
}

TEST_CASE("sweep output") {
  auto fam = [](double t) { return NormalizedLift(dg_build(t).lift); };
  const auto rows = lemma_sweep(fam, 0.5, {0.0, 0.25}, 2, 3, 2, 1, 64);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].t == doctest::Approx(0.75));
  const auto csv = sweep_csv(rows);
  CHECK(csv.rfind("t,offset,n,M,lines,mean_sublevel,mean_total\n", 0) == 0);
  CHECK(csv == sweep_csv(lemma_sweep(fam, 0.5, {0.0, 0.25}, 2, 3, 2, 1, 64)));
}
