#include <random>

#include "doctest.h"
#include "dynstab/dgfamily.hpp"
#include "dynstab/greenpot.hpp"
#include "dynstab/mapparse.hpp"

using namespace dynstab;

namespace {

using P3 = Poly<CycloNumber>;

std::vector<std::vector<Complex>> unit_points(int count, std::uint64_t seed) { return sample_sphere(count, seed, 3); }

// Float iterate of the raw lift, independent of the exact pipeline.
std::vector<Complex> raw_iterate(const FloatMap& f, std::vector<Complex> z, int n) {
  for (int k = 0; k < n; ++k) z = f.evaluate<Complex>(z);
  return z;
}

double rel_dist(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("stable monomial map") {
  const auto f = parse_map_exact("x^2, y^2, z^2");
  const auto fac = iterate_factor(f, 3);
  CHECK(fac.content.degree() == 0);
  CHECK(fac.reduced_degree == 8);
  const auto rep = degree_sequence(f, 5);
  for (int n = 1; n <= 5; ++n) {
    CHECK(rep.rows[n - 1].degree == (1 << n));
    CHECK(rep.rows[n - 1].mass_bound == 0);
    CHECK(rep.rows[n - 1].stable_so_far);
  }
  CHECK(rep.first_drop() == 0);
}

TEST_CASE("visible common factor") {
  const auto f = parse_map_exact("x*y, x*z, x^2");
  const auto fac = iterate_factor(f, 1);
  CHECK(fac.content.poly() == parse_expression_exact("x", 3));
  CHECK(fac.reduced_degree == 1);
}

TEST_CASE("report json") {
  const auto rep = degree_sequence(parse_map_exact("x^2, y^2, z^2"), 2);
  CHECK(rep.to_json() ==
        R"({"d":2,"rows":[{"n":1,"deg":2,"degH":0,"mass_bound":"0/1","stable":true},)"
        R"({"n":2,"deg":4,"degH":0,"mass_bound":"0/1","stable":true}]})");
}

TEST_CASE("degree cap") {
  const auto f = parse_map_exact("x^2, y^2, z^2");
  CHECK_THROWS_AS(iterate_factor(f, 7), CapExceeded);
  Limits small;
  small.degree_cap = 8;
  CHECK_NOTHROW(iterate_factor(f, 3, small));
  try {
    iterate_factor(f, 4, small);
    FAIL("expected CapExceeded");
  } catch (const CapExceeded& e) {
    CHECK(e.value() == 16);
    CHECK(std::string(e.what()).find("16") != std::string::npos);
  }
}

TEST_CASE("dg family at t = 1/3 is stable through n = 4") {
  const auto map = dg_build(Rational(1, 3));
  const auto rep = degree_sequence(*map.exact_lift, 4);
  std::vector<int> degs;
  for (const auto& r : rep.rows) degs.push_back(r.degree);
  CHECK(degs == std::vector<int>{2, 4, 8, 16});
  for (const auto& r : rep.rows) CHECK(r.mass_bound == 0);
}

TEST_CASE("dg family at t = 1/2 loses degree") {
  const auto map = dg_build(Rational(1, 2));
  const auto facs = iterate_factors(*map.exact_lift, 5);
  const auto rep = make_report(2, facs);
  const int drop = rep.first_drop();
  REQUIRE(drop >= 1);
  const auto& row = rep.rows[drop - 1];
  CHECK(row.degree < (1 << drop));
  CHECK(row.mass_bound > 0);
  CHECK(facs[drop - 1].content.degree() > 0);
  CHECK(check_factor_divisibility(facs[drop - 1], facs[drop], 2, 1));

  // Float recombination against the raw lift. The expanded H^(n) loses
  // accuracy to cancellation beyond n = 4.
  const auto pts = unit_points(20, 17);
  for (const auto& fac : facs)
    if (fac.n <= 4) CHECK(float_recombination_error(*map.exact_lift, fac, pts) < 1e-8);
}

TEST_CASE("factorization invariants") {
  for (const Rational t : {Rational(1, 4), Rational(1, 2), Rational(2, 3)}) {
    const auto map = dg_build(t);
    const auto facs = iterate_factors(*map.exact_lift, 4);
    const auto rep = make_report(2, facs);
    Rational prev_bound = 0;
    bool prev_stable = true;
    for (std::size_t k = 0; k < facs.size(); ++k) {
      const int dn = 1 << facs[k].n;
      CHECK(facs[k].content.degree() + facs[k].reduced_degree == dn);
      CHECK(map_content(facs[k].reduced).degree() == 0);
      if (facs[k].content.degree() > 0) CHECK(facs[k].content.poly().leading_coeff().is_one());
      Rational ratio(facs[k].reduced_degree, dn);
      ratio.canonicalize();
      CHECK(rep.rows[k].mass_bound == 1 - ratio);
      CHECK(rep.rows[k].mass_bound >= prev_bound);
      if (!prev_stable) CHECK_FALSE(rep.rows[k].stable_so_far);
      prev_bound = rep.rows[k].mass_bound;
      prev_stable = rep.rows[k].stable_so_far;
      if (k > 0) CHECK(check_factor_divisibility(facs[k - 1], facs[k], 2, 1));
    }
  }
}

TEST_CASE("exact iterates agree with float evaluation") {
  const auto map = dg_build(Rational(1, 4));
  const auto facs = iterate_factors(*map.exact_lift, 4);
  const auto pts = unit_points(20, 3);
  for (const auto& fac : facs) {
    const auto reduced = to_complex(fac.reduced);
    const auto content = to_complex(fac.content.poly());
    for (const auto& z : pts) {
      auto lhs = reduced.evaluate<Complex>(z);
      const Complex h = content.evaluate<Complex>(std::span<const Complex>(z));
      for (auto& c : lhs) c *= h;
      CHECK(rel_dist(lhs, raw_iterate(map.lift, z, fac.n)) < 1e-8);
    }
  }
}

TEST_CASE("divisibility negative control") {
  const auto map = dg_build(Rational(1, 2));
  const auto facs = iterate_factors(*map.exact_lift, 3);
  const P3 xy = parse_expression_exact("x + y", 3, 8);
  // An extra factor on the larger side keeps divisibility.
  auto padded = facs[2];
  padded.content = ExactPoly(facs[2].content.poly() * xy);
  CHECK(check_factor_divisibility(facs[1], padded, 2, 1));
  // A factor on the smaller side does not.
  auto corrupted = facs[1];
  corrupted.content = ExactPoly(facs[1].content.poly() * xy);
  CHECK_FALSE(check_factor_divisibility(corrupted, facs[2], 2, 1));
  CHECK_THROWS_AS(check_factor_divisibility(facs[0], facs[2], 2, 1), DomainError);
}

TEST_CASE("indeterminacy membership") {
  const auto mono = parse_map_exact("x^2, y^2, z^2");
  const std::array<CycloNumber, 3> e0{CycloNumber(4, 1L), CycloNumber(4, 0L), CycloNumber(4, 0L)};
  CHECK_FALSE(indeterminacy_membership(mono, e0));
  const std::array<CycloNumber, 3> zero{CycloNumber(4, 0L), CycloNumber(4, 0L), CycloNumber(4, 0L)};
  CHECK_THROWS_AS(indeterminacy_membership(mono, zero), DomainError);

  for (const Rational t : {Rational(0), Rational(1, 4), Rational(1, 3)}) {
    const auto map = dg_build(t);
    const int m = map.exact_lift->sample_coeff().conductor();
    const std::array<CycloNumber, 3> pt{CycloNumber::root_of_unity(m, m / 4), CycloNumber(m, 1L), CycloNumber(m, 0L)};
    CHECK(indeterminacy_membership(*map.exact_lift, pt));
    const std::array<Complex, 3> fpt{Complex(0, 1), 1, 0};
    CHECK(indeterminacy_membership(map.lift, fpt));
  }
  const auto map = dg_build(Rational(1, 4));
  const std::array<CycloNumber, 3> y{CycloNumber(8, 0L), CycloNumber(8, 1L), CycloNumber(8, 0L)};
  CHECK_FALSE(indeterminacy_membership(*map.exact_lift, y));
}
