#include <random>

#include "doctest.h"
#include "dynstab/mapparse.hpp"
#include "dynstab/poly.hpp"

using namespace dynstab;

namespace {

using P = Poly<CycloNumber>;
using H = HomPoly<CycloNumber>;

P ex(const std::string& s, int conductor = 4) { return parse_expression_exact(s, 3, conductor); }
H hom(const std::string& s, int conductor = 4) { return H(ex(s, conductor)); }

// Random linear form with small Gaussian-integer coefficients over Q(zeta_8).
P random_linear(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> c(-3, 3);
  P p(3);
  const auto i = CycloNumber::root_of_unity(8, 2);
  for (int v = 0; v < 3; ++v)
    p.add_term(Monomial::var(v), CycloNumber(8, c(rng)) + CycloNumber(8, c(rng)) * i);
  if (p.is_zero()) p.add_term(Monomial::var(0), CycloNumber(8, 1L));
  return p;
}

}  // namespace

TEST_CASE("graded-lex order and monic normalization") {
  const P p = ex("3*z^2 + x*y + 2*x^2");
  auto it = p.terms().begin();
  CHECK(it->first == Monomial::var(0, 2));
  ++it;
  CHECK(it->first == Monomial::var(0) * Monomial::var(1));
  CHECK(p.monic().leading_coeff().is_one());
}

TEST_CASE("composition") {
  const auto shift = parse_map_exact("y,z,x");
  CHECK(poly_compose(shift, shift) == parse_map_exact("z,x,y"));
  const auto sq = parse_map_exact("x^2,y^2,z^2");
  const auto sq2 = poly_compose(sq, sq);
  CHECK(sq2 == parse_map_exact("x^4,y^4,z^4"));
  CHECK(sq2.degree() == 4);
  const auto mixed = parse_map_exact("x*y + i*z^2, x^2 - y^2, 2*y*z");
  const auto c = poly_compose(mixed, shift);
  CHECK(c == parse_map_exact("y*z + i*x^2, y^2 - z^2, 2*z*x"));
}

TEST_CASE("composition errors") {
  const auto f3 = parse_map_exact("x,y,z");
  const auto f2 = parse_map_exact("x^2,y^2");
  CHECK_THROWS_AS(poly_compose(f3, f2), DomainError);
  // (x - y) composed with the diagonal map collapses to zero.
  const auto outer = parse_map_exact("x - y, x - y");
  const auto diag = parse_map_exact("x + y, x + y");
  CHECK_THROWS_AS(poly_compose(outer, diag), DomainError);
}

TEST_CASE("gcd examples") {
  CHECK(poly_gcd(hom("x*y"), hom("x*z")) == hom("x"));
  CHECK(poly_gcd(hom("x^2 - y^2"), hom("x^2 + 2*x*y + y^2")) == hom("x + y"));
  const H p = hom("3*x^3 - i*y*z^2 + x*y*z");
  CHECK(poly_gcd(p, hom("1")).degree() == 0);
  CHECK(poly_gcd(p, hom("1")).poly().leading_coeff().is_one());
  CHECK(poly_gcd(p, p) == H(p.poly().monic()));
  CHECK(poly_gcd(p, H::zero(3, 5)) == H(p.poly().monic()));
  CHECK_THROWS_AS(poly_gcd(H::zero(3, 2), H::zero(3, 2)), DomainError);
}

TEST_CASE("gcd needs an exact domain") {
  const auto f = parse_map_float("x*y, x*z, x^2");
  CHECK_THROWS_WITH_AS(poly_gcd(f[0], f[1]), doctest::Contains("exact domain required"), DomainError);
  CHECK_THROWS_AS(map_content(f), DomainError);
}

TEST_CASE("map content") {
  CHECK(map_content(parse_map_exact("x*y, x*z, x^2")) == hom("x"));
  CHECK(map_content(parse_map_exact("x^2, y^2, z^2")) == hom("1"));
  CHECK(map_content(parse_map_exact("(x+i*y)*x*z, (x+i*y)*y^2, (x+i*y)^2*z")) == hom("x + i*y"));
}

TEST_CASE("exact division") {
  CHECK(poly_divide_exact(hom("x^2 + x*y"), hom("x")) == hom("x + y"));
  const H p = hom("x^3 - 2*i*y^2*z");
  CHECK(poly_divide_exact(p, hom("1")) == p);
  // Oracle: expand both sides independently.
  CHECK(poly_divide_exact(hom("x^3 + 3*x^2*y + 3*x*y^2 + y^3"), hom("x + y")) == hom("x^2 + 2*x*y + y^2"));
  try {
    poly_divide_exact(hom("x^2 + y^2"), hom("x + y"));
    FAIL("expected InexactDivision");
  } catch (const InexactDivision& e) {
    CHECK(e.remainder() != "0");
    CHECK(!ex("x^2+y^2").is_zero());
  }
}

TEST_CASE("gcd of products shares exactly the planted factor") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    // Four distinct generic linear forms: p = l1*l2, q = l3, g = l4*l5.
    std::vector<P> l;
    for (int k = 0; k < 5; ++k) l.push_back(random_linear(rng));
    const P p = l[0] * l[1], q = l[2] * l[2], g = l[3] * l[4];
    const P base = poly_gcd(p, q);
    REQUIRE(base.is_constant());
    CHECK(poly_gcd(p * g, q * g) == (g * base).monic());
  }
}

TEST_CASE("line certificate never hides a common factor") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const P g = random_linear(rng);
    const std::array<P, 2> pair{g * random_linear(rng), g * random_linear(rng) * random_linear(rng)};
    CHECK_FALSE(detail::certified_coprime<CycloNumber>(pair));
    CHECK(poly_gcd(pair[0], pair[1]).total_degree() >= 1);
  }
}


TEST_CASE("modular gcd agrees with the remainder sequence") {
  std::mt19937_64 rng(31);
  const auto z8 = CycloNumber::root_of_unity(8, 1);
  const P z = P::monomial(3, Monomial::var(2), CycloNumber(8, 1L));
  for (int trial = 0; trial < 15; ++trial) {
    // Planted factor with a non-integral coefficient, a power of z and a
    // quadratic that does not split into the random linear forms.
    P g = random_linear(rng) * (random_linear(rng) * random_linear(rng) +
                                P::monomial(3, Monomial::var(1), CycloNumber(8, Rational(1, 3)) * z8).pow(2));
    if (trial % 3 == 0) g = g * z;
    const P p = g * random_linear(rng) * z, q = g * random_linear(rng) * random_linear(rng);
    const std::array<P, 2> pair{p, q};
    const auto modular = modular_gcd(pair);
    REQUIRE(modular.has_value());
    CHECK(*modular == detail::prs_gcd<CycloNumber>(pair));
    CHECK(*modular == g.monic());
  }
}

TEST_CASE("modular gcd in two and four variables") {
  const auto two = parse_expression_exact("(x - i*y)^2*(x + 2*y)", 2, 4);
  const auto two_b = parse_expression_exact("(x - i*y)*(3*x - y)", 2, 4);
  const std::array<P, 2> pair2{two, two_b};
  CHECK(*modular_gcd(pair2) == parse_expression_exact("x - i*y", 2, 4));
  const auto four = parse_expression_exact("(x + w)*(y - z)*(x - 1/2*i*w)", 4, 4);
  const auto four_b = parse_expression_exact("(x + w)*(x - 1/2*i*w)^2", 4, 4);
  const std::array<P, 2> pair4{four, four_b};
  CHECK(*modular_gcd(pair4) == detail::prs_gcd<CycloNumber>(pair4));
  CHECK(modular_gcd(pair4)->total_degree() == 2);
}

TEST_CASE("content times reduced map recombines") {
  const auto f = parse_map_exact("x*y + i*x*z, x^2 - x*y, 2*x*z", 8);
  const auto f2 = poly_compose(f, f);
  const H content = map_content(f2);
  CHECK(content.degree() >= 1);
  const auto reduced = map_divide_exact(f2, content);
  for (std::size_t k = 0; k < f2.size(); ++k) CHECK(content * reduced[k] == f2[k]);
  CHECK(map_content(reduced).degree() == 0);
}

TEST_CASE("serialization round-trips") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const P p = random_linear(rng) * random_linear(rng) * random_linear(rng);
    const std::string s = to_string(p);
    CHECK(parse_poly<CycloNumber>(s, 3) == p);
  }
  const P q = ex("x^2 - 1/2*y*z");
  CHECK(to_string(q) == "[4; 1/1, 0/1] * x0^2 x1^0 x2^0 + [4; -1/2, 0/1] * x0^0 x1^1 x2^1");
  CHECK(parse_poly<CycloNumber>("0", 3).is_zero());

  const auto fq = parse_expression_float("0.1*x^2 - 3*i*y*z + 1/3*x*z", 3);
  CHECK(parse_poly<Complex>(to_string(fq), 3) == fq);
}

TEST_CASE("expression parser") {
  CHECK(ex("(x+y)^2") == ex("x^2 + 2*x*y + y^2"));
  CHECK(ex("2x y") == ex("2*x*y"));
  CHECK(ex("x0*x2") == ex("x*z"));
  CHECK_THROWS_AS(ex("0.5*x"), DomainError);
  CHECK_THROWS_AS(ex("x + q"), DomainError);
  CHECK_THROWS_AS(parse_map_exact("x^2 + y, y^2, z^2"), DomainError);
  CHECK_THROWS_AS(parse_expression_exact("i*x", 3, 6), DomainError);
}
