#pragma once

#include <span>
#include <string>
#include <vector>

#include "dynstab/poly.hpp"
#include "dynstab/rational.hpp"

namespace dynstab {

using ExactMap = PolyMap<CycloNumber>;
using FloatMap = PolyMap<Complex>;
using ExactPoly = HomPoly<CycloNumber>;

struct Limits {
  int degree_cap = 64;
  int conductor_cap = kDefaultConductorCap;
};

// F^n = content * reduced, content monic, reduced with coprime components.
struct IterateFactorization {
  int n = 0;
  ExactPoly content;
  ExactMap reduced;
  int reduced_degree = 0;
};

struct IterateRow {
  int n = 0;
  int degree = 0;          // deg f^n
  int content_degree = 0;  // deg H^(n)
  Rational mass_bound;     // 1 - deg f^n / d^n
  bool stable_so_far = true;
};

struct IterateReport {
  int d = 0;
  std::vector<IterateRow> rows;

  // {"d":2,"rows":[{"n":1,"deg":2,"degH":0,"mass_bound":"0/1","stable":true},...]}
  std::string to_json() const;
  // First n with a degree drop, or 0.
  int first_drop() const;
};

// Factorizations for n = 1..count, each obtained from the previous reduced
// iterate: F o reduced(n-1) = G * reduced(n), content(n) = content(n-1)^d * G.
// Throws CapExceeded before computing an iterate whose raw degree d^n exceeds
// the cap.
std::vector<IterateFactorization> iterate_factors(const ExactMap& f, int count, const Limits& limits = {});

IterateFactorization iterate_factor(const ExactMap& f, int n, const Limits& limits = {});

IterateReport degree_sequence(const ExactMap& f, int count, const Limits& limits = {});
IterateReport make_report(int d, std::span<const IterateFactorization> factors);

// True iff content(n)^(d^m) divides content(n+m). Throws DomainError when
// the indices are not n and n + m.
bool check_factor_divisibility(const IterateFactorization& fac_n, const IterateFactorization& fac_nm, int d, int m);

// Largest relative deviation |H(z) * reduced(z) - F^n(z)| / |F^n(z)| over the
// points, with F^n(z) obtained by applying the float image of f n times.
double float_recombination_error(const ExactMap& f, const IterateFactorization& fac,
                                 std::span<const std::vector<Complex>> points);

inline constexpr double kIndeterminacyTol = 1e-8;

// Exact: every component vanishes at the point. Throws DomainError on the zero vector.
bool indeterminacy_membership(const ExactMap& f, std::span<const CycloNumber> point);
// Float: every component is below tol at the unit representative.
bool indeterminacy_membership(const FloatMap& f, std::span<const Complex> point, double tol = kIndeterminacyTol);

}  // namespace dynstab
