#include "dynstab/dynamics.hpp"

#include <cmath>

#include "json.hpp"

namespace dynstab {

namespace {

long checked_power(int d, int n, const Limits& limits) {
  long deg = 1;
  for (int k = 0; k < n; ++k) {
    deg *= d;
    if (deg > limits.degree_cap) throw CapExceeded("iterate " + std::to_string(n) + " has raw degree " + std::to_string(deg) + " (d^n)", deg, limits.degree_cap);
  }
  return deg;
}

double norm(std::span<const Complex> v) {
  double s = 0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

std::vector<IterateFactorization> iterate_factors(const ExactMap& f, int count, const Limits& limits) {
  if (count < 1) throw DomainError("iterate count must be positive");
  if (!f.is_endomorphism()) throw DomainError("map must have as many components as variables");
  checked_power(f.degree(), count, limits);
  if (f.sample_coeff().conductor() > limits.conductor_cap)
    throw CapExceeded("conductor too large", f.sample_coeff().conductor(), limits.conductor_cap);

  const int d = f.degree();
  std::vector<IterateFactorization> out;
  // n = 1: F itself may already carry a common factor.
  {
    ExactPoly g = map_content(f);
    ExactMap reduced = g.degree() == 0 ? f : map_divide_exact(f, g);
    const int rd = reduced.degree();
    out.push_back({1, std::move(g), std::move(reduced), rd});
  }
  for (int n = 2; n <= count; ++n) {
    const auto& prev = out.back();
    const ExactMap raw = poly_compose(f, prev.reduced);
    ExactPoly g = map_content(raw);
    ExactMap reduced = g.degree() == 0 ? raw : map_divide_exact(raw, g);
    ExactPoly content = prev.content.pow(static_cast<unsigned>(d)) * g;
    const int rd = reduced.degree();
    if (content.degree() + rd != static_cast<int>(checked_power(d, n, limits)))
      throw CrossCheckFailure("degree bookkeeping failed at n = " + std::to_string(n));
    out.push_back({n, std::move(content), std::move(reduced), rd});
  }
  return out;
}

IterateFactorization iterate_factor(const ExactMap& f, int n, const Limits& limits) {
  auto all = iterate_factors(f, n, limits);
  return std::move(all.back());
}

IterateReport make_report(int d, std::span<const IterateFactorization> factors) {
  IterateReport report{d, {}};
  bool stable = true;
  Integer dn = 1;
  for (const auto& fac : factors) {
    dn *= d;
    stable = stable && Integer(fac.reduced_degree) == dn;
    Rational bound = 1 - Rational(fac.reduced_degree) / Rational(dn);
    bound.canonicalize();
    report.rows.push_back({fac.n, fac.reduced_degree, fac.content.degree(), bound, stable});
  }
  return report;
}

IterateReport degree_sequence(const ExactMap& f, int count, const Limits& limits) {
  const auto factors = iterate_factors(f, count, limits);
  return make_report(f.degree(), factors);
}

std::string IterateReport::to_json() const {
  nlohmann::ordered_json j;
  j["d"] = d;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["n"] = r.n;
    row["deg"] = r.degree;
    row["degH"] = r.content_degree;
    row["mass_bound"] = to_string(r.mass_bound);
    row["stable"] = r.stable_so_far;
    j["rows"].push_back(std::move(row));
  }
  return j.dump();
}

int IterateReport::first_drop() const {
  for (const auto& r : rows)
    if (!r.stable_so_far) return r.n;
  return 0;
}

bool check_factor_divisibility(const IterateFactorization& fac_n, const IterateFactorization& fac_nm, int d, int m) {
  if (m < 0 || fac_nm.n != fac_n.n + m)
    throw DomainError("index mismatch: expected iterate " + std::to_string(fac_n.n + m) + ", got " + std::to_string(fac_nm.n));
  if (fac_n.content.degree() == 0) return true;
  long e = 1;
  for (int k = 0; k < m; ++k) e *= d;
  const auto power = fac_n.content.pow(static_cast<unsigned>(e));
  return try_divide_exact(fac_nm.content.poly(), power.poly()).has_value();
}

double float_recombination_error(const ExactMap& f, const IterateFactorization& fac,
                                 std::span<const std::vector<Complex>> points) {
  const FloatMap ff = to_complex(f);
  const FloatMap red = to_complex(fac.reduced);
  const Poly<Complex> h = to_complex(fac.content.poly());
  double worst = 0;
  for (const auto& z : points) {
    std::vector<Complex> w = z;
    for (int k = 0; k < fac.n; ++k) w = ff.evaluate<Complex>(w);
    const Complex hz = h.evaluate<Complex>(z);
    const auto rz = red.evaluate<Complex>(z);
    std::vector<Complex> diff(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) diff[i] = hz * rz[i] - w[i];
    const double scale = norm(w);
    worst = std::max(worst, scale > 0 ? norm(diff) / scale : norm(diff));
  }
  return worst;
}

bool indeterminacy_membership(const ExactMap& f, std::span<const CycloNumber> point) {
  if (std::all_of(point.begin(), point.end(), [](const CycloNumber& c) { return c.is_zero(); }))
    throw DomainError("the zero vector is not a projective point");
  for (const auto& v : f.evaluate<CycloNumber>(point))
    if (!v.is_zero()) return false;
  return true;
}

bool indeterminacy_membership(const FloatMap& f, std::span<const Complex> point, double tol) {
  const double r = norm(point);
  if (r == 0) throw DomainError("the zero vector is not a projective point");
  std::vector<Complex> unit(point.begin(), point.end());
  for (auto& c : unit) c /= r;
  for (const auto& v : f.evaluate<Complex>(unit))
    if (std::abs(v) >= tol) return false;
  return true;
}

}  // namespace dynstab
