#include "dynstab/dgfamily.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "json.hpp"

namespace dynstab {

namespace {

constexpr double kPi = std::numbers::pi;

// e^{i pi t} = zeta_m^k for t = p/q, m = lcm(8, 2q).
long half_turn_exponent(const Rational& t, int m) {
  const Integer q = t.get_den();
  Integer k = t.get_num() * (m / q.get_si()) / 2;
  k %= m;
  if (k < 0) k += m;
  return k.get_si();
}

ExactCoefficients exact_coefficients(const Rational& t, const Limits& limits) {
  const int m = dg_conductor(t);
  if (m > limits.conductor_cap)
    throw CapExceeded("t = " + to_string(t) + " needs conductor " + std::to_string(m) + "; use a decimal t for float mode", m,
                      limits.conductor_cap);
  cyclo_field(m, limits.conductor_cap);
  const CycloNumber zeta8 = CycloNumber::root_of_unity(m, m / 8);
  const CycloNumber rot = CycloNumber::root_of_unity(m, half_turn_exponent(t, m));
  ExactCoefficients ec;
  ec.conductor = m;
  ec.a = CycloNumber::root_of_unity(m, m / 4);
  ec.b = CycloNumber(m, -2L) * zeta8 * rot;
  ec.c = CycloNumber(m, Rational(1, 2)) * zeta8 * rot;
  return ec;
}

DGParams float_params(const Parameter& t) {
  const double tv = parameter_value(t);
  const Complex phase = std::polar(1.0, kPi / 4 + kPi * tv);
  return DGParams{t, Complex(0, 1), -2.0 * phase, 0.5 * phase, std::nullopt};
}

double norm3(const std::array<Complex, 3>& v) {
  return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

}  // namespace

double parameter_value(const Parameter& t) {
  if (const auto* r = std::get_if<Rational>(&t)) return r->get_d();
  return std::get<double>(t);
}

std::string parameter_string(const Parameter& t) {
  if (const auto* r = std::get_if<Rational>(&t)) return to_string(*r);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(t));
  return buf;
}

Parameter parse_parameter(const std::string& text) {
  if (text.find_first_of("./eE") == std::string::npos || text.find('/') != std::string::npos) {
    if (text.find('.') == std::string::npos) return parse_rational(text);
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("malformed parameter '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw DomainError("malformed parameter '" + text + "'");
  return v;
}

int dg_conductor(const Rational& t) {
  const Integer q = t.get_den();
  if (!q.fits_sint_p() || q > 1 << 20) throw CapExceeded("denominator too large", 0, 0);
  return std::lcm(8, 2 * static_cast<int>(q.get_si()));
}

template <class K>
PolyMap<K> dg_lift(const K& a, const K& b, const K& c) {
  const K one = CoeffTraits<K>::one_like(a);
  const auto x = Poly<K>::monomial(3, Monomial::var(0), one);
  const auto y = Poly<K>::monomial(3, Monomial::var(1), one);
  const auto z = Poly<K>::monomial(3, Monomial::var(2), one);
  const Poly<K> f0 = (x * (x.scaled(-c) + y.scaled(a * c) + z)).scaled(b * c);
  const Poly<K> f1 = (y * (x - y.scaled(a) + z.scaled(a * b))).scaled(a * c);
  const Poly<K> f2 = (z * (x.scaled(b * c) + y - z.scaled(b))).scaled(a * b);
  return PolyMap<K>({HomPoly<K>(f0, 2), HomPoly<K>(f1, 2), HomPoly<K>(f2, 2)});
}

template PolyMap<CycloNumber> dg_lift(const CycloNumber&, const CycloNumber&, const CycloNumber&);
template PolyMap<Complex> dg_lift(const Complex&, const Complex&, const Complex&);

DGMap dg_build(const Rational& t, const Limits& limits) {
  DGParams params = float_params(t);
  const ExactCoefficients ec = exact_coefficients(t, limits);
  params.exact = ec;
  DGMap map{params, dg_lift(params.a, params.b, params.c),
            dg_lift(1.0 / params.a, 1.0 / params.b, 1.0 / params.c), std::nullopt, std::nullopt};
  map.exact_lift = dg_lift(ec.a, ec.b, ec.c);
  map.exact_inverse_lift = dg_lift(ec.a.inverse(), ec.b.inverse(), ec.c.inverse());
  return map;
}

DGMap dg_build(double t) {
  const DGParams params = float_params(t);
  return DGMap{params, dg_lift(params.a, params.b, params.c), dg_lift(1.0 / params.a, 1.0 / params.b, 1.0 / params.c),
               std::nullopt, std::nullopt};
}

DGMap dg_build(const Parameter& t, const Limits& limits) {
  if (const auto* r = std::get_if<Rational>(&t)) return dg_build(*r, limits);
  return dg_build(std::get<double>(t));
}

std::array<Complex, 3> dg_fixed_point(const Parameter& t) {
  // F(0, 0, z) = (0, 0, -a b^2 z^2).
  const DGMap map = dg_build(parameter_value(t));
  const Complex z = -1.0 / (map.params.a * map.params.b * map.params.b);
  const std::array<Complex, 3> point{Complex(0), Complex(0), z};
  const auto image = map.lift.evaluate<Complex>(point);
  if (std::abs(image[2] - z) > 1e-10 * std::abs(z) || std::abs(image[0]) + std::abs(image[1]) > 1e-10)
    throw CrossCheckFailure("fixed point check failed");
  return point;
}

std::array<CycloNumber, 3> dg_fixed_point_exact(const Rational& t, const Limits& limits) {
  const int m = dg_conductor(t);
  if (m > limits.conductor_cap) throw CapExceeded("conductor too large", m, limits.conductor_cap);
  const CycloNumber turn = CycloNumber::root_of_unity(m, -2 * half_turn_exponent(t, m));
  return {CycloNumber(m, 0L), CycloNumber(m, 0L), turn * CycloNumber(m, Rational(1, 4))};
}

std::array<std::array<Complex, 3>, 3> dg_indeterminacy_points(const DGMap& map, bool forward) {
  const auto& p = map.params;
  const Complex a = forward ? p.a : 1.0 / p.a, b = forward ? p.b : 1.0 / p.b, c = forward ? p.c : 1.0 / p.c;
  const std::array<std::array<Complex, 3>, 3> pts{{{a, 1.0, 0.0}, {0.0, b, 1.0}, {1.0, 0.0, c}}};
  const FloatMap& f = forward ? map.lift : map.inverse_lift;
  for (const auto& pt : pts)
    if (!indeterminacy_membership(f, pt)) throw CrossCheckFailure("listed indeterminacy point is not indeterminate");
  if (map.is_exact()) dg_indeterminacy_points_exact(map, forward);
  return pts;
}

std::array<std::array<CycloNumber, 3>, 3> dg_indeterminacy_points_exact(const DGMap& map, bool forward) {
  if (!map.is_exact()) throw DomainError("exact indeterminacy points need a rational parameter");
  const auto& ec = *map.params.exact;
  const int m = ec.conductor;
  const CycloNumber one(m, 1L), zero(m, 0L);
  const CycloNumber a = forward ? ec.a : ec.a.inverse(), b = forward ? ec.b : ec.b.inverse(),
                    c = forward ? ec.c : ec.c.inverse();
  const std::array<std::array<CycloNumber, 3>, 3> pts{{{a, one, zero}, {zero, b, one}, {one, zero, c}}};
  const ExactMap& f = forward ? *map.exact_lift : *map.exact_inverse_lift;
  for (const auto& pt : pts)
    if (!indeterminacy_membership(f, pt)) throw CrossCheckFailure("listed indeterminacy point is not indeterminate (exact)");
  return pts;
}

LineAction dg_line_action(const DGMap& map, InvariantLine line, std::array<Complex, 3> point) {
  const double scale = norm3(point);
  if (scale == 0) throw DomainError("the zero vector is not a projective point");
  // (coordinate that vanishes on the line, coordinate normalized to 1 in the chart)
  const auto [zero_idx, chart_idx] = line == InvariantLine::X0   ? std::pair{0, 2}
                                     : line == InvariantLine::Y0 ? std::pair{1, 0}
                                                                 : std::pair{2, 1};
  if (std::abs(point[zero_idx]) > 1e-12 * scale) throw DomainError("point is not on the invariant line");
  if (std::abs(point[chart_idx]) <= 1e-12 * scale) throw DomainError("point is outside the line's affine chart");
  const Complex pivot = point[chart_idx];
  for (auto& c : point) c /= pivot;
  point[zero_idx] = 0;

  const auto v = map.lift.evaluate<Complex>(std::span<const Complex>(point));
  std::array<Complex, 3> image{v[0], v[1], v[2]};
  const double iscale = norm3(image);
  if (iscale == 0 || std::abs(image[chart_idx]) <= 1e-12 * iscale)
    throw DomainError("image leaves the line's affine chart");
  const Complex ipivot = image[chart_idx];
  for (auto& c : image) c /= ipivot;

  std::array<Complex, 3> expected{};
  const Complex i(0, 1);
  switch (line) {
    case InvariantLine::X0: expected = {0.0, i * point[1] / 4.0, 1.0}; break;
    case InvariantLine::Y0: expected = {1.0, 0.0, 4.0 * i * point[2]}; break;
    case InvariantLine::Z0:
      expected = {std::polar(1.0, 2 * kPi * parameter_value(map.params.t)) * point[0], 1.0, 0.0};
      break;
  }
  double dev = 0;
  for (int k = 0; k < 3; ++k) dev = std::max(dev, std::abs(image[k] - expected[k]) / (1.0 + std::abs(expected[k])));
  if (dev > 1e-10) throw CrossCheckFailure("invariant line action disagrees with its closed form");
  return {image, expected, dev};
}

StabilityVerdict dg_stability_predicate(Rational t) {
  t.canonicalize();
  StabilityVerdict v;
  v.t = t;
  const Integer p = t.get_num(), q = t.get_den();
  if (q % 2 != 0) {
    v.stable = true;
    v.reason =
        "odd denominator: t*s = 1/2 mod 1 has no solution, so the rotation orbit of [-i:1:0] on {z=0} never meets "
        "[i:1:0]; |b| = 2 != 1/2 = |1/b| and |c| = 1/2 != 2 = |1/c| keep the orbits on {x=0} and {y=0} away from the "
        "indeterminacy points";
    return v;
  }
  const Integer two_q = 2 * q;
  for (Integer s = 1; s <= two_q; ++s) {
    Integer r = (2 * p * s) % two_q;
    if (r < 0) r += two_q;
    if (r == q) {
      v.stable = false;
      v.witness_steps = static_cast<int>(s.get_si());
      v.predicted_first_drop = v.witness_steps + 2;
      v.reason = "even denominator: after " + s.get_str() +
                 " rotation step(s) on {z=0} the point [-i:1:0] reaches the indeterminacy point [i:1:0]";
      return v;
    }
  }
  throw CrossCheckFailure("no rotation witness found for even denominator");
}

CrossValidation dg_cross_validate(const Rational& t, int count, const Limits& limits) {
  CrossValidation cv;
  cv.verdict = dg_stability_predicate(t);
  const DGMap map = dg_build(cv.verdict.t, limits);
  cv.report = degree_sequence(*map.exact_lift, count, limits);
  cv.observed_first_drop = cv.report.first_drop();
  const int drop = cv.observed_first_drop;
  if (cv.verdict.stable) {
    cv.agree = drop == 0;
  } else if (drop != 0) {
    cv.agree = drop <= cv.verdict.predicted_first_drop;
  } else {
    // No drop yet: only conclusive once the predicted bound is within range.
    cv.conclusive = cv.verdict.predicted_first_drop <= count;
    cv.agree = !cv.conclusive;
  }
  if (!cv.agree)
    throw CrossCheckFailure("stability predicate and exact degree sequence disagree at t = " + to_string(cv.verdict.t) +
                            " (predicted first drop " + std::to_string(cv.verdict.predicted_first_drop) +
                            ", observed " + std::to_string(cv.observed_first_drop) + ")");
  return cv;
}

std::string to_json(const CrossValidation& cv) {
  nlohmann::ordered_json j;
  j["t"] = to_string(cv.verdict.t);
  j["stable"] = cv.verdict.stable;
  j["witness_steps"] = cv.verdict.witness_steps;
  j["predicted_first_drop"] = cv.verdict.predicted_first_drop;
  j["observed_first_drop"] = cv.observed_first_drop;
  j["conclusive"] = cv.conclusive;
  j["agree"] = cv.agree;
  j["report"] = nlohmann::ordered_json::parse(cv.report.to_json());
  return j.dump();
}

}  // namespace dynstab
