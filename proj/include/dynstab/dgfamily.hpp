#pragma once

// The quadratic birational family of P^2
//   F_t(x,y,z) = (bc x(-c x + ac y + z), ac y(x - a y + ab z), ab z(bc x + y - b z))
// with a = i, b = -2 e^{i pi/4} e^{i pi t}, c = (1/2) e^{i pi/4} e^{i pi t}.
// Rational t yields an exact lift over Q(zeta_m), m = lcm(8, 2q); every t yields
// a float lift.

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dynstab/dynamics.hpp"

namespace dynstab {

using Parameter = std::variant<Rational, double>;

double parameter_value(const Parameter& t);
std::string parameter_string(const Parameter& t);

// Exact "p/q" (or integer) text gives a Rational; decimal text gives a double.
// The two are never converted into each other.
Parameter parse_parameter(const std::string& text);

struct ExactCoefficients {
  int conductor = 8;
  CycloNumber a, b, c;
};

struct DGParams {
  Parameter t;
  Complex a, b, c;
  std::optional<ExactCoefficients> exact;
};

struct DGMap {
  DGParams params;
  FloatMap lift;
  FloatMap inverse_lift;
  std::optional<ExactMap> exact_lift;
  std::optional<ExactMap> exact_inverse_lift;

  bool is_exact() const { return exact_lift.has_value(); }
};

// lcm(8, 2q) for t = p/q in lowest terms.
int dg_conductor(const Rational& t);

// Throws CapExceeded (advising float mode) when the conductor exceeds the cap.
DGMap dg_build(const Rational& t, const Limits& limits = {});
DGMap dg_build(double t);
DGMap dg_build(const Parameter& t, const Limits& limits = {});

// Generic lift for arbitrary coefficients (used for the inverse with a^-1, b^-1, c^-1).
template <class K>
PolyMap<K> dg_lift(const K& a, const K& b, const K& c);

// (0, 0, -1/(a b^2)) = (0, 0, e^{-2 i pi t} / 4), a fixed point of the raw lift.
std::array<Complex, 3> dg_fixed_point(const Parameter& t);
std::array<CycloNumber, 3> dg_fixed_point_exact(const Rational& t, const Limits& limits = {});

// Forward: [a:1:0], [0:b:1], [1:0:c]. Backward: the same with inverses.
// Each point is checked against the corresponding lift (exactly when the map
// is exact); a failed check throws CrossCheckFailure.
std::array<std::array<Complex, 3>, 3> dg_indeterminacy_points(const DGMap& map, bool forward);
std::array<std::array<CycloNumber, 3>, 3> dg_indeterminacy_points_exact(const DGMap& map, bool forward);

enum class InvariantLine { X0, Y0, Z0 };

struct LineAction {
  std::array<Complex, 3> image;     // evaluated, in the line's chart
  std::array<Complex, 3> expected;  // closed-form multiplier/rotation
  double deviation = 0;
};

// Image of a point on {x=0}, {y=0} or {z=0}, written in the chart
// [0:y:1], [1:0:z] or [x:1:0]. Throws DomainError if the point is off the line
// or outside the chart; CrossCheckFailure if the closed form disagrees by more
// than 1e-10.
LineAction dg_line_action(const DGMap& map, InvariantLine line, std::array<Complex, 3> point);

struct StabilityVerdict {
  Rational t;
  bool stable = true;
  // Minimal s >= 1 with t*s = 1/2 mod 1: s rotation steps carry [-i:1:0]
  // (image of a contracted curve) onto the indeterminacy point [i:1:0].
  int witness_steps = 0;
  // Latest iterate by which the coordinates acquire a common factor:
  // contraction (1) + rotation (s) + indeterminacy (1). At t = 1/2 the lift
  // itself is degenerate (abc = -1) and the drop happens at n = 1.
  int predicted_first_drop = 0;
  std::string reason;
};

StabilityVerdict dg_stability_predicate(Rational t);

struct CrossValidation {
  StabilityVerdict verdict;
  IterateReport report;
  int observed_first_drop = 0;  // 0 when no drop up to N
  bool conclusive = true;       // false when no drop is seen and the bound lies beyond N
  bool agree = true;
};

// Runs degree_sequence on the exact lift and compares with the predicate:
// stable means no drop up to N, unstable means a first drop no later than
// predicted_first_drop. Throws CrossCheckFailure on disagreement.
CrossValidation dg_cross_validate(const Rational& t, int count, const Limits& limits = {});

std::string to_json(const CrossValidation& cv);

}  // namespace dynstab
