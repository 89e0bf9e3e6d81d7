#pragma once

// Green potentials g^(n) of a homogeneous lift in double precision.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dynstab/dynamics.hpp"

namespace dynstab {

using Point = std::vector<Complex>;

// F_C = C * F with C = 1/(2B), B the largest per-component sum of coefficient
// moduli of F. On the unit sphere ||F_C|| <= 1/2.
class NormalizedLift {
 public:
  explicit NormalizedLift(const FloatMap& f);

  const FloatMap& map() const { return scaled_; }
  double scale() const { return scale_; }
  double bound() const { return bound_; }
  int degree() const { return degree_; }
  int dimension() const { return nvars_; }

  // F_C(z) into out; out.size() == dimension().
  void apply(std::span<const Complex> z, std::span<Complex> out) const;
  Point apply(std::span<const Complex> z) const;

 private:
  struct Term {
    Complex coeff;
    std::array<std::uint16_t, kMaxVars> e;
  };

  FloatMap scaled_;
  double scale_ = 1;
  double bound_ = 1;
  int degree_ = 0;
  int nvars_ = 0;
  std::vector<std::vector<Term>> terms_;
};

NormalizedLift normalize_lift(const FloatMap& f);

struct GreenSample {
  Point point;  // unit representative
  int n = 0;
  double value = 0;
  std::vector<double> step_logs;  // log ||F_C(w_m)||, m < n (fewer on underflow)
  int underflow_step = -1;        // step at which ||F_C(w)|| < 1e-300, or -1

  bool is_neg_inf() const { return underflow_step >= 0; }
  // Sum of d^-(m+1) step_logs[m] for m < k, k <= step_logs.size().
  double partial(int k, int d) const;
};

constexpr double kUnderflow = 1e-300;

GreenSample green_eval(const NormalizedLift& lift, std::span<const Complex> z, int n);
// Value only; -infinity on underflow.
double green_value(const NormalizedLift& lift, std::span<const Complex> z, int n);

struct FixedPointDatum {
  Point z0;           // fixed point of F_C
  Point x0;           // unit representative
  double expected_g;  // -log ||z0||
};

// Rescales a fixed point z of the unnormalized lift to lambda z with
// lambda^(d-1) = 1/C. Throws CrossCheckFailure if ||F_C(z0) - z0|| / ||z0||
// is not below 1e-9.
FixedPointDatum make_fixed_point(const NormalizedLift& lift, std::span<const Complex> raw_fixed_point);

// |g^(n)(x0) - (1 - d^-n) expected_g|.
double fixed_point_check(const NormalizedLift& lift, const FixedPointDatum& fp, int n);
// |g^(n)(x0) - expected_g| = d^-n |expected_g| up to rounding.
double fixed_point_limit_deviation(const NormalizedLift& lift, const FixedPointDatum& fp, int n);

// max over points and m < n of g^(m+1) - g^(m); 0 when n == 0.
double monotonicity_check(const NormalizedLift& lift, std::span<const Point> points, int n);

// Unit vectors from standard complex Gaussians; uniform for Fubini-Study.
std::vector<Point> sample_sphere(int count, std::uint64_t seed, int dimension = 3);

// Fraction of sampled points with g^(n) < -M.
double sublevel_fraction(const NormalizedLift& lift, int n, double M, int count, std::uint64_t seed);

// point_re0,point_im0,...,n,value with -inf for underflow.
std::string green_csv(std::span<const GreenSample> samples);

// g^(n) on the affine slice base + s*u + t*v, (s, t) in [-radius, radius]^2,
// row-major with t decreasing down the rows.
struct Heatmap {
  int size = 0;
  double radius = 0;
  std::vector<double> values;
};

Heatmap green_heatmap(const NormalizedLift& lift, std::span<const Complex> base, std::span<const Complex> u,
                      std::span<const Complex> v, double radius, int size, int n);
std::string heatmap_csv(const Heatmap& h);
// Plain PGM (P2), values clamped to [-clip, 0] and mapped to 0..255.
std::string heatmap_pgm(const Heatmap& h, double clip);

// Runs body(i) for i in [0, count) over hardware threads in fixed contiguous
// blocks. Callers write to disjoint slots, so results do not depend on the
// thread count.
template <class Body>
void parallel_for(int count, Body body);

}  // namespace dynstab

#include "dynstab/detail/parallel.hpp"
