#include "dynstab/greenpot.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "dynstab/error.hpp"

namespace dynstab {

namespace {

double norm(std::span<const Complex> z) {
  double s = 0;
  for (const auto& c : z) s += std::norm(c);
  return std::sqrt(s);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

NormalizedLift::NormalizedLift(const FloatMap& f) : scaled_(f) {
  double b = 0;
  for (const auto& c : f.components()) {
    double s = 0;
    for (const auto& [m, coeff] : c.poly().terms()) s += std::abs(coeff);
    b = std::max(b, s);
  }
  if (b == 0 || !std::isfinite(b)) throw DomainError("cannot normalize the zero map");
  bound_ = b;
  scale_ = 1 / (2 * b);
  degree_ = f.degree();
  nvars_ = f.nvars();
  std::vector<HomPoly<Complex>> comps;
  for (const auto& c : f.components()) {
    comps.emplace_back(c.poly().scaled(Complex(scale_)), degree_);
    std::vector<Term> ts;
    for (const auto& [m, coeff] : c.poly().terms()) ts.push_back({coeff * scale_, m.e});
    terms_.push_back(std::move(ts));
  }
  scaled_ = FloatMap(std::move(comps));
}

void NormalizedLift::apply(std::span<const Complex> z, std::span<Complex> out) const {
  if (static_cast<int>(z.size()) != nvars_ || out.size() != terms_.size())
    throw DomainError("point has wrong dimension");
  // powers[v][k] = z_v^k
  std::array<std::array<Complex, 65>, kMaxVars> powers;
  const int dmax = std::min(degree_, 64);
  for (int v = 0; v < nvars_; ++v) {
    powers[v][0] = 1;
    for (int k = 1; k <= dmax; ++k) powers[v][k] = powers[v][k - 1] * z[v];
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    Complex acc = 0;
    for (const auto& t : terms_[i]) {
      Complex m = t.coeff;
      for (int v = 0; v < nvars_; ++v)
        if (t.e[v]) m *= powers[v][t.e[v]];
      acc += m;
    }
    out[i] = acc;
  }
}

Point NormalizedLift::apply(std::span<const Complex> z) const {
  Point out(terms_.size());
  apply(z, out);
  return out;
}

NormalizedLift normalize_lift(const FloatMap& f) { return NormalizedLift(f); }

double GreenSample::partial(int k, int d) const {
  double v = 0, w = 1;
  for (int m = 0; m < k; ++m) {
    w /= d;
    v += w * step_logs[m];
  }
  return v;
}

GreenSample green_eval(const NormalizedLift& lift, std::span<const Complex> z, int n) {
  if (!lift.map().is_endomorphism()) throw DomainError("green potential needs a self-map");
  if (n < 0) throw DomainError("iterate count must be nonnegative");
  const double r = norm(z);
  if (r == 0) throw DomainError("zero vector is not a projective point");
  GreenSample s;
  s.n = n;
  for (const auto& c : z) s.point.push_back(c / r);
  Point w = s.point, next(w.size());
  double weight = 1;
  for (int m = 0; m < n; ++m) {
    lift.apply(w, next);
    const double len = norm(next);
    weight /= lift.degree();
    if (!(len >= kUnderflow)) {
      s.underflow_step = m;
      s.value = -std::numeric_limits<double>::infinity();
      return s;
    }
    const double step = std::log(len);
    s.step_logs.push_back(step);
    s.value += weight * step;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = next[i] / len;
  }
  return s;
}

double green_value(const NormalizedLift& lift, std::span<const Complex> z, int n) {
  return green_eval(lift, z, n).value;
}

FixedPointDatum make_fixed_point(const NormalizedLift& lift, std::span<const Complex> raw_fixed_point) {
  const int d = lift.degree();
  if (d < 2) throw DomainError("fixed-point rescaling needs degree at least 2");
  const double lambda = std::pow(lift.scale(), -1.0 / (d - 1));
  FixedPointDatum fp;
  for (const auto& c : raw_fixed_point) fp.z0.push_back(c * lambda);
  const double r = norm(fp.z0);
  if (r == 0) throw DomainError("fixed point is the zero vector");
  const Point image = lift.apply(fp.z0);
  Point diff(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) diff[i] = image[i] - fp.z0[i];
  const double rel = norm(diff) / r;
  if (!(rel < 1e-9))
    throw CrossCheckFailure("not a fixed point of the normalized lift (relative residual " + format_double(rel) + ")");
  for (const auto& c : fp.z0) fp.x0.push_back(c / r);
  fp.expected_g = -std::log(r);
  return fp;
}

double fixed_point_check(const NormalizedLift& lift, const FixedPointDatum& fp, int n) {
  if (n == 0) return 0;
  const double g = green_value(lift, fp.z0, n);
  return std::abs(g - (1 - std::pow(lift.degree(), -n)) * fp.expected_g);
}

double fixed_point_limit_deviation(const NormalizedLift& lift, const FixedPointDatum& fp, int n) {
  return std::abs(green_value(lift, fp.z0, n) - fp.expected_g);
}

double monotonicity_check(const NormalizedLift& lift, std::span<const Point> points, int n) {
  double worst = n > 0 ? -std::numeric_limits<double>::infinity() : 0;
  for (const auto& p : points) {
    const GreenSample s = green_eval(lift, p, n);
    double prev = 0;
    for (int m = 0; m < static_cast<int>(s.step_logs.size()); ++m) {
      const double cur = s.partial(m + 1, lift.degree());
      worst = std::max(worst, cur - prev);
      prev = cur;
    }
  }
  return worst;
}

std::vector<Point> sample_sphere(int count, std::uint64_t seed, int dimension) {
  if (count < 1) throw DomainError("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Point p(dimension);
    double r = 0;
    do {
      for (auto& c : p) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        c = Complex(re, im);
      }
      r = norm(p);
    } while (r == 0);
    for (auto& c : p) c /= r;
    out.push_back(std::move(p));
  }
  return out;
}

double sublevel_fraction(const NormalizedLift& lift, int n, double M, int count, std::uint64_t seed) {
  if (n < 1) throw DomainError("sublevel fraction needs n >= 1");
  const auto points = sample_sphere(count, seed, lift.dimension());
  std::vector<char> below(points.size());
  parallel_for(static_cast<int>(points.size()),
               [&](int i) { below[i] = green_value(lift, points[i], n) < -M; });
  const auto hits = std::count(below.begin(), below.end(), 1);
  return static_cast<double>(hits) / count;
}

std::string green_csv(std::span<const GreenSample> samples) {
  std::ostringstream out;
  const std::size_t dim = samples.empty() ? 0 : samples[0].point.size();
  for (std::size_t i = 0; i < dim; ++i) out << "point_re" << i << ",point_im" << i << ",";
  out << "n,value\n";
  for (const auto& s : samples) {
    for (const auto& c : s.point) out << format_double(c.real()) << "," << format_double(c.imag()) << ",";
    out << s.n << "," << format_double(s.value) << "\n";
  }
  return out.str();
}

Heatmap green_heatmap(const NormalizedLift& lift, std::span<const Complex> base, std::span<const Complex> u,
                      std::span<const Complex> v, double radius, int size, int n) {
  if (size < 2) throw DomainError("heatmap size must be at least 2");
  const std::size_t dim = static_cast<std::size_t>(lift.dimension());
  if (base.size() != dim || u.size() != dim || v.size() != dim) throw DomainError("slice vectors have wrong dimension");
  Heatmap h{size, radius, std::vector<double>(static_cast<std::size_t>(size) * size)};
  parallel_for(size, [&](int row) {
    const double t = radius - 2 * radius * row / (size - 1);
    Point p(dim);
    for (int col = 0; col < size; ++col) {
      const double s = -radius + 2 * radius * col / (size - 1);
      for (std::size_t k = 0; k < dim; ++k) p[k] = base[k] + s * u[k] + t * v[k];
      h.values[static_cast<std::size_t>(row) * size + col] =
          norm(p) == 0 ? -std::numeric_limits<double>::infinity() : green_value(lift, p, n);
    }
  });
  return h;
}

std::string heatmap_csv(const Heatmap& h) {
  std::ostringstream out;
  for (int r = 0; r < h.size; ++r) {
    for (int c = 0; c < h.size; ++c) out << (c ? "," : "") << format_double(h.values[r * h.size + c]);
    out << "\n";
  }
  return out.str();
}

std::string heatmap_pgm(const Heatmap& h, double clip) {
  if (!(clip > 0)) throw DomainError("clip must be positive");
  std::ostringstream out;
  out << "P2\n" << h.size << " " << h.size << "\n255\n";
  for (int r = 0; r < h.size; ++r) {
    for (int c = 0; c < h.size; ++c) {
      const double v = std::clamp(h.values[r * h.size + c], -clip, 0.0);
      const int g = static_cast<int>(std::lround(255 * (v + clip) / clip));
      out << (c ? " " : "") << g;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace dynstab
