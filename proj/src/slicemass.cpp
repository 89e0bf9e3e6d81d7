#include "dynstab/slicemass.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "dynstab/error.hpp"

namespace dynstab {

namespace {

// Integral of sqrt(r^2 - x^2).
double half_chord_integral(double r, double x) {
  x = std::clamp(x, -r, r);
  return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) + r * r * std::asin(x / r));
}

Point orthonormal_to(const Point& p, Point q) {
  Complex dot = 0;
  for (std::size_t i = 0; i < p.size(); ++i) dot += std::conj(p[i]) * q[i];
  double len = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    q[i] -= dot * p[i];
    len += std::norm(q[i]);
  }
  len = std::sqrt(len);
  if (len < 1e-8) throw DomainError("line points are linearly dependent");
  for (auto& c : q) c /= len;
  return q;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ChartGrid make_grid(const NormalizedLift& lift, const Point& base, const Point& dir, double radius, int resolution,
                    int n) {
  if (resolution < 32) throw DomainError("grid resolution must be at least 32");
  if (lift.dimension() != 3) throw DomainError("line masses are implemented for P^2 only");
  ChartGrid grid;
  grid.resolution = resolution;
  grid.disk_radius = radius;
  grid.half_width = radius * resolution / (resolution - 4.0);
  grid.h = 2 * grid.half_width / resolution;
  const std::size_t cells = static_cast<std::size_t>(resolution) * resolution;
  grid.u.assign(cells, 0);
  grid.g.assign(cells, 0);
  std::vector<int> flagged_rows(resolution, 0);
  parallel_for(resolution, [&](int j) {
    Point z(3);
    const double y = grid.x(j);
    for (int i = 0; i < resolution; ++i) {
      const Complex w(grid.x(i), y);
      double len = 0;
      for (int k = 0; k < 3; ++k) {
        z[k] = base[k] + w * dir[k];
        len += std::norm(z[k]);
      }
      const std::size_t idx = static_cast<std::size_t>(j) * resolution + i;
      const double g = green_value(lift, z, n);
      grid.g[idx] = g;
      double u = 0.5 * std::log(len) + g;
      if (!(u >= -kMassClip)) {
        u = -kMassClip;
        ++flagged_rows[j];
      }
      grid.u[idx] = u;
    }
  });
  for (int f : flagged_rows) grid.flagged += f;
  return grid;
}

// Weighted mass over the disk; sublevel over cells with g < -M.
std::pair<double, double> grid_mass(const ChartGrid& grid, double M) {
  const int R = grid.resolution;
  const double h = grid.h;
  double total = 0, sub = 0;
  for (int j = 1; j + 1 < R; ++j) {
    const double y0 = grid.x(j) - h / 2;
    for (int i = 1; i + 1 < R; ++i) {
      const double x0 = grid.x(i) - h / 2;
      const double area = disk_rect_area(grid.disk_radius, x0, x0 + h, y0, y0 + h);
      if (area <= 0) continue;
      const std::size_t idx = static_cast<std::size_t>(j) * R + i;
      const double lap = grid.u[idx + 1] + grid.u[idx - 1] + grid.u[idx + R] + grid.u[idx - R] - 4 * grid.u[idx];
      const double mass = lap / (2 * std::numbers::pi) * (area / (h * h));
      total += mass;
      if (grid.g[idx] < -M) sub += mass;
    }
  }
  return {total, sub};
}

}  // namespace

double disk_rect_area(double r, double x0, double x1, double y0, double y1) {
  x0 = std::max(x0, -r);
  x1 = std::min(x1, r);
  if (x0 >= x1 || y0 >= y1 || r <= 0) return 0;
  // Integrate max(0, min(y1, s) - max(y0, -s)), s = sqrt(r^2 - x^2), piecewise
  // between the abscissae where s crosses |y0| or |y1|.
  std::vector<double> cuts{x0, x1};
  for (double y : {y0, y1}) {
    if (std::abs(y) < r) {
      const double c = std::sqrt(r * r - y * y);
      for (double x : {-c, c})
        if (x > x0 && x < x1) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double area = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b <= a) continue;
    const double mid = 0.5 * (a + b);
    const double s = std::sqrt(std::max(0.0, r * r - mid * mid));
    const bool top_is_chord = s < y1, bottom_is_chord = -s > y0;
    const double top = top_is_chord ? s : y1, bottom = bottom_is_chord ? -s : y0;
    if (top <= bottom) continue;
    const double chord = half_chord_integral(r, b) - half_chord_integral(r, a);
    double piece = 0;
    piece += top_is_chord ? chord : y1 * (b - a);
    piece -= bottom_is_chord ? -chord : y0 * (b - a);
    area += piece;
  }
  return area;
}

std::vector<LineChart> random_lines(int count, std::uint64_t seed, int resolution, double split) {
  const auto pts = sample_sphere(2 * count, seed, 3);
  std::vector<LineChart> out;
  for (int i = 0; i < count; ++i)
    out.push_back(LineChart{pts[2 * i], orthonormal_to(pts[2 * i], pts[2 * i + 1]), resolution, split});
  return out;
}

ChartGrid line_restricted_potential(const NormalizedLift& lift, const LineChart& line, int n, int chart_index) {
  if (!(line.split > 0)) throw DomainError("chart split radius must be positive");
  if (chart_index == 0) return make_grid(lift, line.p, line.q, line.split, line.resolution, n);
  if (chart_index == 1) return make_grid(lift, line.q, line.p, 1 / line.split, line.resolution, n);
  throw DomainError("chart index must be 0 or 1");
}

MassEstimate line_mass(const NormalizedLift& lift, const LineChart& line, int n, double M) {
  MassEstimate est;
  est.M = M;
  est.resolution = line.resolution;
  for (int chart = 0; chart < 2; ++chart) {
    const ChartGrid grid = line_restricted_potential(lift, line, n, chart);
    const auto [total, sub] = grid_mass(grid, M);
    est.total += total;
    est.sublevel += sub;
    est.flagged += grid.flagged;
  }
  return est;
}

double chart_disk_mass(const NormalizedLift& lift, const LineChart& line, int n, double radius) {
  const ChartGrid grid = make_grid(lift, line.p, line.q, radius, line.resolution, n);
  return grid_mass(grid, 0).first;
}

std::vector<SweepRow> lemma_sweep(const FamilyEvaluator& family, double t_star, const std::vector<double>& offsets,
                                  int n, double M, int lines, std::uint64_t seed, int resolution) {
  if (lines < 1) throw DomainError("line count must be positive");
  const auto charts = random_lines(lines, seed, resolution);
  std::vector<SweepRow> rows;
  for (double offset : offsets) {
    const double t = t_star + offset;
    const NormalizedLift lift = family(t);
    SweepRow row{t, offset, n, M, lines, 0, 0};
    for (const auto& chart : charts) {
      const MassEstimate est = line_mass(lift, chart, n, M);
      row.mean_sublevel += est.sublevel / lines;
      row.mean_total += est.total / lines;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "t,offset,n,M,lines,mean_sublevel,mean_total\n";
  for (const auto& r : rows)
    out << fmt(r.t) << "," << fmt(r.offset) << "," << r.n << "," << fmt(r.M) << "," << r.lines << ","
        << fmt(r.mean_sublevel) << "," << fmt(r.mean_total) << "\n";
  return out.str();
}

}  // namespace dynstab
