#pragma once

// Masses of omega + dd^c g^(n) on projective lines of P^2, from a 5-point
// discrete Laplacian of the restricted local potential.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dynstab/greenpot.hpp"

namespace dynstab {

constexpr double kMassClip = 40;

// The line through p and q, covered by two charts: w -> p + w q on |w| <= split
// and w' -> q + w' p on |w'| <= 1/split. Each chart is sampled on an R x R
// cell-centred grid whose square leaves a two-cell margin around the disk.
struct LineChart {
  Point p, q;
  int resolution = 512;
  double split = 1.0;
};

// count lines with orthonormal (p, q), deterministic per seed.
std::vector<LineChart> random_lines(int count, std::uint64_t seed, int resolution = 512, double split = 1.0);

struct ChartGrid {
  int resolution = 0;
  double disk_radius = 0;
  double half_width = 0;  // grid square is [-half_width, half_width]^2
  double h = 0;
  std::vector<double> u;  // log||z(w)|| + g^(n), clamped below at -kMassClip
  std::vector<double> g;  // g^(n); -inf where the orbit underflows
  int flagged = 0;        // cells with -inf or clamped values

  double x(int i) const { return -half_width + (i + 0.5) * h; }
};

// chart_index 0: w -> p + w q; 1: w' -> q + w' p. Requires resolution >= 32.
ChartGrid line_restricted_potential(const NormalizedLift& lift, const LineChart& line, int n, int chart_index);

// Area of the disk of radius r about 0 inside [x0, x1] x [y0, y1].
double disk_rect_area(double r, double x0, double x1, double y0, double y1);

struct MassEstimate {
  double total = 0;
  double sublevel = 0;
  double M = 0;
  int resolution = 0;
  int lines_used = 1;
  int flagged = 0;
};

// Per-cell mass = (5-point Laplacian of u) h^2 / (2 pi), weighted by the
// fraction of the cell inside the chart disk; both charts summed. Sublevel
// counts cells with g^(n) < -M.
MassEstimate line_mass(const NormalizedLift& lift, const LineChart& line, int n, double M);

// Same, restricted to |w| <= radius in the first chart.
double chart_disk_mass(const NormalizedLift& lift, const LineChart& line, int n, double radius);

struct SweepRow {
  double t = 0;
  double offset = 0;
  int n = 0;
  double M = 0;
  int lines = 0;
  double mean_sublevel = 0;
  double mean_total = 0;
};

using FamilyEvaluator = std::function<NormalizedLift(double)>;

// Mean line masses at t_star + offset for each offset, on the same random
// lines for every t.
std::vector<SweepRow> lemma_sweep(const FamilyEvaluator& family, double t_star, const std::vector<double>& offsets,
                                  int n, double M, int lines, std::uint64_t seed, int resolution = 512);

// t,offset,n,M,lines,mean_sublevel,mean_total
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace dynstab
