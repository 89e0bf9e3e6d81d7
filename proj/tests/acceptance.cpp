// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
// Optional argv[1]: path of the dynstab executable, used for the determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "dynstab/dgfamily.hpp"
#include "dynstab/greenpot.hpp"
#include "dynstab/mapparse.hpp"
#include "dynstab/slicemass.hpp"

using namespace dynstab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int k, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s | %s | %.1f s\n", o.pass ? "PASS" : "FAIL", k, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string run_cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int c = cli::run(args, out, err);
  if (code) *code = c;
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";

  criterion(1, "exact degrees at t = 1/3, N = 4", [] {
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    const auto j = nlohmann::json::parse(run_cli({"degrees", "--t", "1/3", "--N", "4"}, &code));
    const double secs = elapsed_since(t0);
    std::vector<int> degs;
    bool bounds_zero = true;
    for (const auto& row : j["rows"]) {
      degs.push_back(row["deg"]);
      bounds_zero &= row["mass_bound"] == "0/1";
    }
    const double err = j["float_check"]["max_rel_error"];
    const bool ok = code == 0 && degs == std::vector<int>{2, 4, 8, 16} && bounds_zero && j["float_check"]["points"] == 20 &&
                    err < 1e-8 && secs < 60;
    std::string list;
    for (int d : degs) list += (list.empty() ? "" : ",") + std::to_string(d);
    return Outcome{ok, "degrees (" + list + "), float error " + fmt("%.2e", err)};
  });

  criterion(2, "degree drop at t = 1/2, N = 5", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto map = dg_build(Rational(1, 2));
    const auto facs = iterate_factors(*map.exact_lift, 5);
    const auto rep = make_report(2, facs);
    const int n = rep.first_drop();
    if (n < 1) return Outcome{false, "no drop"};
    const auto& row = rep.rows[n - 1];
    const bool nonconst = facs[n - 1].content.degree() > 0;
    const bool div = n < 5 && check_factor_divisibility(facs[n - 1], facs[n], 2, 1);
    const bool ok = row.degree < (1 << n) && nonconst && row.mass_bound > 0 && div && elapsed_since(t0) < 600;
    return Outcome{ok, "first drop n = " + std::to_string(n) + ", deg " + std::to_string(row.degree) + ", deg H " +
                           std::to_string(row.content_degree) + ", bound " + to_string(row.mass_bound) +
                           ", divisibility " + (div ? "true" : "false")};
  });

  criterion(3, "predicate agrees with exact degrees at N = 4", [] {
    std::string detail;
    bool ok = true;
    for (const char* t : {"1/2", "1/3", "1/4", "2/3", "3/4", "1/5"}) {
      int code = 0;
      const std::string text = run_cli({"stability", "--t", t, "--N", "4"}, &code);
      const auto j = text.empty() ? nlohmann::json::object() : nlohmann::json::parse(text);
      ok &= code == 0 && j["cross_validation"]["agree"] == true;
      detail += std::string(t) + (j.value("stable", false) ? ":stable " : ":unstable ");
    }
    return Outcome{ok, detail};
  });

  criterion(4, "fixed-point identity and halving deviation", [] {
    bool ok = true;
    double worst = 0, rmin = 1, rmax = 0;
    for (const Parameter t : {Parameter(0.0), Parameter(0.3), Parameter(Rational(1, 2))}) {
      const NormalizedLift lift(dg_build(t).lift);
      const auto z = dg_fixed_point(t);
      const auto fp = make_fixed_point(lift, Point(z.begin(), z.end()));
      const double dev = fixed_point_check(lift, fp, 20);
      worst = std::max(worst, dev);
      ok &= dev < 1e-7;
      for (int n = 5; n < 12; ++n) {
        const double r = fixed_point_limit_deviation(lift, fp, n + 1) / fixed_point_limit_deviation(lift, fp, n);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
      }
    }
    ok &= rmin >= 0.4 && rmax <= 0.6;
    return Outcome{ok, "max deviation " + fmt("%.2e", worst) + ", ratios in [" + fmt("%.4f", rmin) + ", " +
                           fmt("%.4f", rmax) + "]"};
  });

  criterion(5, "monotone partial sums", [] {
    const auto pts = sample_sphere(1000, 5);
    double worst = -INFINITY;
    for (const NormalizedLift& l : {NormalizedLift(parse_map_float("x^2, y^2, z^2")), NormalizedLift(dg_build(0.3).lift),
                                    NormalizedLift(dg_build(Parameter(Rational(1, 2))).lift)})
      worst = std::max(worst, monotonicity_check(l, pts, 10));
    return Outcome{worst <= 1e-9, "max increment " + fmt("%.3e", worst)};
  });

  criterion(6, "closed-form Green values", [] {
    const NormalizedLift l(parse_map_float("x^2, y^2, z^2"));
    const double log2 = std::log(2.0);
    const double e1 = std::abs(green_value(l, Point{1, 0, 0}, 2) + 0.75 * log2);
    const double e2 = std::abs(green_value(l, Point{0, 1, 1}, 2) + 9.0 / 8 * log2);
    return Outcome{e1 < 1e-9 && e2 < 1e-9, "errors " + fmt("%.1e", e1) + ", " + fmt("%.1e", e2)};
  });

  criterion(7, "line-mass calibration", [] {
    const NormalizedLift l(parse_map_float("x^2, y^2, z^2"));
    LineChart line = random_lines(1, 11, 512)[0];
    const double total = line_mass(l, line, 0, 1).total;
    const double disk = chart_disk_mass(l, line, 0, 1.0);
    bool shrink = true;
    double prev = -1, worst_ratio = 0;
    for (int R : {64, 128, 256, 512}) {
      line.resolution = R;
      const double err = std::abs(line_mass(l, line, 0, 1).total - 1);
      if (prev > 0) {
        worst_ratio = std::max(worst_ratio, err / prev);
        shrink &= err <= 0.7 * prev;
      }
      prev = err;
    }
    const bool ok = std::abs(total - 1) <= 0.05 && std::abs(disk - 0.5) <= 0.03 && shrink;
    return Outcome{ok, "line mass " + fmt("%.6f", total) + ", unit disk " + fmt("%.6f", disk) +
                           ", worst doubling ratio " + fmt("%.3f", worst_ratio)};
  });

  criterion(8, "sublevel mass near t = 1/2", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = degree_sequence(*dg_build(Rational(1, 2)).exact_lift, 6);
    const double bound = rep.rows.back().mass_bound.get_d();
    auto fam = [](double t) { return NormalizedLift(dg_build(t).lift); };
    const auto rows = lemma_sweep(fam, 0.5, {0.0, 1.0 / 64, 0.25}, 6, 3, 16, 0, 512);
    const double at0 = rows[0].mean_sublevel, near = rows[1].mean_sublevel, far = rows[2].mean_sublevel;
    const bool ok = at0 >= bound - 0.15 && near > far - 0.1 && elapsed_since(t0) < 900;
    return Outcome{ok, "bound " + to_string(rep.rows.back().mass_bound) + ", sublevel " + fmt("%.4f", at0) +
                           " (offset 0), " + fmt("%.4f", near) + " (2^-6), " + fmt("%.4f", far) + " (2^-2)"};
  });

  criterion(9, "byte-identical repeated CLI runs", [&exe] {
    const std::vector<std::vector<std::string>> cases = {
        {"degrees", "--t", "1/4", "--N", "4"},
        {"stability", "--t", "3/4", "--N", "3"},
        {"family", "--t", "0.3"},
        {"green", "--t", "0.3", "--n", "8", "--samples", "200", "--seed", "7"},
        {"green", "--t", "1/2", "--heatmap", "--size", "32", "--n", "6"},
        {"mass", "--sweep", "0.5", "--offsets", "0.25,0", "--n", "3", "--lines", "2", "--resolution", "64", "--seed",
         "4"}};
    int compared = 0;
    bool ok = true;
    for (const auto& args : cases) {
      std::vector<std::string> a1 = args, a2 = args;
      a1.insert(a1.begin(), {"--out", "acceptance_run1.out"});
      a2.insert(a2.begin(), {"--out", "acceptance_run2.out"});
      ok &= run_cli(a1).empty() && run_cli(a2).empty();
      const std::string s1 = slurp("acceptance_run1.out"), s2 = slurp("acceptance_run2.out");
      ok &= !s1.empty() && s1 == s2;
      ++compared;
      if (!exe.empty()) {
        std::string cmd = exe + " --out acceptance_run3.out";
        for (const auto& s : args) cmd += " '" + s + "'";
        ok &= std::system(cmd.c_str()) == 0 && slurp("acceptance_run3.out") == s1;
        ++compared;
      }
    }
    for (const char* f : {"acceptance_run1.out", "acceptance_run2.out", "acceptance_run3.out"}) std::remove(f);
    return Outcome{ok, std::to_string(compared) + " output pairs compared" + (exe.empty() ? " (in-process only)" : "")};
  });

  criterion(10, "representative independence", [] {
    const NormalizedLift l(dg_build(0.3).lift);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> logmod(std::log(1e-4), std::log(1e4)), arg(0, 2 * M_PI);
    double worst = 0;
    for (const auto& p : sample_sphere(100, 10)) {
      const Complex lambda = std::polar(std::exp(logmod(rng)), arg(rng));
      Point q = p;
      for (auto& c : q) c *= lambda;
      worst = std::max(worst, std::abs(green_eval(l, p, 12).value - green_eval(l, q, 12).value));
    }
    return Outcome{worst < 1e-10, "max difference " + fmt("%.2e", worst) + " over 100 pairs"};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
