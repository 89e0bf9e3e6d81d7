#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "dynstab/dgfamily.hpp"
#include "dynstab/greenpot.hpp"
#include "dynstab/mapparse.hpp"
#include "dynstab/slicemass.hpp"

namespace dynstab::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Config {
  int degree_cap = 64;
  int conductor_cap = kDefaultConductorCap;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;

  std::string t;
  std::string map;
  int conductor = 4;
  int N = 4;
  int n = 8;
  int mass_n = 6;
  double M = 3;
  int samples = 1000;
  int lines = 16;
  int resolution = 512;
  double split = 1.0;
  int float_points = 20;
  int float_max_n = 4;
  int cross_validate = 0;
  std::string point;
  bool heatmap = false;
  int size = 128;
  double radius = 2.0;
  double clip = 10.0;
  std::string base = "0,0,1", dir_u = "1,0,0", dir_v = "0,1,0";
  std::string sweep;
  std::string offsets = "0";

  Limits limits() const { return Limits{degree_cap, conductor_cap}; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

template <class Range>
Json point_json(const Range& p) {
  Json j = Json::array();
  for (const auto& c : p) j.push_back(complex_json(c));
  return j;
}

template <class Range>
Json exact_point_json(const Range& p) {
  Json j = Json::array();
  for (const auto& c : p) j.push_back(c.to_string());
  return j;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.empty()) throw DomainError("empty list '" + text + "'");
  return parts;
}

Complex parse_complex(const std::string& text) {
  const auto p = parse_expression_float(text, 1);
  if (!p.is_constant()) throw DomainError("not a number: '" + text + "'");
  const std::vector<Complex> zero{0.0};
  return p.evaluate<Complex>(std::span<const Complex>(zero));
}

Point parse_point(const std::string& text) {
  Point p;
  for (const auto& s : split_list(text)) p.push_back(parse_complex(s));
  return p;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> v;
  for (const auto& s : split_list(text)) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      throw DomainError("malformed number '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(x)) throw DomainError("malformed number '" + s + "'");
    v.push_back(x);
  }
  return v;
}

Rational exact_t(const std::string& text, const char* command) {
  if (text.empty()) throw DomainError(std::string(command) + " needs --t");
  const Parameter t = parse_parameter(text);
  if (!std::holds_alternative<Rational>(t))
    throw DomainError(std::string(command) + " needs an exact parameter p/q, got '" + text + "'");
  return std::get<Rational>(t);
}

std::string pick_format(const Config& cfg, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw DomainError("format '" + f + "' is not available for this command");
}

// ---- degrees -------------------------------------------------------------

std::string cmd_degrees(const Config& cfg) {
  const std::string format = pick_format(cfg, "json", {"json", "csv"});
  if (cfg.N < 1) throw DomainError("--N must be positive");
  ExactMap f;
  Json head;
  if (!cfg.map.empty()) {
    f = parse_map_exact(cfg.map, cfg.conductor);
    head["map"] = cfg.map;
  } else {
    const Rational t = exact_t(cfg.t, "degrees");
    const DGMap dg = dg_build(t, cfg.limits());
    f = *dg.exact_lift;
    head["t"] = to_string(t);
    head["conductor"] = dg.params.exact->conductor;
  }
  const auto facs = iterate_factors(f, cfg.N, cfg.limits());
  const IterateReport rep = make_report(f.degree(), facs);

  const auto pts = sample_sphere(cfg.float_points, cfg.seed, f.nvars());
  double max_err = 0;
  for (const auto& fac : facs)
    if (fac.n <= cfg.float_max_n) max_err = std::max(max_err, float_recombination_error(f, fac, pts));
  if (!(max_err < 1e-8)) throw CrossCheckFailure("float recombination error " + num(max_err));

  Json div = Json::array();
  for (std::size_t k = 0; k + 1 < facs.size(); ++k) {
    const bool ok = check_factor_divisibility(facs[k], facs[k + 1], f.degree(), 1);
    if (!ok) throw CrossCheckFailure("H^(" + std::to_string(facs[k].n) + ") divisibility failed");
    div.push_back(Json{{"n", facs[k].n}, {"m", 1}, {"holds", ok}});
  }

  if (format == "csv") {
    std::ostringstream out;
    out << "n,deg,degH,mass_bound,stable\n";
    for (const auto& r : rep.rows)
      out << r.n << "," << r.degree << "," << r.content_degree << "," << to_string(r.mass_bound) << ","
          << (r.stable_so_far ? "true" : "false") << "\n";
    return out.str();
  }
  Json j = Json::parse(rep.to_json());
  for (auto& [k, v] : head.items()) j[k] = v;
  j["first_drop"] = rep.first_drop();
  j["float_check"] = Json{{"points", cfg.float_points}, {"max_n", std::min(cfg.float_max_n, cfg.N)}, {"seed", cfg.seed},
                          {"max_rel_error", max_err}};
  j["divisibility"] = div;
  return j.dump(2) + "\n";
}

// ---- stability -----------------------------------------------------------

Json verdict_json(const StabilityVerdict& v) {
  return Json{{"t", to_string(v.t)},
              {"stable", v.stable},
              {"witness_steps", v.witness_steps},
              {"predicted_first_drop", v.predicted_first_drop},
              {"reason", v.reason}};
}

std::string cmd_stability(const Config& cfg) {
  pick_format(cfg, "json", {"json"});
  const Rational t = exact_t(cfg.t, "stability");
  Json j = verdict_json(dg_stability_predicate(t));
  if (cfg.cross_validate > 0) j["cross_validation"] = Json::parse(to_json(dg_cross_validate(t, cfg.cross_validate, cfg.limits())));
  return j.dump(2) + "\n";
}

// ---- family --------------------------------------------------------------

std::string cmd_family(const Config& cfg) {
  pick_format(cfg, "json", {"json"});
  if (cfg.t.empty()) throw DomainError("family needs --t");
  const Parameter t = parse_parameter(cfg.t);
  const DGMap dg = dg_build(t, cfg.limits());
  Json j;
  j["t"] = parameter_string(t);
  j["mode"] = dg.is_exact() ? "exact" : "float";
  j["coefficients"] = Json{{"a", complex_json(dg.params.a)}, {"b", complex_json(dg.params.b)}, {"c", complex_json(dg.params.c)}};
  if (dg.params.exact) {
    const auto& e = *dg.params.exact;
    j["conductor"] = e.conductor;
    j["exact_coefficients"] = Json{{"a", e.a.to_string()}, {"b", e.b.to_string()}, {"c", e.c.to_string()}};
  }
  const auto fp = dg_fixed_point(t);
  j["fixed_point"] = point_json(fp);
  if (const auto* r = std::get_if<Rational>(&t)) j["fixed_point_exact"] = exact_point_json(dg_fixed_point_exact(*r, cfg.limits()));
  j["indeterminacy"] = Json{{"forward", Json::array()}, {"backward", Json::array()}};
  for (bool fwd : {true, false}) {
    auto& arr = j["indeterminacy"][fwd ? "forward" : "backward"];
    if (dg.is_exact())
      for (const auto& p : dg_indeterminacy_points_exact(dg, fwd)) arr.push_back(exact_point_json(p));
    else
      for (const auto& p : dg_indeterminacy_points(dg, fwd)) arr.push_back(point_json(p));
  }
  Json actions = Json::array();
  const std::pair<InvariantLine, std::array<Complex, 3>> probes[] = {
      {InvariantLine::X0, {0, 1, 1}}, {InvariantLine::Y0, {1, 0, 1}}, {InvariantLine::Z0, {1, 1, 0}}};
  const char* names[] = {"x=0", "y=0", "z=0"};
  for (int k = 0; k < 3; ++k) {
    const auto a = dg_line_action(dg, probes[k].first, probes[k].second);
    actions.push_back(Json{{"line", names[k]}, {"point", point_json(probes[k].second)}, {"image", point_json(a.image)},
                           {"deviation", a.deviation}});
  }
  j["line_actions"] = actions;
  if (const auto* r = std::get_if<Rational>(&t)) {
    j["verdict"] = verdict_json(dg_stability_predicate(*r));
    if (cfg.cross_validate > 0)
      j["cross_validation"] = Json::parse(to_json(dg_cross_validate(*r, cfg.cross_validate, cfg.limits())));
  } else if (cfg.cross_validate > 0) {
    throw DomainError("cross validation needs an exact parameter p/q");
  }
  return j.dump(2) + "\n";
}

// ---- green ---------------------------------------------------------------

NormalizedLift float_lift(const Config& cfg) {
  if (!cfg.map.empty() && !cfg.t.empty()) throw DomainError("give either --t or --map, not both");
  if (!cfg.map.empty()) return NormalizedLift(parse_map_float(cfg.map));
  if (cfg.t.empty()) throw DomainError("needs --t or --map");
  return NormalizedLift(dg_build(parse_parameter(cfg.t), cfg.limits()).lift);
}

std::string cmd_green(const Config& cfg) {
  if (cfg.n < 0) throw DomainError("--n must be non-negative");
  const NormalizedLift lift = float_lift(cfg);
  if (cfg.heatmap) {
    const std::string format = pick_format(cfg, "pgm", {"pgm", "csv"});
    if (cfg.size < 1) throw DomainError("--size must be positive");
    const Point base = parse_point(cfg.base), u = parse_point(cfg.dir_u), v = parse_point(cfg.dir_v);
    const auto h = green_heatmap(lift, base, u, v, cfg.radius, cfg.size, cfg.n);
    return format == "pgm" ? heatmap_pgm(h, cfg.clip) : heatmap_csv(h);
  }
  const std::string format = pick_format(cfg, "csv", {"csv", "json"});
  std::vector<Point> points;
  if (!cfg.point.empty()) {
    points.push_back(parse_point(cfg.point));
  } else {
    if (cfg.samples < 1) throw DomainError("--samples must be positive");
    points = sample_sphere(cfg.samples, cfg.seed, lift.dimension());
  }
  std::vector<GreenSample> samples(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) { samples[i] = green_eval(lift, points[i], cfg.n); });
  if (format == "csv") return green_csv(samples);
  Json arr = Json::array();
  for (const auto& s : samples) {
    Json row{{"point", point_json(s.point)}, {"n", s.n}};
    if (s.is_neg_inf())
      row["value"] = "-inf", row["underflow_step"] = s.underflow_step;
    else
      row["value"] = s.value;
    arr.push_back(row);
  }
  return Json{{"d", lift.degree()}, {"scale", lift.scale()}, {"samples", arr}}.dump(2) + "\n";
}

// ---- mass ----------------------------------------------------------------

std::string cmd_mass(Config cfg) {
  cfg.n = cfg.mass_n;
  const std::string format = pick_format(cfg, "json", {"json", "csv"});
  if (cfg.n < 0) throw DomainError("--n must be non-negative");
  if (!cfg.sweep.empty() && !cfg.t.empty()) throw DomainError("give either --t or --sweep, not both");
  const std::string centre = cfg.sweep.empty() ? cfg.t : cfg.sweep;
  if (centre.empty()) throw DomainError("mass needs --t or --sweep");
  const Parameter t_star = parse_parameter(centre);
  const std::vector<double> offsets = parse_doubles(cfg.offsets);

  // Exact lower bound 1 - deg f^n / 2^n, only for a rational centre.
  std::optional<Rational> bound;
  if (const auto* r = std::get_if<Rational>(&t_star); r && cfg.n >= 1) {
    const auto rep = degree_sequence(*dg_build(*r, cfg.limits()).exact_lift, cfg.n, cfg.limits());
    bound = rep.rows.back().mass_bound;
  } else if (std::holds_alternative<Rational>(t_star)) {
    bound = Rational(0);
  }

  const auto family = [](double t) { return NormalizedLift(dg_build(t).lift); };
  const auto rows =
      lemma_sweep(family, parameter_value(t_star), offsets, cfg.n, cfg.M, cfg.lines, cfg.seed, cfg.resolution);

  auto row_bound = [&](const SweepRow& r) -> std::optional<Rational> {
    if (bound && r.offset == 0) return bound;
    return std::nullopt;
  };

  if (format == "csv") {
    std::istringstream in(sweep_csv(rows));
    std::ostringstream out;
    std::string line;
    std::getline(in, line);
    out << line << ",algebraic_bound\n";
    for (const auto& r : rows) {
      std::getline(in, line);
      const auto b = row_bound(r);
      out << line << "," << (b ? to_string(*b) : "") << "\n";
    }
    return out.str();
  }

  Json j;
  j["t_star"] = parameter_string(t_star);
  j["n"] = cfg.n;
  j["M"] = cfg.M;
  j["lines"] = cfg.lines;
  j["resolution"] = cfg.resolution;
  j["seed"] = cfg.seed;
  j["algebraic_bound"] = bound ? Json(to_string(*bound)) : Json(nullptr);
  Json arr = Json::array();
  for (const auto& r : rows) {
    const auto b = row_bound(r);
    arr.push_back(Json{{"t", r.t},
                       {"offset", r.offset},
                       {"mean_sublevel", r.mean_sublevel},
                       {"mean_total", r.mean_total},
                       {"algebraic_bound", b ? Json(to_string(*b)) : Json(nullptr)}});
  }
  j["rows"] = arr;
  if (rows.size() > 1) {
    // Rows ordered by decreasing |offset|: does the sublevel mass grow toward t*?
    auto sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SweepRow& a, const SweepRow& b) { return std::abs(a.offset) > std::abs(b.offset); });
    bool increasing = true;
    for (std::size_t k = 1; k < sorted.size(); ++k) increasing &= sorted[k].mean_sublevel >= sorted[k - 1].mean_sublevel;
    j["trend"] = Json{{"farthest_offset", sorted.front().offset},
                      {"nearest_offset", sorted.back().offset},
                      {"sublevel_change", sorted.back().mean_sublevel - sorted.front().mean_sublevel},
                      {"nondecreasing_toward_t_star", increasing}};
  }
  return j.dump(2) + "\n";
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw DomainError("cannot open '" + cfg.out_path + "' for writing");
  file << text;
  if (!file) throw DomainError("failed writing '" + cfg.out_path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Exact and numerical tools for algebraic stability and Green potentials", "dynstab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--degree-cap", cfg.degree_cap, "Largest raw iterate degree computed exactly")->check(CLI::PositiveNumber);
  app.add_option("--conductor-cap", cfg.conductor_cap, "Largest cyclotomic conductor")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for all random sampling");
  app.add_option("--out", cfg.out_path, "Write the report to this file instead of stdout");
  app.add_option("--format", cfg.format, "Output format: json, csv or pgm (default depends on command)")
      ->check(CLI::IsMember({"json", "csv", "pgm"}));

  auto* deg = app.add_subcommand("degrees", "Exact degree sequence of iterates");
  deg->add_option("--t", cfg.t, "Family parameter p/q");
  deg->add_option("--map", cfg.map, "Explicit map, e.g. \"x^2,y^2,z^2\" (instead of --t)");
  deg->add_option("--conductor", cfg.conductor, "Conductor for coefficients of --map");
  deg->add_option("--N", cfg.N, "Number of iterates");
  deg->add_option("--float-points", cfg.float_points, "Points for the float recombination check");
  deg->add_option("--float-max-n", cfg.float_max_n, "Largest n included in the float check");

  auto* stab = app.add_subcommand("stability", "Stability predicate for the family");
  stab->add_option("--t", cfg.t, "Family parameter p/q")->required();
  stab->add_option("--N", cfg.cross_validate, "Cross-validate against exact degrees up to N (0 skips)");

  auto* fam = app.add_subcommand("family", "Coefficients, fixed point and indeterminacy of the family");
  fam->add_option("--t", cfg.t, "Family parameter, p/q or decimal")->required();
  fam->add_option("--cross-validate", cfg.cross_validate, "Cross-validate against exact degrees up to N (0 skips)");

  auto* green = app.add_subcommand("green", "Green potentials g^(n)");
  green->add_option("--t", cfg.t, "Family parameter, p/q or decimal");
  green->add_option("--map", cfg.map, "Explicit map with decimal or complex coefficients");
  green->add_option("--n", cfg.n, "Number of iterates");
  green->add_option("--point", cfg.point, "Single point, comma-separated coordinates (e.g. 1,0,i)");
  green->add_option("--samples", cfg.samples, "Number of sphere samples when --point is absent");
  green->add_flag("--heatmap", cfg.heatmap, "Evaluate on an affine slice instead");
  green->add_option("--size", cfg.size, "Heatmap pixels per side");
  green->add_option("--radius", cfg.radius, "Heatmap half-width");
  green->add_option("--clip", cfg.clip, "Heatmap lower clip for the gray scale");
  green->add_option("--base", cfg.base, "Heatmap slice origin");
  green->add_option("--u", cfg.dir_u, "Heatmap first direction");
  green->add_option("--v", cfg.dir_v, "Heatmap second direction");

  auto* mass = app.add_subcommand("mass", "Sublevel line masses of the Green current");
  mass->add_option("--t", cfg.t, "Family parameter, p/q or decimal");
  mass->add_option("--sweep", cfg.sweep, "Centre parameter of a sweep");
  mass->add_option("--offsets", cfg.offsets, "Comma-separated offsets from the centre");
  mass->add_option("--n", cfg.mass_n, "Number of iterates");
  mass->add_option("--M", cfg.M, "Sublevel threshold, cells with g < -M");
  mass->add_option("--lines", cfg.lines, "Number of random lines");
  mass->add_option("--resolution", cfg.resolution, "Grid cells per side of each chart");
  mass->add_option("--split", cfg.split, "Chart split radius");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      const auto subs = app.get_subcommands();
      out << (subs.empty() ? app.help() : subs.front()->help());
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    std::string text;
    if (deg->parsed())
      text = cmd_degrees(cfg);
    else if (stab->parsed())
      text = cmd_stability(cfg);
    else if (fam->parsed())
      text = cmd_family(cfg);
    else if (green->parsed())
      text = cmd_green(cfg);
    else
      text = cmd_mass(cfg);
    emit(cfg, text, out);
    return kOk;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCap;
  } catch (const CrossCheckFailure& e) {
    err << "cross-check failed: " << e.what() << "\n";
    return kCrossCheck;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kCrossCheck;
  }
}

}  // namespace dynstab::cli
