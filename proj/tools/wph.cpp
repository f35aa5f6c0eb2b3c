// wph: command-line driver for the Weil-Petersson Hessian computations.
//
// Exit codes: 0 success, 1 invariant failure or numerical error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wph/elliptic.hpp"
#include "wph/errors.hpp"
#include "wph/hessian.hpp"
#include "wph/io.hpp"
#include "wph/selftest.hpp"
#include "wph/thurston.hpp"

namespace {

using wph::io::Json;

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// What a subcommand hands back: a JSON result, an optional table for CSV and
// the first violated invariant (empty when everything holds).
struct Outcome {
  Json result;
  Table table;
  std::string failure;
};

// Flags given on the command line; unset ones fall back to --config, then defaults.
struct Flags {
  std::optional<double> ell, l0, l1, t_max;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> qd, out, format, config, p;
  std::vector<double> ells, lengths;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  try {
    Json j = Json::parse(in);
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
}

// Merges defaults, config file and command line into one echo-able object.
Json resolve(const std::string& sub, const Json& defaults, const Flags& f) {
  Json cfg = defaults;
  if (f.config) {
    const Json file = read_config(*f.config);
    for (const auto& [key, value] : file.items()) {
      if (!cfg.contains(key)) throw UsageError("config key '" + key + "' is not used by " + sub);
      cfg[key] = value;
    }
  }
  auto set = [&](const char* key, const auto& v) {
    if (v && cfg.contains(key)) cfg[key] = *v;
  };
  set("ell", f.ell);
  set("l0", f.l0);
  set("l1", f.l1);
  set("steps", f.steps);
  set("seed", f.seed);
  set("t_max", f.t_max);
  set("p", f.p);
  if (f.qd && cfg.contains("qd")) {
    try {
      cfg["qd"] = Json::parse(*f.qd);
    } catch (const Json::parse_error&) {
      throw UsageError("--qd is not valid JSON");
    }
  }
  if (!f.ells.empty() && cfg.contains("ells")) cfg["ells"] = f.ells;
  if (!f.lengths.empty() && cfg.contains("lengths")) cfg["lengths"] = f.lengths;
  cfg["format"] = f.format.value_or(cfg.value("format", std::string("json")));
  if (f.out) cfg["out"] = *f.out;
  if (cfg["format"] != "json" && cfg["format"] != "csv") throw UsageError("--format must be json or csv");
  return cfg;
}

template <class T>
T need(const Json& cfg, const char* key) {
  if (!cfg.contains(key) || cfg[key].is_null()) throw UsageError(std::string("missing required option --") + key);
  try {
    return cfg[key].get<T>();
  } catch (const Json::exception&) {
    throw UsageError(std::string("option '") + key + "' has the wrong type");
  }
}

wph::qdiff::Complex parse_point(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("--p must be 're,im'");
    }
  }
  if (parts.size() != 2) throw UsageError("--p must be 're,im'");
  return {parts[0], parts[1]};
}

Table single_row(const Json& obj) {
  Table t;
  t.rows.emplace_back();
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_number() && !value.is_boolean()) continue;
    t.columns.push_back(key);
    t.rows[0].push_back(value.is_boolean() ? (value.get<bool>() ? 1.0 : 0.0) : value.get<double>());
  }
  return t;
}

Outcome cyl_hessian(const Json& cfg) {
  const double ell = need<double>(cfg, "ell");
  if (!(ell > 0)) throw UsageError("--ell must be positive");
  const auto phi = wph::io::qdiff_from_json(need<Json>(cfg, "qd"), ell);
  if (!std::holds_alternative<wph::geom::CylinderChart>(phi.chart())) {
    throw UsageError("cyl-hessian needs a cylinder differential");
  }
  const auto report = wph::hessian::hessian_closed(phi);
  Outcome o;
  o.result = wph::io::to_json(report);
  o.table = single_row(o.result);
  o.failure = report.invariant_failure(!phi.is_zero());
  return o;
}

Outcome cyl_family(const Json& cfg) {
  const auto scan = wph::hessian::cylinder_family_scan(need<double>(cfg, "l0"), need<double>(cfg, "l1"),
                                                       need<int>(cfg, "steps"));
  Outcome o;
  o.table.columns = {"s", "ell", "dl_ds", "d2l_ds2", "d2_sqrt_l", "d2_l23", "formula_hess"};
  Json rows = Json::array();
  double worst_sqrt = 0.0, min23 = INFINITY;
  for (const auto& r : scan.rows) {
    o.table.rows.push_back({r.s, r.ell, r.dl_ds, r.d2l_ds2, r.d2_sqrt_l, r.d2_l23, r.formula_hess});
    rows.push_back({{"s", r.s}, {"ell", r.ell}, {"dl_ds", r.dl_ds}, {"d2l_ds2", r.d2l_ds2},
                    {"d2_sqrt_l", r.d2_sqrt_l}, {"d2_l23", r.d2_l23}, {"formula_hess", r.formula_hess}});
    worst_sqrt = std::max(worst_sqrt, std::abs(r.d2_sqrt_l));
    min23 = std::min(min23, r.d2_l23);
  }
  o.result = {{"kappa", scan.kappa}, {"r2", scan.r2}, {"max_abs_d2_sqrt_l", worst_sqrt}, {"min_d2_l23", min23},
              {"rows", rows}};
  if (worst_sqrt >= 1e-6) o.failure = "sqrt(ell) is not affine in arclength: max |d2_sqrt_l| = " + fmt(worst_sqrt);
  else if (!(min23 > 0)) o.failure = "ell^(2/3) is not convex: min d2_l23 = " + fmt(min23);
  return o;
}

Outcome collar_scaling(const Json& cfg) {
  const auto ells = need<std::vector<double>>(cfg, "ells");
  if (ells.size() < 3) throw UsageError("--ells needs at least three values");
  for (double l : ells) {
    if (!(l > 0 && l < 1)) throw UsageError("--ells values must lie in (0, 1)");
  }
  const auto fp = wph::elliptic::flatparallel_scaling(ells);
  Outcome o;
  o.table.columns = {"ell", "x_max", "u0", "integral", "u1v1", "particular"};
  Json rows = Json::array();
  for (const auto& r : fp.rows) {
    o.table.rows.push_back({r.ell, r.x_max, r.u0, r.integral, r.u1v1, r.particular});
    rows.push_back({{"ell", r.ell}, {"x_max", r.x_max}, {"u0", r.u0}, {"integral", r.integral},
                    {"u1v1", r.u1v1}, {"particular", r.particular}});
  }
  auto fit = [](const wph::elliptic::LogLogFit& f) {
    return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
  };
  o.result = {{"u0_fit", fit(fp.u0_fit)}, {"integral_fit", fit(fp.integral_fit)}, {"split_fit", fit(fp.split_fit)},
              {"rows", rows}};
  if (std::abs(fp.u0_fit.slope - 1.0) > 0.15) o.failure = "u(0) slope " + fmt(fp.u0_fit.slope) + " is not near 1";
  else if (std::abs(fp.integral_fit.slope - 2.0) > 0.15) {
    o.failure = "integral slope " + fmt(fp.integral_fit.slope) + " is not near 2";
  }
  return o;
}

Outcome arc_converge(const Json& cfg) {
  const auto phi = wph::io::qdiff_from_json(need<Json>(cfg, "qd"));
  if (!std::holds_alternative<wph::geom::CuspChart>(phi.chart())) {
    throw UsageError("arc-converge needs a cusp differential");
  }
  wph::hessian::ArcOptions opts;
  opts.lengths = need<std::vector<double>>(cfg, "lengths");
  if (opts.lengths.size() < 3) throw UsageError("--lengths needs at least three values");
  const auto arc = wph::hessian::hessian_arc(phi, opts);
  Outcome o;
  o.table.columns = {"length", "a", "b", "u_left", "u_right", "energy", "first_term"};
  Json rows = Json::array();
  for (const auto& r : arc.rows) {
    o.table.rows.push_back({r.length, r.a, r.b, r.u_left, r.u_right, r.energy, r.first_term});
    rows.push_back({{"length", r.length}, {"a", r.a}, {"b", r.b}, {"u_left", r.u_left}, {"u_right", r.u_right},
                    {"energy", r.energy}, {"first_term", r.first_term}});
  }
  o.result = {{"line_energy", arc.line_energy}, {"a_rate", arc.a_rate}, {"b_rate", arc.b_rate},
              {"cauchy_tail", arc.cauchy_tail}, {"rows", rows}};
  if (arc.cauchy_tail >= 1e-4) o.failure = "energies are not Cauchy: tail difference " + fmt(arc.cauchy_tail);
  return o;
}

Outcome thurston(const Json& cfg) {
  const auto phi = wph::io::qdiff_from_json(need<Json>(cfg, "qd"));
  if (!std::holds_alternative<wph::geom::DiskChart>(phi.chart())) {
    throw UsageError("thurston needs a disk differential");
  }
  const auto p = parse_point(need<std::string>(cfg, "p"));
  if (std::abs(p) >= 1.0) throw UsageError("--p must lie in the unit disk");
  const auto r = wph::thurston::thurston_ratio(phi, p, need<double>(cfg, "t_max"));
  Outcome o;
  o.result = {{"i1", r.i1}, {"i2", r.i2}, {"wp_density", r.wp_density}, {"ratio", r.ratio}, {"averaged", r.averaged}};
  o.table = single_row(o.result);
  if (!phi.is_zero() && std::abs(r.ratio - 4.0 / 3.0) > 1e-4) o.failure = "ratio " + fmt(r.ratio) + " is not 4/3";
  return o;
}

Outcome selftest(const Json& cfg) {
  Outcome o;
  const Json st = wph::run_selftest(need<std::uint64_t>(cfg, "seed"));
  o.result = st;
  o.table.columns = {"pass", "metric", "threshold"};
  for (const auto& c : st["checks"]) {
    if (!c["pass"].get<bool>() && o.failure.empty()) o.failure = "check failed: " + c["name"].get<std::string>();
  }
  return o;
}

std::string render(const std::string& sub, const Json& cfg, const Outcome& o) {
  Json meta = {{"tool", "wph"}, {"version", kVersion}, {"subcommand", sub}, {"config", cfg}};
  if (cfg["format"] == "json") {
    Json doc = {{"meta", meta}, {"result", o.result}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# wph " << kVersion << "\n# subcommand: " << sub << "\n# config: " << cfg.dump() << "\n";
  // Summary values ride in the comment block so the table stays rectangular.
  if (sub != "cyl-hessian" && sub != "thurston") {
    for (const auto& [key, value] : o.result.items()) {
      if (key != "rows" && key != "checks") os << "# " << key << ": " << value.dump() << "\n";
    }
  }
  if (sub == "selftest") {
    os << "name,pass,metric,threshold\n";
    for (const auto& c : o.result["checks"]) {
      os << c["name"].get<std::string>() << ',' << (c["pass"].get<bool>() ? "true" : "false") << ','
         << fmt(c["metric"].get<double>()) << ',' << fmt(c["threshold"].get<double>()) << "\n";
    }
    return os.str();
  }
  for (std::size_t i = 0; i < o.table.columns.size(); ++i) os << (i ? "," : "") << o.table.columns[i];
  os << "\n";
  for (const auto& row : o.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weil-Petersson Hessian of geodesic length on model hyperbolic surfaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* s) {
    s->add_option("--config", f.config, "JSON file overriding defaults (command line wins)");
    s->add_option("--out", f.out, "write output to this file instead of stdout");
    s->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* hess = app.add_subcommand("cyl-hessian", "Hessian of the core length for a differential on the cylinder");
  hess->add_option("--ell", f.ell, "core geodesic length");
  hess->add_option("--qd", f.qd, "differential as JSON");
  common(hess);

  auto* fam = app.add_subcommand("cyl-family", "arclength scan of the cylinder family, CSV by default");
  fam->add_option("--l0", f.l0, "smallest core length");
  fam->add_option("--l1", f.l1, "largest core length");
  fam->add_option("--steps", f.steps, "number of samples");
  common(fam);

  auto* collar = app.add_subcommand("collar-scaling", "flat-parallel collar solve and log-log slopes");
  collar->add_option("--ells", f.ells, "comma separated core lengths")->delimiter(',');
  common(collar);

  auto* arc = app.add_subcommand("arc-converge", "regularised arc Hessian as the arc length grows");
  arc->add_option("--qd", f.qd, "cusp differential as JSON");
  arc->add_option("--lengths", f.lengths, "comma separated arc lengths")->delimiter(',');
  common(arc);

  auto* th = app.add_subcommand("thurston", "flow-correlation ratio against the WP norm");
  th->add_option("--qd", f.qd, "disk differential as JSON");
  th->add_option("--p", f.p, "base point 're,im'");
  th->add_option("--t-max", f.t_max, "flow-time truncation");
  common(th);

  auto* st = app.add_subcommand("selftest", "reduced invariant suite with a pass/fail matrix");
  st->add_option("--seed", f.seed, "random seed");
  common(st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  const Json hessian_defaults = {{"ell", nullptr}, {"qd", {{"kind", "constant"}, {"c", {0.0, 1.0}}}},
                                 {"format", "json"}};
  const Json arc_lengths = std::vector<double>(wph::hessian::ArcOptions{}.lengths);

  try {
    Json cfg;
    Outcome o;
    if (sub == "cyl-hessian") {
      cfg = resolve(sub, hessian_defaults, f);
      o = cyl_hessian(cfg);
    } else if (sub == "cyl-family") {
      cfg = resolve(sub, {{"l0", 0.25}, {"l1", 4.0}, {"steps", 64}, {"format", "csv"}}, f);
      o = cyl_family(cfg);
    } else if (sub == "collar-scaling") {
      cfg = resolve(sub, {{"ells", {0.4, 0.2, 0.1, 0.05, 0.025}}, {"format", "json"}}, f);
      o = collar_scaling(cfg);
    } else if (sub == "arc-converge") {
      cfg = resolve(sub, {{"qd", {{"kind", "cusp"}, {"c", {1.0, 0.0}}}}, {"lengths", arc_lengths}, {"format", "json"}},
                    f);
      o = arc_converge(cfg);
    } else if (sub == "thurston") {
      cfg = resolve(sub, {{"qd", {{"kind", "poly"}, {"coeffs", {{1.0, 0.0}}}}}, {"p", "0,0"}, {"t_max", 40.0},
                          {"format", "json"}}, f);
      o = thurston(cfg);
    } else {
      cfg = resolve(sub, {{"seed", 7}, {"format", "json"}}, f);
      o = selftest(cfg);
    }
    const std::string text = render(sub, cfg, o);
    if (cfg.contains("out")) {
      std::ofstream out(cfg["out"].get<std::string>(), std::ios::binary);
      if (!out) throw UsageError("cannot write '" + cfg["out"].get<std::string>() + "'");
      out << text;
    } else {
      std::cout << text;
    }
    if (!o.failure.empty()) {
      std::cerr << "wph " << sub << ": invariant failure: " << o.failure << "\n";
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "wph " << sub << ": " << e.what() << "\n";
    return 2;
  } catch (const wph::InputError& e) {
    std::cerr << "wph " << sub << ": " << e.what() << "\n";
    return 2;
  } catch (const wph::ResolutionError& e) {
    std::cerr << "wph " << sub << ": " << e.what() << "\n";
    return 2;
  } catch (const wph::FitError& e) {
    std::cerr << "wph " << sub << ": " << e.what() << "\n";
    return 2;
  } catch (const wph::Error& e) {
    std::cerr << "wph " << sub << ": " << e.what() << "\n";
    return 1;
  }
}
