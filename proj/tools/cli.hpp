#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "soliton/geometry.hpp"
#include "soliton/io.hpp"
#include "soliton/ode_core.hpp"
#include "soliton/taxonomy.hpp"
#include "soliton/variational.hpp"
#include "soliton/verify.hpp"

namespace soliton::cli {

enum class LogLevel { Quiet, Info, Debug };

inline LogLevel log_level_from_env() {
  const char* v = std::getenv("SOLITON_LOG");
  if (v == nullptr) return LogLevel::Quiet;
  const std::string s(v);
  if (s == "debug") return LogLevel::Debug;
  if (s == "info") return LogLevel::Info;
  return LogLevel::Quiet;
}

struct RunConfig {
  std::string subcommand;
  std::optional<double> lambda, mu, a0;
  double t0 = 0.0;
  std::optional<std::string> family;
  std::optional<double> nu;
  std::vector<double> window;   // t-window (integrate) or r-window (energy)
  std::vector<double> r_range;  // metric samples
  std::vector<double> anchor;   // (r0, b0)
  int samples = 0;
  double tol = 1e-12;
  double eps = 1e-4;
  double phi = 0.0;
  double psi = 1.0;
  double h = 1e-3;
  bool list = false;
  std::string format = "json";
  std::string out;
};

namespace detail {

struct Context {
  const RunConfig& cfg;
  std::ostream& err;
  LogLevel level;

  void info(const std::string& msg) const {
    if (level != LogLevel::Quiet) err << "[info] " << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (level == LogLevel::Debug) err << "[debug] " << msg << '\n';
  }
};

/// A usage error discovered after parsing (missing combination of flags).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline SolitonParams params_from(const RunConfig& c) {
  if (!c.lambda || !c.mu) throw UsageError("--lambda and --mu are required");
  return make_params(*c.lambda, *c.mu);
}

/// Profile through (t0, a0), or the catalog entry for --family/--nu.
inline ProfileA profile_from(const RunConfig& c) {
  if (c.family) {
    if (!c.nu) throw UsageError("--family needs --nu");
    const auto f = parse_family(*c.family);
    if (!f) throw UsageError("unknown family '" + *c.family + "'");
    return catalog(*f, *c.nu).profile;
  }
  const auto p = params_from(c);
  if (!c.a0) throw UsageError("--a0 is required");
  std::pair<double, double> w{-kInf, kInf};
  if (!c.window.empty()) w = {c.window[0], c.window[1]};
  return integrate_profile(p, c.t0, *c.a0, w, c.tol);
}

inline WarpedMetric metric_from(const Context& ctx, const ProfileA& prof) {
  const auto& c = ctx.cfg;
  auto w = default_window(prof);
  if (!c.anchor.empty()) w.anchor = {c.anchor[0], c.anchor[1]};
  if (!c.r_range.empty()) w.r_range = {c.r_range[0], c.r_range[1]};
  std::size_t n = 0;
  if (c.samples > 0) {
    n = static_cast<std::size_t>(c.samples);
  } else {
    n = static_cast<std::size_t>(std::llround((w.r_range.second - w.r_range.first) / c.h)) + 1;
  }
  ctx.debug("metric anchor (" + io::json(w.anchor.first).dump() + ", " +
            io::json(w.anchor.second).dump() + "), r in [" + io::json(w.r_range.first).dump() +
            ", " + io::json(w.r_range.second).dump() + "], n = " + std::to_string(n));
  return build_warped_metric(prof, w.anchor, w.r_range, n);
}

inline void emit_json(std::ostream& os, const io::json& j) { os << j.dump(2) << '\n'; }

/// key,value rows for flat reports in CSV mode.
inline void emit_flat_csv(std::ostream& os, const io::json& j, const std::string& prefix = "") {
  if (prefix.empty()) os << "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      emit_flat_csv(os, *it, key);
    } else if (it->is_number_float()) {
      os << key << ',' << soliton::detail::fmt17(it->get<double>()) << '\n';
    } else if (it->is_string()) {
      os << key << ',' << it->get<std::string>() << '\n';
    } else if (it->is_array()) {
      os << key << ",\"" << it->dump() << "\"\n";
    } else {
      os << key << ',' << it->dump() << '\n';
    }
  }
}

inline void emit(const RunConfig& c, std::ostream& os, const io::json& j) {
  if (c.format == "csv") {
    emit_flat_csv(os, j);
  } else {
    emit_json(os, j);
  }
}

inline void cmd_integrate(const Context& ctx, std::ostream& os) {
  const auto& c = ctx.cfg;
  const auto p = params_from(c);
  if (!c.a0) throw UsageError("--a0 is required");
  std::pair<double, double> w{-kInf, kInf};
  if (!c.window.empty()) w = {c.window[0], c.window[1]};
  const auto prof = integrate_profile(p, c.t0, *c.a0, w, c.tol);
  ctx.info("profile on (" + io::number(prof.lower().t).dump() + ", " +
           io::number(prof.upper().t).dump() + ")");
  auto [lo, hi] = prof.numeric_range();
  lo = std::max(lo, w.first);
  hi = std::min(hi, w.second);
  const int n = c.samples > 0 ? c.samples : 201;
  if (c.format == "csv") {
    write_profile_csv(os, prof, lo, hi, n);
    return;
  }
  auto j = io::to_json(prof);
  io::json t = io::json::array(), a = io::json::array();
  for (int i = 0; i < n; ++i) {
    const double ti = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    t.push_back(ti);
    a.push_back(io::number(prof(ti)));
  }
  j["samples"] = {{"t", t}, {"a", a}};
  emit_json(os, j);
}

inline void cmd_classify(const Context& ctx, std::ostream& os) {
  const auto prof = profile_from(ctx.cfg);
  const auto label = classify(prof);
  ctx.info("classified as " + to_string(label.tag));
  emit(ctx.cfg, os, io::to_json(label));
}

inline void cmd_metric(const Context& ctx, std::ostream& os) {
  const auto prof = profile_from(ctx.cfg);
  const auto m = metric_from(ctx, prof);
  if (ctx.cfg.format == "csv") {
    write_metric_csv(os, m);
    return;
  }
  io::json r = io::json::array(), b = io::json::array(), db = io::json::array(),
           K = io::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    r.push_back(io::number(m.r[i]));
    b.push_back(io::number(m.b[i]));
    db.push_back(io::number(m.b_prime[i]));
    K.push_back(io::number(m.K[i]));
  }
  emit_json(os, {{"params", io::to_json(m.params)}, {"r", r}, {"b", b}, {"db_dr", db}, {"K", K}});
}

inline void cmd_report(const Context& ctx, std::ostream& os) {
  const auto prof = profile_from(ctx.cfg);
  emit(ctx.cfg, os, io::to_json(geometry_report(prof)));
}

inline void cmd_verify(const Context& ctx, std::ostream& os) {
  const auto prof = profile_from(ctx.cfg);
  const auto m = metric_from(ctx, prof);
  emit(ctx.cfg, os, io::to_json(soliton_residual(m)));
}

inline void cmd_energy(const Context& ctx, std::ostream& os) {
  const auto& c = ctx.cfg;
  const auto prof = profile_from(c);
  RunConfig metric_cfg = c;
  metric_cfg.window.clear();
  const auto m = metric_from({metric_cfg, ctx.err, ctx.level}, prof);
  std::pair<double, double> w;
  if (!c.window.empty()) {
    w = {c.window[0], c.window[1]};
  } else {
    // the middle of the metric grid, off the axis
    const double lo = m.r.front(), hi = m.r.back();
    w = {lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo)};
  }
  const auto v = bump_variation(m, w, c.phi, c.psi);
  const auto rep = variation_report(m, v, {c.eps, c.eps / 2, c.eps / 4});
  auto j = io::to_json(rep);
  j["energy"] = io::number(energy(m, w));
  j["total_curvature"] = io::number(total_curvature(m, w));
  j["window"] = {w.first, w.second};
  emit(c, os, j);
}

inline void cmd_catalog(const Context& ctx, std::ostream& os) {
  const auto& c = ctx.cfg;
  if (c.list || !c.family) {
    const auto table = io::family_table();
    if (c.format != "csv") {
      emit_json(os, table);
      return;
    }
    os << "family,topology,curvature_sign,complete,inner_end,outer_end,nu_lo,nu_hi\n";
    for (const auto& row : table) {
      const auto& nu = row["nu_range"];
      auto cell = [](const io::json& v) {
        return v.is_number_float() ? soliton::detail::fmt17(v.get<double>())
                                   : v.is_string() ? v.get<std::string>() : v.dump();
      };
      os << cell(row["family"]) << ',' << cell(row["topology"]) << ','
         << cell(row["curvature_sign"]) << ',' << cell(row["complete"]) << ','
         << cell(row["inner_end"]) << ',' << cell(row["outer_end"]) << ',' << cell(nu["lo"])
         << ',' << cell(nu["hi"]) << '\n';
    }
    return;
  }
  if (!c.nu) throw UsageError("--family needs --nu");
  const auto f = parse_family(*c.family);
  if (!f) throw UsageError("unknown family '" + *c.family + "'");
  emit(c, os, io::to_json(catalog(*f, *c.nu)));
}

}  // namespace detail

namespace detail {

// Splice "key = value" lines from --config FILE into argv as "--key value" ahead of the
// command-line flags; a key given on the command line is not taken from the file.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  std::size_t at = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      at = i;
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      at = i;
      args.erase(args.begin() + i);
      break;
    }
  }
  if (at == args.size() && path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  auto trim = [](std::string v) {
    const auto b = v.find_first_not_of(" \t\r");
    const auto e = v.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
  };
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> spliced;
  std::string line;
  while (std::getline(f, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    std::istringstream values(trim(line.substr(eq + 1)));
    spliced.push_back(flag);
    for (std::string v; values >> v;) spliced.push_back(v);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), spliced.begin(), spliced.end());
  return args;
}

}  // namespace detail

/// Parse argv and run one subcommand. Exit status: 0 success, 1 usage or input
/// error, 2 numerical failure.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Two-dimensional gradient Ricci solitons: ODE profiles, metrics, geometry"};
  app.name("soliton");
  app.require_subcommand(1, 1);

  auto finite = CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          std::size_t pos = 0;
          const double v = std::stod(s, &pos);
          if (pos != s.size() || !std::isfinite(v)) return "not a finite real: " + s;
        } catch (const std::exception&) {
          return "not a finite real: " + s;
        }
        return {};
      },
      "REAL");

  auto add_params = [&](CLI::App* sub, bool anchor) {
    sub->add_option("--lambda", cfg.lambda, "lambda in a' = 2 lambda a^3 - 4 mu a^2")->check(finite);
    sub->add_option("--mu", cfg.mu, "mu (nonzero)")->check(finite);
    if (anchor) {
      sub->add_option("--a0", cfg.a0, "a at the anchor time")->check(finite);
      sub->add_option("--t0", cfg.t0, "anchor time")->check(finite);
      sub->add_option("--tol", cfg.tol, "integration tolerance")->check(CLI::PositiveNumber);
    }
  };
  auto add_family = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "catalog family tag (g1 .. g12, g4+, g4-)");
    sub->add_option("--nu", cfg.nu, "family parameter")->check(finite);
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--config", "file of key = value lines; flags override it");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "write output to this file instead of stdout");
  };
  auto add_metric = [&](CLI::App* sub) {
    sub->add_option("--r-range", cfg.r_range, "metric r-window")->expected(2)->check(finite);
    sub->add_option("--anchor", cfg.anchor, "anchor circle (r0, b0)")->expected(2)->check(finite);
    sub->add_option("--samples", cfg.samples, "number of samples")->check(CLI::PositiveNumber);
    sub->add_option("--spacing", cfg.h, "grid spacing when --samples is absent")
        ->check(CLI::PositiveNumber);
  };

  auto* integrate = app.add_subcommand("integrate", "integrate a profile, emit (t, a, a')");
  add_params(integrate, true);
  integrate->add_option("--window", cfg.window, "t-window")->expected(2)->check(finite);
  integrate->add_option("--samples", cfg.samples, "output samples")->check(CLI::PositiveNumber);
  add_format(integrate);

  std::vector<CLI::App*> profile_cmds;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"classify", "family of the solution through (t0, a0)"},
           {"metric", "warped metric samples (r, b, b', K)"},
           {"report", "geometry report: completeness, curvature, ends"},
           {"verify", "soliton residuals on a metric window"},
           {"energy", "E = int K log|K|, its first variation and the Noether defect"}}) {
    auto* sub = app.add_subcommand(name, help);
    add_params(sub, true);
    add_family(sub);
    add_format(sub);
    if (name != "classify" && name != "report") add_metric(sub);
    profile_cmds.push_back(sub);
  }
  auto* energy_cmd = profile_cmds.back();
  energy_cmd->add_option("--window", cfg.window, "r-window of the variation")
      ->expected(2)
      ->check(finite);
  energy_cmd->add_option("--eps", cfg.eps, "largest finite-difference step")
      ->check(CLI::PositiveNumber);
  energy_cmd->add_option("--phi", cfg.phi, "conformal amplitude of the bump")->check(finite);
  energy_cmd->add_option("--psi", cfg.psi, "trace-free amplitude of the bump")->check(finite);

  auto* cat = app.add_subcommand("catalog", "family table or one catalog entry");
  add_family(cat);
  add_format(cat);
  cat->add_flag("--list", cfg.list, "emit the family table");

  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  try {
    args = detail::expand_config(std::move(args));
  } catch (const detail::UsageError& e) {
    err << "soliton: " << e.what() << '\n';
    return 1;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  const detail::Context ctx{cfg, err, log_level_from_env()};
  std::ostringstream buf;
  try {
    if (cfg.subcommand == "integrate") detail::cmd_integrate(ctx, buf);
    else if (cfg.subcommand == "classify") detail::cmd_classify(ctx, buf);
    else if (cfg.subcommand == "metric") detail::cmd_metric(ctx, buf);
    else if (cfg.subcommand == "report") detail::cmd_report(ctx, buf);
    else if (cfg.subcommand == "verify") detail::cmd_verify(ctx, buf);
    else if (cfg.subcommand == "energy") detail::cmd_energy(ctx, buf);
    else detail::cmd_catalog(ctx, buf);
  } catch (const detail::UsageError& e) {
    err << "soliton " << cfg.subcommand << ": " << e.what() << "\n\n"
        << app.get_subcommand(cfg.subcommand)->help();
    return 1;
  } catch (const Error& e) {
    err << "soliton " << cfg.subcommand << ": " << e.what() << '\n';
    return is_numerical_failure(e.code()) ? 2 : 1;
  }

  if (cfg.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "soliton " << cfg.subcommand << ": cannot open " << cfg.out << '\n';
      return 1;
    }
    f << buf.str();
  }
  return 0;
}

}  // namespace soliton::cli
