#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "riesz/experiments.hpp"
#include "riesz/perron.hpp"
#include "riesz/report_io.hpp"

namespace riesz::cli {

// ---- value parsing ---------------------------------------------------------

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& text) {
  std::string s = trim(text);
  if (s.size() > 1 && s.front() == '+') s.erase(0, 1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw DomainError("not a number: '" + text + "'");
  return v;
}

inline std::uint64_t parse_u64(const std::string& text) {
  std::string s = trim(text);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw DomainError("not a non-negative integer: '" + text + "'");
  return v;
}

/// Accepts "a", "bi", "a+bi", "a-bi" (also "i", "-i").
inline cplx parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw DomainError("empty complex number");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {parse_real(body.substr(0, split)), imag_part(body.substr(split))};
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

inline std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> v;
  for (const auto& p : split_list(text)) v.push_back(parse_real(p));
  return v;
}

inline std::vector<cplx> parse_complexes(const std::string& text) {
  std::vector<cplx> v;
  for (const auto& p : split_list(text)) v.push_back(parse_complex(p));
  return v;
}

struct Grid {
  double lo = 0.0, hi = 0.0;
  std::size_t n = 0;
};

/// "a:b:n", n equally spaced points with both ends included.
inline Grid parse_grid(const std::string& text) {
  auto first = text.find(':');
  auto second = text.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw DomainError("grid must look like a:b:n, got '" + text + "'");
  Grid g{parse_real(text.substr(0, first)), parse_real(text.substr(first + 1, second - first - 1)),
         static_cast<std::size_t>(parse_u64(text.substr(second + 1)))};
  if (g.n < 2) throw DomainError("grid needs at least two points");
  return g;
}

/// Flat key/value config: one `key = value` (or `key: value`) per line,
/// '#' starts a comment. Keys are option names without the leading dashes;
/// underscores and dashes are interchangeable.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find_first_of("=:");
    if (eq == std::string::npos) throw DomainError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    kv.emplace_back(key, value);
  }
  return kv;
}

// Config keys named after ExperimentConfig fields map onto option names.
inline std::string option_for_key(const std::string& key) {
  static const std::map<std::string, std::string> alias = {
      {"xs", "x"}, {"output", "out"}, {"tau-grid", "tau"}, {"target-name", "target"}};
  auto it = alias.find(key);
  return "--" + (it == alias.end() ? key : it->second);
}

/// Splices config-file values in front of the command-line arguments of the
/// subcommand, so explicit flags (parsed later, last one wins) override them.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw DomainError("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty() || rest.empty()) return rest;
  std::vector<std::string> out{rest.front()};
  for (const auto& [key, value] : read_config(path)) {
    out.push_back(option_for_key(key));
    if (value != "true") out.push_back(value);
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

// ---- subcommands -----------------------------------------------------------

struct Common {
  std::string out;
  std::string json;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  int max_doublings = 0;

  QuadratureSpec quad(double rel, double abs) const {
    QuadratureSpec q;
    q.rel_tol = rel_tol > 0.0 ? rel_tol : rel;
    q.abs_tol = abs_tol > 0.0 ? abs_tol : abs;
    if (max_doublings > 0) q.max_window_doublings = max_doublings;
    q.validate();
    return q;
  }
};

struct TargetOptions {
  std::string name = "const1";
  std::string coeffs;
  std::string freqs;
  std::string ell;

  AnalyticTarget make() const {
    AnalyticTarget t;
    if (!coeffs.empty()) {
      auto c = parse_complexes(coeffs);
      auto f = parse_reals(freqs);
      if (c.size() != f.size()) throw DomainError("--coeffs and --freqs must have the same length");
      t = targets::polynomial(c, f, "inline");
    } else {
      if (!freqs.empty()) throw DomainError("--freqs given without --coeffs");
      t = targets::by_name(name);
    }
    if (!ell.empty()) t.order_ell = parse_real(ell);
    return t;
  }
};

inline void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "CSV report path");
  sub->add_option("--json", c.json, "JSON envelope path");
  sub->add_option("--rel-tol", c.rel_tol, "Quadrature relative tolerance");
  sub->add_option("--abs-tol", c.abs_tol, "Quadrature absolute tolerance");
  sub->add_option("--max-doublings", c.max_doublings, "Maximum window doublings");
}

inline void add_target(CLI::App* sub, TargetOptions& t, const std::string& name_flag = "--target") {
  sub->add_option(name_flag, t.name, "Built-in target: const1, zeta-line, eta, taylor-l2");
  sub->add_option("--coeffs", t.coeffs, "Inline polynomial coefficients, comma separated");
  sub->add_option("--freqs", t.freqs, "Inline polynomial frequencies, comma separated");
  sub->add_option("--ell", t.ell, "Growth order override");
}

inline void emit(const Common& c, const std::string& csv, const nlohmann::json& config, const nlohmann::json& records,
                 const nlohmann::json& summary) {
  if (!c.out.empty()) io::write_atomic(c.out, csv);
  if (!c.json.empty()) io::write_atomic(c.json, io::json_envelope(config, records, summary));
}

inline nlohmann::json quad_json(const QuadratureSpec& q) {
  return {{"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol}, {"max_window_doublings", q.max_window_doublings}};
}

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

/// Parses argv and runs one subcommand. Exit codes: 0 success, 2 bad input
/// or configuration, 3 numerical failure.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Riesz means of Dirichlet series and their boundary behaviour", "riesz"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value file; flags override its values");

  Common common;
  TargetOptions target;
  double k = 1.0, x = 1.0, c = 0.0, delta = 0.5, tau = 0.0, rough = 0.0;
  std::string s_text = "0", x_list, tau_text, schedule_text = "100,1000,10000,100000", rule = "harmonic";
  std::size_t samples = 200, max_terms = kDefaultMaxTerms;
  std::uint64_t seed = 0;

  auto* mean = app.add_subcommand("riesz-mean", "Riesz mean of a series at one point");
  add_target(mean, target, "--series");
  mean->add_option("--k", k, "Riesz order")->required();
  mean->add_option("--x", x, "Cutoff")->required();
  mean->add_option("--s", s_text, "Point, e.g. 0.5+2i");
  mean->add_option("--max-terms", max_terms, "Term budget");

  auto* perron = app.add_subcommand("perron-check", "Riesz mean at i tau by direct sum and by the integral routes");
  add_target(perron, target);
  add_common(perron, common);
  perron->add_option("--k", k, "Riesz order")->required();
  perron->add_option("--x", x, "Cutoff")->required();
  perron->add_option("--tau", tau, "Boundary point");
  perron->add_option("--c", c, "Abscissa of the vertical line (default 1/x)");

  auto* kernel = app.add_subcommand("kernel-check", "Fourier normalisation of the Riesz kernel");
  add_common(kernel, common);
  kernel->add_option("--k", k, "Kernel order")->required();

  auto* tail = app.add_subcommand("tail-mass", "Kernel mass outside [-delta, delta]");
  add_common(tail, common);
  double ell_value = 0.0;
  tail->add_option("--k", k, "Riesz order")->required();
  tail->add_option("--ell", ell_value, "Growth order");
  tail->add_option("--delta", delta, "Half width of the excluded window");
  tail->add_option("--x", x_list, "Cutoffs, comma separated")->required();

  auto* sweep = app.add_subcommand("boundary-sweep", "Riesz means against the boundary function on a tau grid");
  add_target(sweep, target);
  add_common(sweep, common);
  sweep->add_option("--k", k, "Riesz order")->required();
  sweep->add_option("--tau", tau_text, "Grid a:b:n")->required();
  sweep->add_option("--x", x_list, "Cutoffs, comma separated")->required();
  sweep->add_option("--max-terms", max_terms, "Term budget per mean");

  auto* dini = app.add_subcommand("dini", "Dini integral and Riesz-mean errors at one boundary point");
  add_target(dini, target);
  add_common(dini, common);
  dini->add_option("--k", k, "Riesz order")->required();
  dini->add_option("--tau", tau, "Boundary point");
  dini->add_option("--delta", delta, "Half width of the integration window");
  dini->add_option("--x", x_list, "Cutoffs, comma separated")->required();
  dini->add_option("--rough", rough, "Replace the boundary function by f*(i tau) + |t - tau|^rough");

  auto* loc = app.add_subcommand("localize", "Tail of the boundary integral outside [-delta, delta]");
  add_target(loc, target);
  add_common(loc, common);
  loc->add_option("--k", k, "Riesz order")->required();
  loc->add_option("--delta", delta, "Half width of the excluded window");
  loc->add_option("--x", x_list, "Cutoffs, comma separated")->required();

  auto* mc = app.add_subcommand("vertical-mc", "Tail oscillation of vertical limits under random characters");
  add_common(mc, common);
  mc->add_option("--coeffs-rule", rule, "harmonic (1/n), square (1/n^2) or zero")
      ->check(CLI::IsMember({"harmonic", "square", "zero"}));
  mc->add_option("--tau", tau_text, "Vertical shifts, comma separated");
  mc->add_option("--schedule", schedule_text, "Increasing N values, comma separated");
  mc->add_option("--samples", samples, "Number of sampled characters");
  mc->add_option("--seed", seed, "Random seed");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*mean) {
      AnalyticTarget t = target.make();
      out << io::fmt(riesz_mean(t.series, k, x, parse_complex(s_text), max_terms)) << "\n";
      return 0;
    }

    if (*perron) {
      AnalyticTarget t = target.make();
      QuadratureSpec q = common.quad(1e-7, 1e-8);
      const double line_c = c > 0.0 ? c : 1.0 / x;
      cplx direct = riesz_mean(t.series, k, x, {0.0, tau});
      Estimate line = perron_line(t, k, x, {0.0, tau}, line_c, q);
      Estimate bnd = perron_boundary(t, k, x, tau, q);
      std::vector<std::pair<std::string, Estimate>> routes = {
          {"direct", {direct, 0.0}}, {"perron_line", line}, {"perron_boundary", bnd}};
      if (tau == 0.0) routes.emplace_back("rasmus_integral", rasmus_integral(t, k, x, q));
      double worst = 0.0;
      io::CsvWriter csv({"route", "re", "im", "err", "abs_diff_direct"});
      nlohmann::json records = nlohmann::json::array();
      for (const auto& [name, e] : routes) {
        double d = std::abs(e.value - direct);
        worst = std::max(worst, d);
        csv.row({name, io::fmt(e.value.real()), io::fmt(e.value.imag()), io::fmt(e.err), io::fmt(d)});
        records.push_back({{"route", name}, {"re", e.value.real()}, {"im", e.value.imag()}, {"err", e.err},
                           {"abs_diff_direct", d}});
      }
      out << "perron-check target=" << t.series.name << " k=" << io::fmt(k) << " x=" << io::fmt(x)
          << " tau=" << io::fmt(tau) << " direct=" << io::fmt(direct) << " max_route_diff=" << io::fmt(worst) << "\n";
      emit(common, csv.str(),
           {{"target", t.series.name}, {"k", k}, {"x", x}, {"tau", tau}, {"c", line_c}, {"quadrature", quad_json(q)}},
           records, {{"max_route_diff", worst}});
      return 0;
    }

    if (*kernel) {
      QuadratureSpec q = common.quad(1e-10, 1e-12);
      FourierCheck r = kernel_fourier_check(k, q);
      io::CsvWriter csv({"k", "re", "im", "err", "deviation"});
      csv.row({io::fmt(k), io::fmt(r.value.real()), io::fmt(r.value.imag()), io::fmt(r.err), io::fmt(r.deviation)});
      out << "kernel-check k=" << io::fmt(k) << " |int e^{iy}K(y)dy - 1| = " << io::fmt(r.deviation)
          << " (quad_err " << io::fmt(r.err) << ")\n";
      emit(common, csv.str(), {{"k", k}, {"quadrature", quad_json(q)}},
           nlohmann::json::array({{{"re", r.value.real()}, {"im", r.value.imag()}, {"err", r.err}}}),
           {{"deviation", r.deviation}});
      return 0;
    }

    if (*tail) {
      QuadratureSpec q = common.quad(1e-6, 1e-9);
      auto xs = parse_reals(x_list);
      TailMassReport r = kernel_tail_mass(k, ell_value, delta, xs, q);
      io::CsvWriter csv({"x", "mass", "err", "reference_bound"});
      nlohmann::json records = nlohmann::json::array();
      for (const auto& row : r.rows) {
        csv.row({io::fmt(row.x), io::fmt(row.mass), io::fmt(row.err), io::fmt(row.reference_bound)});
        records.push_back({{"x", row.x}, {"mass", row.mass}, {"err", row.err}, {"reference_bound", row.reference_bound}});
      }
      out << "tail-mass k=" << io::fmt(k) << " ell=" << io::fmt(ell_value) << " delta=" << io::fmt(delta)
          << " last_mass=" << io::fmt(r.rows.empty() ? 0.0 : r.rows.back().mass)
          << " strictly_decreasing=" << yes_no(r.strictly_decreasing) << "\n";
      emit(common, csv.str(),
           {{"k", k}, {"ell", ell_value}, {"delta", delta}, {"xs", xs}, {"quadrature", quad_json(q)}}, records,
           {{"strictly_decreasing", r.strictly_decreasing}});
      return 0;
    }

    if (*sweep) {
      ExperimentConfig cfg;
      cfg.target = target.name;
      if (!target.coeffs.empty()) {
        cfg.coeffs = parse_complexes(target.coeffs);
        cfg.freqs = parse_reals(target.freqs);
      }
      if (!target.ell.empty()) cfg.ell = parse_real(target.ell);
      cfg.k = k;
      Grid g = parse_grid(tau_text);
      cfg.interval_lo = g.lo;
      cfg.interval_hi = g.hi;
      cfg.tau_grid_size = g.n;
      cfg.xs = parse_reals(x_list);
      cfg.output = common.out;
      ConvergenceReport r = boundary_sweep(cfg, max_terms);
      const double last = r.sup_error_per_x.empty() ? 0.0 : r.sup_error_per_x.back().second;
      out << "boundary-sweep target=" << r.notes["target"] << " k=" << io::fmt(k) << " points=" << g.n
          << " sup_err_last_x=" << io::fmt(last) << " decreasing=" << r.notes["decreasing"] << "\n";
      nlohmann::json sups = nlohmann::json::array();
      for (const auto& [xv, e] : r.sup_error_per_x) sups.push_back({{"x", xv}, {"sup_err", e}});
      emit(common, io::sweep_csv(r),
           {{"target", r.notes["target"]}, {"k", k}, {"tau", tau_text}, {"xs", cfg.xs}},
           io::sweep_records_json(r), {{"sup_error_per_x", sups}, {"notes", r.notes}});
      return 0;
    }

    if (*dini) {
      AnalyticTarget t = target.make();
      if (rough > 0.0) t = targets::with_rough_boundary(t, tau, rough);
      QuadratureSpec q = common.quad(1e-8, 1e-10);
      auto xs = parse_reals(x_list);
      DiniReport r = dini_check(t, tau, delta, k, t.order_ell, xs, q);
      io::CsvWriter csv({"x", "abs_err"});
      nlohmann::json records = nlohmann::json::array();
      for (const auto& [xv, e] : r.riesz_errors) {
        csv.row({io::fmt(xv), io::fmt(e)});
        records.push_back({{"x", xv}, {"abs_err", e}});
      }
      out << "dini target=" << t.series.name << " tau=" << io::fmt(tau) << " k=" << io::fmt(k)
          << " ell=" << io::fmt(t.order_ell);
      if (r.divergent)
        out << " integral=divergent";
      else
        out << " integral=" << io::fmt(r.integral) << " (err " << io::fmt(r.err) << ")";
      out << " errors_decreasing=" << yes_no(r.errors_decreasing) << "\n";
      emit(common, csv.str(),
           {{"target", t.series.name}, {"tau", tau}, {"delta", delta}, {"k", k}, {"ell", t.order_ell}, {"xs", xs},
            {"quadrature", quad_json(q)}},
           records,
           {{"integral", r.integral}, {"err", r.err}, {"divergent", r.divergent}, {"levels", r.levels},
            {"errors_decreasing", r.errors_decreasing}});
      return 0;
    }

    if (*loc) {
      AnalyticTarget t = target.make();
      QuadratureSpec q = common.quad(1e-3, 1e-6);
      auto xs = parse_reals(x_list);
      LocalizationReport r = localization_tail(t, k, t.order_ell, delta, xs, q);
      io::CsvWriter csv({"x", "re", "im", "abs", "err"});
      nlohmann::json records = nlohmann::json::array();
      for (const auto& row : r.rows) {
        csv.row({io::fmt(row.x), io::fmt(row.tail.real()), io::fmt(row.tail.imag()), io::fmt(row.magnitude),
                 io::fmt(row.err)});
        records.push_back({{"x", row.x}, {"re", row.tail.real()}, {"im", row.tail.imag()}, {"abs", row.magnitude},
                           {"err", row.err}});
      }
      out << "localize target=" << t.series.name << " k=" << io::fmt(k) << " delta=" << io::fmt(delta)
          << " last_abs=" << io::fmt(r.rows.empty() ? 0.0 : r.rows.back().magnitude)
          << " decreasing=" << yes_no(r.decreasing) << "\n";
      emit(common, csv.str(),
           {{"target", t.series.name}, {"k", k}, {"ell", t.order_ell}, {"delta", delta}, {"xs", xs},
            {"quadrature", quad_json(q)}},
           records, {{"decreasing", r.decreasing}});
      return 0;
    }

    if (*mc) {
      CoeffFn coeffs;
      if (rule == "harmonic")
        coeffs = [](std::size_t n) { return cplx{1.0 / static_cast<double>(n), 0.0}; };
      else if (rule == "square")
        coeffs = [](std::size_t n) { return cplx{1.0 / (static_cast<double>(n) * static_cast<double>(n)), 0.0}; };
      else
        coeffs = [](std::size_t) { return cplx{}; };
      auto taus = tau_text.empty() ? std::vector<double>{0.0, 1.0} : parse_reals(tau_text);
      std::vector<std::size_t> schedule;
      for (const auto& p : split_list(schedule_text)) schedule.push_back(static_cast<std::size_t>(parse_u64(p)));
      VerticalMcReport r = vertical_limit_mc(coeffs, taus, schedule, samples, seed);
      io::CsvWriter csv({"tau", "M", "q10", "median", "q90", "trivial_re", "trivial_im"});
      nlohmann::json records = nlohmann::json::array();
      for (std::size_t t = 0; t < taus.size(); ++t) {
        for (std::size_t m = 0; m < r.quantiles[t].size(); ++m) {
          const auto& qm = r.quantiles[t][m];
          const cplx s = r.trivial_sums[t][m];
          csv.row({io::fmt(taus[t]), std::to_string(schedule[m]), io::fmt(qm.q10), io::fmt(qm.median),
                   io::fmt(qm.q90), io::fmt(s.real()), io::fmt(s.imag())});
          records.push_back({{"tau", taus[t]}, {"M", schedule[m]}, {"q10", qm.q10}, {"median", qm.median},
                             {"q90", qm.q90}, {"trivial_re", s.real()}, {"trivial_im", s.imag()}});
        }
      }
      out << "vertical-mc rule=" << rule << " samples=" << samples << " seed=" << seed
          << " fraction_decreasing=" << io::fmt(r.fraction_decreasing)
          << " fraction_last_below_first=" << io::fmt(r.fraction_last_below_first) << "\n";
      std::vector<bool> divergent(r.trivial_divergent.begin(), r.trivial_divergent.end());
      emit(common, csv.str(),
           {{"coeffs_rule", rule}, {"taus", taus}, {"schedule", schedule}, {"samples", samples}, {"seed", seed}},
           records,
           {{"fraction_decreasing", r.fraction_decreasing},
            {"fraction_last_below_first", r.fraction_last_below_first},
            {"trivial_divergent", divergent},
            {"notes", r.notes}});
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace riesz::cli
