#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "rsbounds/error.hpp"
#include "rsbounds/numeric.hpp"
#include "rsbounds/surrogate.hpp"

namespace rsbounds::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Model in the variables the quadrature rules integrate over.
Model effective_model(const ExperimentConfig& cfg) {
  Model base(cfg.model, cfg.output);
  if (!cfg.transform) return base;
  auto state = [base](double z, double z2) { return base.state(z + z2, z2); };
  return Model(AnalyticModel{state, base.name() + " with z1 = z + z2"}, cfg.output);
}

std::array<PolynomialFamily, 2> families_of(const ExperimentConfig& cfg) {
  return {basis_for(cfg.aleatoric_rule_law()), basis_for(cfg.epistemic)};
}

SurrogateTarget target_of(const ExperimentConfig& cfg) {
  return cfg.surrogate.target.value_or(default_target(cfg.output));
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError(path + ": cannot open for writing");
  return os;
}

std::vector<RiskForm> forms_from(const std::string& which) {
  if (which == "all") return {RiskForm::Standard, RiskForm::Hybrid1, RiskForm::Hybrid2};
  if (which == "0") return {RiskForm::Standard};
  if (which == "1") return {RiskForm::Hybrid1};
  if (which == "2") return {RiskForm::Hybrid2};
  throw ConfigError("--which must be one of 0, 1, 2, all");
}

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::string which = "all";
  GridOverrides grid;
  std::uint64_t seed = 0;
  SurrogateFiles surrogate;
  std::string p;
  std::string q;
};

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = load_config(opt.config);
  const auto forms = forms_from(opt.which);
  const RiskConfig rc = build_risk_config(cfg, build_risk_function(cfg, opt.surrogate), resolve_c_grid(cfg, opt.grid));
  const double B = resolve_B(cfg).value_or(0.0);
  const RiskCurve curve = sweep(rc, B);

  const auto path = opt.out ? opt.out : cfg.outputs.csv;
  if (path) {
    auto os = open_output(*path);
    write_csv(os, curve, provenance_comment(cfg));
  } else {
    write_csv(out, curve, provenance_comment(cfg));
  }

  std::ostream& summary = path ? out : err;
  summary << "rows=" << curve.rows.size() << " B=" << fmt(B) << " E[F]=" << fmt(expectation(rc)) << '\n';
  for (RiskForm f : forms) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : curve.rows) {
      const double v = f == RiskForm::Standard ? r.lambda : f == RiskForm::Hybrid1 ? r.lambda1 : r.lambda2;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    summary << form_name(f) << " min=" << fmt(lo) << " max=" << fmt(hi) << '\n';
  }
  return kExitOk;
}

int cmd_optimize(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = load_config(opt.config);
  const auto forms = forms_from(opt.which);
  const auto B = resolve_B(cfg);
  if (!B) throw ConfigError(cfg.source_path + ": optimize needs 'B' (a value or an alternative distribution)");
  const std::vector<double> grid = resolve_c_grid(cfg, opt.grid);
  const RiskConfig rc = build_risk_config(cfg, build_risk_function(cfg, opt.surrogate), grid);

  json report{{"tool", "rsbounds"},
              {"version", kVersion},
              {"config", cfg.source_path},
              {"config_hash", hash_hex(cfg.hash)},
              {"B", *B},
              {"c_grid", {{"min", grid.front()}, {"max", grid.back()}, {"points", grid.size()}}},
              {"results", json::array()}};
  if (cfg.B.alternative) report["alternative"] = distribution_to_json(*cfg.B.alternative);

  for (RiskForm f : forms) {
    const OptimalC r = optimal_c(rc, f, *B);
    out << "which=" << static_cast<int>(f) << " form=" << form_name(f)
        << " c_star=" << (r.finite() ? fmt(r.c_star) : std::string("inf")) << " bound=" << fmt(r.bound_value)
        << " finite=" << (r.finite() ? "true" : "false") << " converged=" << (r.converged ? "true" : "false") << '\n';
    json row{{"which", static_cast<int>(f)},
             {"form", form_name(f)},
             {"c_star", number_or_null(r.c_star)},
             {"finite", r.finite()},
             {"bound", r.bound_value},
             {"iterations", r.iterations},
             {"converged", r.converged}};
    if (cfg.monte_carlo) {
      const double c = r.finite() ? r.c_star : grid.back();
      const auto mc = mc_estimate(rc, f, c, cfg.monte_carlo->n_outer, cfg.monte_carlo->n_inner, opt.seed);
      row["monte_carlo"] = {{"c", c},
                            {"estimate", mc.estimate},
                            {"stderr", mc.stderr_},
                            {"quadrature", lambda_form(rc, f, c)},
                            {"n_outer", cfg.monte_carlo->n_outer},
                            {"n_inner", cfg.monte_carlo->n_inner},
                            {"seed", opt.seed}};
      out << "  monte_carlo c=" << fmt(c) << " estimate=" << fmt(mc.estimate) << " stderr=" << fmt(mc.stderr_) << '\n';
    }
    report["results"].push_back(std::move(row));
  }

  const auto path = opt.out ? opt.out : cfg.outputs.report;
  if (path) {
    auto os = open_output(*path);
    os << report.dump(2) << '\n';
  } else {
    out << report.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_re(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.p.empty() || opt.q.empty()) throw ConfigError("re needs --p and --q");
  const Distribution p = parse_distribution_spec(opt.p);
  const Distribution q = parse_distribution_spec(opt.q);
  out << "p=" << describe(p) << '\n' << "q=" << describe(q) << '\n';
  if (is_discrete(p) != is_discrete(q)) {
    err << "error: cannot compare a discrete law with a continuous one\n";
    return kExitConfig;
  }
  double closed = 0.0;
  try {
    closed = relative_entropy_closed(p, q);
  } catch (const IncompatibleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const double oracle = relative_entropy_numeric(p, q);
  const double diff = (std::isinf(closed) && std::isinf(oracle)) ? 0.0 : std::abs(closed - oracle);
  out << "closed_form=" << fmt(closed) << '\n' << "oracle=" << fmt(oracle) << '\n' << "difference=" << fmt(diff) << '\n';
  return kExitOk;
}

ReferenceMoments quadrature_reference(const ModelFunction& f, const std::array<PolynomialFamily, 2>& families,
                                      std::size_t order, ActiveDimensions dims) {
  const TensorRule rule =
      tensor_rule(gauss_rule(families[0], order), gauss_rule(families[1], dims == ActiveDimensions::Both ? order : 1));
  CompensatedSum m;
  CompensatedSum m2;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double v = f(rule.nodes[k][0], rule.nodes[k][1]);
    m.add(rule.weights[k] * v);
    m2.add(rule.weights[k] * v * v);
  }
  return {m.value(), m2.value()};
}

int cmd_surrogate_report(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = load_config(opt.config);
  const Model model = effective_model(cfg);
  const ModelFunction f = [&model](double z1, double z2) { return model(z1, z2); };
  const auto families = families_of(cfg);
  const auto& spec = cfg.surrogate_report;
  const ReferenceMoments reference =
      spec.reference.value_or(quadrature_reference(f, families, spec.reference_order, spec.dimensions));
  const auto rows = convergence_study(f, families, spec.orders, reference, spec.dimensions);

  auto write = [&](std::ostream& os) {
    os << "# " << provenance_comment(cfg) << '\n';
    os << "order,mean,second_moment,mean_rel_error,second_moment_rel_error\n";
    for (const auto& r : rows) {
      os << r.order << ',' << fmt(r.mean) << ',' << fmt(r.second_moment) << ',' << fmt(r.mean_rel_error) << ','
         << fmt(r.second_moment_rel_error) << '\n';
    }
  };
  const auto path = opt.out ? opt.out : cfg.outputs.csv;
  if (path) {
    auto os = open_output(*path);
    write(os);
    out << "reference mean=" << fmt(reference.mean) << " second_moment=" << fmt(reference.second_moment) << '\n';
  } else {
    write(out);
  }
  return kExitOk;
}

int cmd_limit(const Options& opt, std::ostream& out) {
  const ExperimentConfig cfg = load_config(opt.config);
  if (!std::holds_alternative<Uniform>(cfg.epistemic)) {
    throw ConfigError(cfg.source_path + ": limit needs a uniform epistemic nominal on a bounded interval, got " +
                      describe(cfg.epistemic));
  }
  const std::vector<double> grid = resolve_c_grid(cfg, opt.grid);
  const RiskConfig rc = build_risk_config(cfg, build_risk_function(cfg, opt.surrogate), grid);
  const double c_max = grid.back();
  const double limit = lambda1_infinity(rc);
  const double at_max = lambda1_c(rc, c_max);
  const double gap = std::abs(limit - at_max);
  out << "lambda1_infinity=" << fmt(limit) << '\n'
      << "c_max=" << fmt(c_max) << '\n'
      << "lambda1_at_c_max=" << fmt(at_max) << '\n'
      << "gap=" << fmt(gap) << '\n';
  const auto path = opt.out ? opt.out : cfg.outputs.report;
  if (path) {
    json report{{"tool", "rsbounds"},         {"version", kVersion},         {"config", cfg.source_path},
                {"config_hash", hash_hex(cfg.hash)}, {"lambda1_infinity", limit}, {"c_max", c_max},
                {"lambda1_at_c_max", at_max}, {"gap", gap}};
    auto os = open_output(*path);
    os << report.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

std::string provenance_comment(const ExperimentConfig& cfg) {
  return std::string("rsbounds ") + kVersion + " config-hash=" + hash_hex(cfg.hash);
}

std::vector<double> resolve_c_grid(const ExperimentConfig& cfg, const GridOverrides& overrides) {
  const double lo = overrides.c_min.value_or(cfg.c_grid.min);
  const double hi = overrides.c_max.value_or(cfg.c_grid.max);
  const std::size_t n = overrides.c_points.value_or(cfg.c_grid.points);
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ConfigError("c grid must satisfy 0 < c_min <= c_max < inf");
  }
  if (n == 0) throw ConfigError("c grid needs at least one point");
  return log_space(lo, hi, n);
}

RiskFunction build_risk_function(const ExperimentConfig& cfg, const SurrogateFiles& files) {
  const Model model = effective_model(cfg);
  const SurrogateTarget target = target_of(cfg);

  std::optional<Surrogate> s;
  if (files.load) {
    std::ifstream in(*files.load, std::ios::binary);
    if (!in) throw ConfigError(*files.load + ": cannot open surrogate file");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(*files.load + ": invalid JSON: " + e.what());
    }
    s = surrogate_from_json(j);
  } else if (cfg.surrogate.enabled) {
    const std::size_t fallback = default_collocation_order(cfg.output);
    const std::array<std::size_t, 2> orders{cfg.surrogate.orders[0] ? cfg.surrogate.orders[0] : fallback,
                                            cfg.surrogate.orders[1] ? cfg.surrogate.orders[1] : fallback};
    const auto families = families_of(cfg);
    const TensorRule rule = tensor_rule(gauss_rule(families[0], orders[0]), gauss_rule(families[1], orders[1]));
    s = compute_coefficients(solve_at_nodes(model, rule, target));
  } else {
    if (files.save) throw ConfigError("--save-surrogate needs the surrogate to be enabled");
    return [model](double z1, double z2) { return model(z1, z2); };
  }

  if (files.save) {
    json j = to_json(*s);
    j["target"] = target == SurrogateTarget::State ? "state" : "output";
    auto os = open_output(*files.save);
    os << j.dump(2) << '\n';
  }
  if (target == SurrogateTarget::State) {
    return [s = *s, h = cfg.output](double z1, double z2) { return apply_output(h, s(z1, z2)); };
  }
  return [s = *s](double z1, double z2) { return s(z1, z2); };
}

RiskConfig build_risk_config(const ExperimentConfig& cfg, RiskFunction f, std::vector<double> c_grid) {
  return RiskConfig::from_laws(std::move(f), cfg.aleatoric_rule_law(), cfg.epistemic, cfg.risk_orders[0],
                               cfg.risk_orders[1], std::move(c_grid));
}

std::optional<double> resolve_B(const ExperimentConfig& cfg) {
  if (cfg.B.value) return cfg.B.value;
  if (cfg.B.alternative) return relative_entropy(*cfg.B.alternative, cfg.epistemic);
  return std::nullopt;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk-sensitive performance bounds under model uncertainty", "rsbounds"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options opt;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", opt.out, "Output path (CSV or JSON report)");
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--c-min", opt.grid.c_min, "Smallest c of the log grid");
    sub->add_option("--c-max", opt.grid.c_max, "Largest c of the log grid");
    sub->add_option("--c-points", opt.grid.c_points, "Number of grid points");
  };
  auto add_surrogate_files = [&](CLI::App* sub) {
    sub->add_option("--save-surrogate", opt.surrogate.save, "Write the surrogate coefficients as JSON");
    sub->add_option("--load-surrogate", opt.surrogate.load, "Reuse a surrogate written by --save-surrogate");
  };
  auto add_which = [&](CLI::App* sub) {
    sub->add_option("--which", opt.which, "Integral form: 0, 1, 2 or all")
        ->check(CLI::IsMember({"0", "1", "2", "all"}));
  };

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Tabulate the three integrals and bounds over the c grid");
  add_config(sweep_cmd);
  add_which(sweep_cmd);
  add_grid(sweep_cmd);
  add_surrogate_files(sweep_cmd);

  CLI::App* optimize_cmd = app.add_subcommand("optimize", "Minimize B/c + lambda over c");
  add_config(optimize_cmd);
  add_which(optimize_cmd);
  add_grid(optimize_cmd);
  add_surrogate_files(optimize_cmd);
  optimize_cmd->add_option("--seed", opt.seed, "Seed for the Monte Carlo cross-check");

  CLI::App* re_cmd = app.add_subcommand("re", "Relative entropy R(P || Q), closed form and numerical oracle");
  re_cmd->add_option("--p", opt.p, "Alternative law, e.g. beta(1.5,1.5) or a JSON object")->required();
  re_cmd->add_option("--q", opt.q, "Reference law, e.g. uniform(0,1)")->required();

  CLI::App* report_cmd = app.add_subcommand("surrogate-report", "Moment convergence of the collocation surrogate");
  add_config(report_cmd);

  CLI::App* limit_cmd = app.add_subcommand("limit", "Large-c limit of the first hybrid integral");
  add_config(limit_cmd);
  add_grid(limit_cmd);
  add_surrogate_files(limit_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep_cmd) return cmd_sweep(opt, out, err);
    if (*optimize_cmd) return cmd_optimize(opt, out);
    if (*re_cmd) return cmd_re(opt, out, err);
    if (*report_cmd) return cmd_surrogate_report(opt, out);
    if (*limit_cmd) return cmd_limit(opt, out);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace rsbounds::cli
