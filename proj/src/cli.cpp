#include "barron/cli.hpp"

#include "barron/experiments.hpp"
#include "barron/io.hpp"
#include "barron/norms.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <optional>
#include <stdexcept>

namespace barron {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> set;
};

// Not-converged is a distinct outcome from bad input.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (std::isfinite(v) && s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

fs::path write_outputs(const SuiteReport& rep, const json& config, const fs::path& dir) {
  write_atomic(dir / (rep.suite + ".csv"), to_csv(rep.table));
  const fs::path summary = dir / (rep.suite + ".json");
  write_atomic(summary, report_to_json(rep, config).dump(2) + "\n");
  return summary;
}

int finish(const SuiteReport& rep, const json& config, const fs::path& dir, std::ostream& out, std::ostream& err) {
  const fs::path summary = write_outputs(rep, config, dir);
  out << summary.string() << "\n";
  if (!rep.converged) {
    err << rep.suite << ": numerical non-convergence (see " << summary.string() << ")\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

int run_suite(const std::string& name, const Common& c, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = c.config.empty() ? default_config(name) : config_from_json(read_json(c.config), name);
  if (c.seed) cfg.seed = *c.seed;
  for (const auto& s : c.set) apply_override(cfg, s);
  if (!c.out.empty()) cfg.output = c.out;
  cfg.validate(name);

  SuiteReport rep;
  if (name == "decay") rep = run_decay_suite(cfg);
  else if (name == "moment") rep = run_moment_suite(cfg);
  else if (name == "embed") rep = run_embedding_suite(cfg);
  else if (name == "tight") rep = run_tightness_suite(cfg);
  else if (name == "mc-rate") rep = run_mc_rate_suite(cfg);
  else rep = run_remark2_probe(cfg);
  return finish(rep, config_to_json(cfg), cfg.output, out, err);
}

// The config is either a network file itself or {"network": {...}} /
// {"network_file": "..."} plus scalar settings.
struct NetworkJob {
  NetworkFile file;
  json settings = json::object();
};

NetworkJob load_job(const Common& c) {
  if (c.config.empty()) throw std::invalid_argument("--config is required (network JSON)");
  const json j = read_json(c.config);
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  if (j.contains("atoms")) return {network_from_json(j)};
  json settings = json::object();
  std::optional<NetworkFile> file;
  for (const auto& [k, v] : j.items()) {
    if (k == "network") file = network_from_json(v);
    else if (k == "network_file") {
      if (!v.is_string()) throw std::invalid_argument("network_file: expected a path");
      fs::path p = v.get<std::string>();
      if (p.is_relative()) p = fs::path(c.config).parent_path() / p;
      file = load_network(p);
    } else settings[k] = v;
  }
  if (!file) throw std::invalid_argument("config: needs 'network' or 'network_file'");
  return {std::move(*file), settings};
}

double setting(const NetworkJob& job, const Common& c, const std::string& key, double fallback) {
  double v = fallback;
  if (job.settings.contains(key)) {
    if (!job.settings[key].is_number()) throw std::invalid_argument(key + ": expected a number");
    v = job.settings[key].get<double>();
  }
  for (const auto& s : c.set) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override '" + s + "': expected key=value");
    if (s.substr(0, eq) != key) continue;
    std::size_t used = 0;
    const std::string val = s.substr(eq + 1);
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != val.size()) throw std::invalid_argument("override " + key + ": not a number");
  }
  return v;
}

void reject_unknown(const NetworkJob& job, const Common& c, std::initializer_list<std::string> known) {
  auto ok = [&](const std::string& k) { return k == "schema_version" || std::find(known.begin(), known.end(), k) != known.end(); };
  for (const auto& [k, v] : job.settings.items())
    if (!ok(k)) throw std::invalid_argument("config: unknown key '" + k + "'");
  for (const auto& s : c.set) {
    const std::string k = s.substr(0, s.find('='));
    if (!ok(k)) throw std::invalid_argument("override: unknown key '" + k + "'");
  }
}

int run_barron(const Common& c, std::ostream& out, std::ostream& err) {
  const NetworkJob job = load_job(c);
  reject_unknown(job, c, {});
  const double cost = barron_cost_upper(job.file.net, job.file.domain);
  SuiteReport rep;
  rep.suite = "barron";
  rep.table.columns = {"width", "dim", "barron_cost_upper"};
  rep.table.rows.push_back({double(job.file.net.width()), double(job.file.net.dim()), cost});
  rep.constants["barron_cost_upper"] = cost;
  out << shortest(cost) << "\n";
  return finish(rep, network_to_json(job.file.net, job.file.domain), c.out.empty() ? "out" : c.out, out, err);
}

int run_spectral(const Common& c, std::ostream& out, std::ostream& err) {
  const NetworkJob job = load_job(c);
  reject_unknown(job, c, {"delta", "tol"});
  const double delta = setting(job, c, "delta", 0.5);
  const double tol = setting(job, c, "tol", 1e-6);
  const double value = spectral_upper(job.file.net, job.file.domain, delta, tol);
  const double cost = barron_cost_upper(job.file.net, job.file.domain);
  SuiteReport rep;
  rep.suite = "spectral";
  rep.table.columns = {"delta", "tol", "spectral_upper", "barron_cost_upper", "ratio"};
  rep.table.rows.push_back({delta, tol, value, cost, cost > 0 ? delta * value / cost : 0.0});
  rep.constants["spectral_upper"] = value;
  rep.constants["barron_cost_upper"] = cost;
  rep.constants["delta"] = delta;
  rep.constants["tol"] = tol;
  out << shortest(value) << "\n";
  json cfg = network_to_json(job.file.net, job.file.domain);
  cfg["delta"] = delta;
  cfg["tol"] = tol;
  return finish(rep, cfg, c.out.empty() ? "out" : c.out, out, err);
}

int run_fit(const Common& c, std::ostream& out, std::ostream& err) {
  FitConfig cfg = c.config.empty() ? triangle_fit_config() : fit_config_from_json(read_json(c.config));
  if (c.seed) cfg.seed = *c.seed;
  for (const auto& s : c.set) apply_override(cfg, s);
  cfg.validate();
  FitResult res = fit_network(cfg);
  const SuiteReport rep = fit_report(cfg, res);
  const fs::path dir = c.out.empty() ? "out" : c.out;
  write_atomic(dir / "fit_network.json", network_to_json(res.net, cfg.domain).dump(2) + "\n");
  json jc = {{"schema_version", kSchemaVersion}, {"m", cfg.m}, {"s", cfg.s}, {"lambda", cfg.lambda},
             {"step", cfg.step}, {"growth", cfg.growth}, {"shrink", cfg.shrink}, {"armijo", cfg.armijo},
             {"max_iter", cfg.max_iter}, {"grad_tol", cfg.grad_tol}, {"seed", cfg.seed}, {"samples", cfg.y.size()}};
  out << "mse " << shortest(res.mse) << " norm_estimate " << shortest(res.norm_estimate) << "\n";
  return finish(rep, jc, dir, out, err);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral and path-norm Barron estimates for shallow ReLU^s networks."};
  app.name("barron_gauge");
  app.require_subcommand(1);
  app.footer("Every subcommand reads JSON config schema v" + std::to_string(kSchemaVersion) +
             "; examples live in configs/. Exit codes: 0 ok, 1 invalid input, 2 non-convergence.");

  Common common;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"decay", "decay envelopes |hat h|(1+|xi|)^{s+1}/(1+|b|)^s"},
      {"moment", "moment integrals M(s, b, s-delta) and their blow-up in delta"},
      {"spectral", "spectral Barron upper bound of a network (delta, tol)"},
      {"barron", "path-norm cost (1/m) sum |a|(||w||+|b|)^s of a network"},
      {"embed", "delta * spectral bound / path cost for random networks"},
      {"tight", "S(R) against ln R for the triangular hat"},
      {"mc-rate", "Monte-Carlo sup-norm error against m"},
      {"remark2", "non-integer s probe (exploratory)"},
      {"fit", "gradient-descent fit with path-norm penalty"},
  };
  for (const auto& [name, desc] : subs) {
    auto* sub = app.add_subcommand(name, desc + " [config schema v" + std::to_string(kSchemaVersion) + "]");
    sub->add_option("--config", common.config, "JSON config file");
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--seed", common.seed, "RNG seed");
    sub->add_option("--set", common.set, "override key=value (repeatable)")->allow_extra_args(false);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "barron") return run_barron(common, out, err);
    if (name == "spectral") return run_spectral(common, out, err);
    if (name == "fit") return run_fit(common, out, err);
    return run_suite(name, common, out, err);
  } catch (const std::invalid_argument& e) {
    err << name << ": " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << name << ": malformed config: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    // fit divergence and other runtime failures are numerical outcomes
    err << name << ": " << e.what() << "\n";
    return kExitNonConvergence;
  }
}

}  // namespace barron
