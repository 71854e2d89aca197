#include "barron/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

namespace barron {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double to_number(std::string_view text, std::string_view key) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && used > 0, "override " + std::string(key) + ": not a number: '" + s + "'");
  return v;
}

std::vector<double> to_numbers(std::string_view text, std::string_view key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(to_number(piece, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int to_int(double v, std::string_view key) {
  require(v == std::floor(v) && std::abs(v) < 2e9, std::string(key) + ": expected an integer");
  return static_cast<int>(v);
}

std::vector<int> to_ints(const std::vector<double>& v, std::string_view key) {
  std::vector<int> out;
  for (double x : v) out.push_back(to_int(x, key));
  return out;
}

double get_number(const json& j, const std::string& key) {
  require(j.is_number(), key + ": expected a number");
  return j.get<double>();
}

std::vector<double> get_numbers(const json& j, const std::string& key) {
  require(j.is_array(), key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(get_number(e, key));
  return out;
}

std::vector<double> decades(double lo, double hi) {
  require(lo >= 1.0 && hi > lo, "Rmin/Rmax: needs 1 <= Rmin < Rmax");
  std::vector<double> r;
  for (double v = lo; v <= hi * (1.0 + 1e-12); v *= 10.0) r.push_back(v);
  return r;
}

void check_schema(const json& j) {
  require(j.is_object(), "config: expected a JSON object");
  if (j.contains("schema_version"))
    require(j["schema_version"].is_number_integer() && j["schema_version"].get<int>() == kSchemaVersion,
            "config: unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
}

// Applies one numeric field; returns false for unknown keys.
bool set_field(ExperimentConfig& c, const std::string& key, const std::vector<double>& v) {
  auto scalar = [&]() {
    require(v.size() == 1, key + ": expected a single value");
    return v.front();
  };
  if (key == "seed") {
    const double s = scalar();
    require(s >= 0 && s == std::floor(s) && s < 1.8e19, "seed: expected a non-negative integer");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "s_list" || key == "s") c.s_list = v;
  else if (key == "b_grid" || key == "b") c.b_grid = v;
  else if (key == "delta_grid" || key == "delta") c.delta_grid = v;
  else if (key == "xi_grid") c.xi_grid = v;
  else if (key == "d_list" || key == "d") c.d_list = to_ints(v, key);
  else if (key == "m_list" || key == "m") c.m_list = to_ints(v, key);
  else if (key == "R_list") c.R_list = v;
  else if (key == "Rmax") c.R_list = decades(c.R_list.empty() ? 1e2 : c.R_list.front(), scalar());
  else if (key == "Rmin") c.R_list = decades(scalar(), c.R_list.empty() ? 1e6 : c.R_list.back());
  else if (key == "ft_rel_tol") c.ft_rel_tol = scalar();
  else if (key == "moment_tol") c.moment_tol = scalar();
  else if (key == "flat_split") c.flat_split = scalar();
  else if (key == "flat_tol") c.flat_tol = scalar();
  else if (key == "uniform_tol") c.uniform_tol = scalar();
  else if (key == "slope_lo") c.slope_lo = scalar();
  else if (key == "slope_hi") c.slope_hi = scalar();
  else if (key == "width") c.width = to_int(scalar(), key);
  else if (key == "atoms") c.atoms = to_int(scalar(), key);
  else if (key == "resamples") c.resamples = to_int(scalar(), key);
  else if (key == "grid_points") c.grid_points = to_int(scalar(), key);
  else if (key == "mc_dim") c.mc_dim = to_int(scalar(), key);
  else if (key == "rate_lo") c.rate_lo = scalar();
  else if (key == "rate_hi") c.rate_hi = scalar();
  else return false;
  return true;
}

bool set_field(FitConfig& c, const std::string& key, double v) {
  if (key == "m") c.m = to_int(v, key);
  else if (key == "s") c.s = to_int(v, key);
  else if (key == "lambda") c.lambda = v;
  else if (key == "step") c.step = v;
  else if (key == "growth") c.growth = v;
  else if (key == "shrink") c.shrink = v;
  else if (key == "armijo") c.armijo = v;
  else if (key == "max_iter") c.max_iter = to_int(v, key);
  else if (key == "grad_tol") c.grad_tol = v;
  else if (key == "seed") {
    require(v >= 0 && v == std::floor(v) && v < 1.8e19, "seed: expected a non-negative integer");
    c.seed = static_cast<std::uint64_t>(v);
  } else return false;
  return true;
}

std::pair<std::string, std::string> split_assignment(std::string_view a) {
  const auto eq = a.find('=');
  require(eq != std::string_view::npos && eq > 0, "override '" + std::string(a) + "': expected key=value");
  return {std::string(a.substr(0, eq)), std::string(a.substr(eq + 1))};
}

Domain domain_from_json(const json& d) {
  require(d.is_object() && d.contains("type") && d["type"].is_string(), "domain: expected an object with a string 'type'");
  const std::string type = d["type"];
  if (type == "box") {
    require(d.contains("halfwidths"), "domain: box needs 'halfwidths'");
    const auto h = get_numbers(d["halfwidths"], "halfwidths");
    return Domain::box(Eigen::Map<const Vector>(h.data(), static_cast<Eigen::Index>(h.size())));
  }
  if (type == "ball") {
    require(d.contains("radius") && d.contains("dim"), "domain: ball needs 'radius' and 'dim'");
    return Domain::ball(get_number(d["radius"], "radius"), to_int(get_number(d["dim"], "dim"), "dim"));
  }
  if (type == "polytope") {
    require(d.contains("vertices") && d["vertices"].is_array() && !d["vertices"].empty(),
            "domain: polytope needs a non-empty 'vertices' array");
    const auto& vs = d["vertices"];
    const std::size_t dim = get_numbers(vs[0], "vertices").size();
    Matrix v(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vs.size()));
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const auto p = get_numbers(vs[k], "vertices");
      require(p.size() == dim, "domain: vertices have mixed dimensions");
      for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = p[i];
    }
    return Domain::polytope(v);
  }
  throw std::invalid_argument("domain: unknown type '" + type + "'");
}

json domain_to_json(const Domain& domain) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Box<double>>) {
          return {{"type", "box"}, {"halfwidths", std::vector<double>(d.halfwidths.begin(), d.halfwidths.end())}};
        } else if constexpr (std::is_same_v<T, Ball<double>>) {
          return {{"type", "ball"}, {"radius", d.radius}, {"dim", d.dim}};
        } else {
          json vs = json::array();
          for (Eigen::Index k = 0; k < d.vertices.cols(); ++k) {
            const Vector c = d.vertices.col(k);
            vs.push_back(std::vector<double>(c.begin(), c.end()));
          }
          return {{"type", "polytope"}, {"vertices", vs}};
        }
      },
      domain.variant());
}

}  // namespace

NetworkFile network_from_json(const json& j) {
  check_schema(j);
  for (const auto& [k, v] : j.items())
    require(k == "schema_version" || k == "s" || k == "domain" || k == "atoms", "network: unknown key '" + k + "'");
  require(j.contains("s") && j.contains("domain") && j.contains("atoms"), "network: needs 's', 'domain' and 'atoms'");
  const double s = get_number(j["s"], "s");
  require(s >= 0 && s == std::floor(s), "network: s must be a non-negative integer");
  Domain domain = domain_from_json(j["domain"]);
  require(j["atoms"].is_array() && !j["atoms"].empty(), "network: 'atoms' must be a non-empty array");
  std::vector<Atom<double>> atoms;
  for (const auto& at : j["atoms"]) {
    require(at.is_array() && at.size() == 3, "network: each atom is [a, [w...], b]");
    const auto w = get_numbers(at[1], "w");
    require(static_cast<Eigen::Index>(w.size()) == domain.dim(), "network: atom dimension does not match the domain");
    atoms.push_back({get_number(at[0], "a"), Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size())),
                     get_number(at[2], "b")});
  }
  return {Network(ActivationPower(static_cast<int>(s)), atoms), std::move(domain)};
}

json network_to_json(const Network& net, const Domain& domain) {
  json atoms = json::array();
  for (Eigen::Index j = 0; j < net.width(); ++j) {
    const auto at = net.atom(j);
    atoms.push_back({at.a, std::vector<double>(at.w.begin(), at.w.end()), at.b});
  }
  return {{"schema_version", kSchemaVersion}, {"s", net.power().value()}, {"domain", domain_to_json(domain)}, {"atoms", atoms}};
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": malformed JSON: " + e.what());
  }
}

NetworkFile load_network(const std::filesystem::path& path) { return network_from_json(read_json(path)); }

ExperimentConfig config_from_json(const json& j, std::string_view suite) {
  check_schema(j);
  ExperimentConfig c = default_config(suite);
  for (const auto& [key, v] : j.items()) {
    if (key == "schema_version") continue;
    if (key == "output") {
      require(v.is_string(), "output: expected a string");
      c.output = v.get<std::string>();
      continue;
    }
    std::vector<double> vals = v.is_array() ? get_numbers(v, key) : std::vector<double>{get_number(v, key)};
    require(set_field(c, key, vals), "config: unknown key '" + key + "'");
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  return {{"schema_version", kSchemaVersion}, {"seed", c.seed}, {"s_list", c.s_list}, {"b_grid", c.b_grid},
          {"delta_grid", c.delta_grid}, {"xi_grid", c.xi_grid}, {"d_list", c.d_list}, {"m_list", c.m_list},
          {"R_list", c.R_list}, {"ft_rel_tol", c.ft_rel_tol}, {"moment_tol", c.moment_tol},
          {"flat_split", c.flat_split}, {"flat_tol", c.flat_tol}, {"uniform_tol", c.uniform_tol},
          {"slope_lo", c.slope_lo}, {"slope_hi", c.slope_hi}, {"width", c.width}, {"atoms", c.atoms},
          {"resamples", c.resamples}, {"grid_points", c.grid_points}, {"mc_dim", c.mc_dim},
          {"rate_lo", c.rate_lo}, {"rate_hi", c.rate_hi}, {"output", c.output}};
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto [key, value] = split_assignment(assignment);
  if (key == "output") {
    cfg.output = value;
    return;
  }
  require(set_field(cfg, key, to_numbers(value, key)), "override: unknown key '" + key + "'");
}

FitConfig fit_config_from_json(const json& j) {
  check_schema(j);
  FitConfig c = triangle_fit_config();
  bool have_domain = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "schema_version") continue;
    if (key == "target") {
      require(v == "triangle", "fit: only target 'triangle' is built in; give 'samples' instead");
      continue;
    }
    if (key == "points") {
      const FitConfig t = triangle_fit_config(to_int(get_number(v, key), key));
      c.x = t.x;
      c.y = t.y;
      continue;
    }
    if (key == "samples") {
      require(v.is_object() && v.contains("x") && v.contains("y"), "fit: samples needs 'x' and 'y'");
      const auto y = get_numbers(v["y"], "y");
      require(v["x"].is_array() && v["x"].size() == y.size() && !y.empty(), "fit: x and y lengths differ");
      const std::size_t d = get_numbers(v["x"][0], "x").size();
      c.x.resize(static_cast<Eigen::Index>(y.size()), static_cast<Eigen::Index>(d));
      for (std::size_t i = 0; i < y.size(); ++i) {
        const auto xi = get_numbers(v["x"][i], "x");
        require(xi.size() == d, "fit: sample points have mixed dimensions");
        for (std::size_t k = 0; k < d; ++k) c.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = xi[k];
      }
      c.y = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
      continue;
    }
    if (key == "domain") {
      c.domain = domain_from_json(v);
      have_domain = true;
      continue;
    }
    require(set_field(c, key, get_number(v, key)), "fit: unknown key '" + key + "'");
  }
  if (!have_domain) c.domain = Domain::unit_box(c.x.cols());
  return c;
}

void apply_override(FitConfig& cfg, std::string_view assignment) {
  const auto [key, value] = split_assignment(assignment);
  require(set_field(cfg, key, to_number(value, key)), "override: unknown key '" + key + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

json report_to_json(const SuiteReport& r, const json& config) {
  json constants = json::object();
  for (const auto& [k, v] : r.constants) constants[k] = std::isfinite(v) ? json(v) : json(format_double(v));
  return {{"suite", r.suite}, {"schema_version", kSchemaVersion}, {"config", config}, {"constants", constants},
          {"checks", r.checks}, {"passed", r.passed()}, {"converged", r.converged}, {"exploratory", r.exploratory}};
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace barron
