#include "lk/app.hpp"
#include "lk/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace lk::app {
namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {
    "problem", "cloud",  "N",        "mode",   "seed",  "grid",  "k",            "epsilon",
    "tilde_epsilon", "debias", "solver", "min_norm_method", "tol", "shift_a", "output", "rhs",
    "truth", "coefficients", "N_values", "tuning"};

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

Index get_count(const json& v, const std::string& key, Index min_value) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  const auto value = v.get<std::int64_t>();
  if (value < min_value) fail(key, "must be >= " + std::to_string(min_value) + ", got " + std::to_string(value));
  return static_cast<Index>(value);
}

double get_positive(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  const double value = v.get<double>();
  if (!(value > 0.0) || !std::isfinite(value)) fail(key, "must be a positive finite number");
  return value;
}

Bandwidth get_bandwidth(const json& v, const std::string& key) {
  if (v.is_string()) {
    if (v.get<std::string>() != "auto") fail(key, "expected a positive number or \"auto\"");
    return {true, 0.0};
  }
  return {false, get_positive(v, key)};
}

template <typename Parse>
auto get_enum(const json& v, const std::string& key, Parse parse, const char* allowed) {
  const auto text = get_string(v, key);
  const auto parsed = parse(text);
  if (!parsed) fail(key, "unknown value '" + text + "' (allowed: " + allowed + ")");
  return *parsed;
}

std::optional<SolverChoice> parse_solver(std::string_view s) {
  if (s == "auto") return SolverChoice::automatic;
  if (s == "direct") return SolverChoice::direct;
  if (s == "min_norm") return SolverChoice::min_norm;
  return std::nullopt;
}

std::optional<solver::MinNormMethod> parse_min_norm(std::string_view s) {
  if (s == "lsqr") return solver::MinNormMethod::lsqr;
  if (s == "truncated_svd") return solver::MinNormMethod::truncated_svd;
  return std::nullopt;
}

std::optional<solver::Tuning> parse_tuning(std::string_view s) {
  if (s == "auto") return solver::Tuning::automatic;
  if (s == "oracle") return solver::Tuning::oracle;
  return std::nullopt;
}

RunConfig from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "problem") {
      const auto text = get_string(v, key);
      if (auto id = geometry::parse_problem_id(text)) {
        cfg.problem = *id;
      } else if (text.find('/') != std::string::npos || text.find('.') != std::string::npos) {
        cfg.cloud = text;
      } else {
        fail(key, "unknown problem '" + text + "' (bvp1d, ellipse, half_ellipse, torus, half_torus, or a cloud path)");
      }
    } else if (key == "cloud") {
      cfg.cloud = get_string(v, key);
    } else if (key == "N") {
      cfg.N = get_count(v, key, 2);
    } else if (key == "mode") {
      cfg.mode = get_enum(v, key, geometry::parse_sampling_mode, "uniform_grid, iid_density");
    } else if (key == "seed") {
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail(key, "expected a non-negative integer");
      }
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "grid") {
      cfg.grid = get_enum(v, key, geometry::parse_node_placement, "default, endpoints, cell_centered");
    } else if (key == "k") {
      cfg.k = get_count(v, key, 2);
    } else if (key == "epsilon") {
      cfg.epsilon = get_bandwidth(v, key);
    } else if (key == "tilde_epsilon") {
      cfg.tilde_epsilon = get_bandwidth(v, key);
    } else if (key == "debias") {
      if (!v.is_boolean()) fail(key, "expected true or false");
      cfg.debias = v.get<bool>();
    } else if (key == "solver") {
      cfg.solver = get_enum(v, key, parse_solver, "auto, direct, min_norm");
    } else if (key == "min_norm_method") {
      cfg.min_norm_method = get_enum(v, key, parse_min_norm, "lsqr, truncated_svd");
    } else if (key == "tol") {
      cfg.tol = get_positive(v, key);
    } else if (key == "shift_a") {
      if (v.is_string()) {
        if (v.get<std::string>() != "problem-default") fail(key, "expected a number or \"problem-default\"");
      } else if (v.is_number()) {
        cfg.shift_a = v.get<double>();
        if (!std::isfinite(*cfg.shift_a)) fail(key, "must be finite");
      } else {
        fail(key, "expected a number or \"problem-default\"");
      }
    } else if (key == "output") {
      cfg.output = get_string(v, key);
    } else if (key == "rhs") {
      if (v.is_number()) {
        cfg.rhs = v.get<double>();
      } else {
        cfg.rhs = std::filesystem::path(get_string(v, key));
      }
    } else if (key == "truth") {
      cfg.truth = get_string(v, key);
    } else if (key == "coefficients") {
      cfg.coefficients = get_string(v, key);
    } else if (key == "N_values") {
      if (!v.is_array()) fail(key, "expected an array of integers");
      for (const auto& item : v) cfg.N_values.push_back(get_count(item, key, 2));
    } else if (key == "tuning") {
      cfg.tuning = get_enum(v, key, parse_tuning, "auto, oracle");
    }
  }
  validate(cfg);
  return cfg;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::automatic:
      return "auto";
    case SolverChoice::direct:
      return "direct";
    case SolverChoice::min_norm:
      return "min_norm";
  }
  return "auto";
}

void validate(const RunConfig& cfg) {
  if (cfg.problem.has_value() == cfg.cloud.has_value()) {
    throw ConfigError("config key 'problem': give exactly one of a problem id or a cloud path");
  }
  if (cfg.cloud) {
    if (cfg.N) throw ConfigError("config key 'N': not allowed with a cloud (N is the file's point count)");
    if (cfg.mode != geometry::SamplingMode::uniform_grid && cfg.mode != geometry::SamplingMode::iid_density) {
      throw ConfigError("config key 'mode': invalid");
    }
  } else {
    if (!std::holds_alternative<std::monostate>(cfg.rhs) || cfg.truth || cfg.coefficients) {
      throw ConfigError("config keys 'rhs', 'truth' and 'coefficients' apply only to a cloud");
    }
  }
  if (cfg.k && cfg.N && *cfg.k > *cfg.N) throw ConfigError("config key 'k': must not exceed N");
  for (std::size_t i = 1; i < cfg.N_values.size(); ++i) {
    if (cfg.N_values[i] <= cfg.N_values[i - 1]) throw ConfigError("config key 'N_values': must increase strictly");
  }
}

RunConfig parse_config(const std::string& json_text) { return from_json(parse_document(json_text)); }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

RunConfig apply_overrides(const std::string& json_text,
                          const std::vector<std::pair<std::string, std::string>>& overrides) {
  json doc = json_text.empty() ? json::object() : parse_document(json_text);
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, text] : overrides) {
    json value;
    try {
      value = json::parse(text);
    } catch (const json::parse_error&) {
      value = text;  // bare word
    }
    doc[key] = value;
  }
  return from_json(doc);
}

}  // namespace lk::app
