#pragma once

#include "lk/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lk::app {

/// A bandwidth that is either fixed or resolved by Q(eps) tuning at run time.
struct Bandwidth {
  bool automatic = true;
  double value = 0.0;
};

enum class SolverChoice { automatic, direct, min_norm };
std::string_view to_string(SolverChoice s);

struct RunConfig {
  std::optional<geometry::ProblemId> problem;
  std::optional<std::filesystem::path> cloud;
  std::optional<Index> N;
  geometry::SamplingMode mode = geometry::SamplingMode::uniform_grid;
  std::uint64_t seed = 0;
  geometry::NodePlacement grid = geometry::NodePlacement::manifold_default;
  std::optional<Index> k;
  Bandwidth epsilon;
  /// Unset: follows epsilon (tuned with the Gaussian kernel when epsilon is
  /// automatic, equal to epsilon otherwise).
  std::optional<Bandwidth> tilde_epsilon;
  std::optional<bool> debias;
  SolverChoice solver = SolverChoice::automatic;
  solver::MinNormMethod min_norm_method = solver::MinNormMethod::lsqr;
  double tol = 1e-10;
  std::optional<double> shift_a;  ///< unset: the problem default
  std::optional<std::filesystem::path> output;
  /// Ambient-cloud pathway: right-hand side file or constant, optional truth
  /// and per-point coefficient files.
  std::variant<std::monostate, std::filesystem::path, double> rhs;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> coefficients;
  /// study subcommand.
  std::vector<Index> N_values;
  solver::Tuning tuning = solver::Tuning::automatic;
};

/// Parses a JSON document. Unknown keys, wrong types and out-of-range values
/// raise ConfigError naming the key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
/// Applies "key=value" overrides where value is JSON (bare words are taken as
/// strings), then re-validates.
RunConfig apply_overrides(const std::string& json_text, const std::vector<std::pair<std::string, std::string>>& overrides);
/// Cross-field checks (problem xor cloud, per-command requirements).
void validate(const RunConfig& cfg);

struct ResultRecord {
  std::string command;
  std::string problem;  ///< problem id or cloud path
  Index N = 0;
  std::string mode;
  std::uint64_t seed = 0;
  std::string grid;
  Index k = 0;
  double epsilon = 0.0;
  bool epsilon_tuned = false;
  double tilde_epsilon = 0.0;
  bool tilde_epsilon_tuned = false;
  bool debias = false;
  std::string solver;
  std::string min_norm_method;
  double shift_a = 0.0;
  std::string output;
  std::optional<double> error_inf;
  std::optional<double> error_l2;
  std::optional<double> error_inf_shifted;
  std::optional<double> residual_inf;
  std::optional<Index> iterations;
  std::optional<bool> certificate;
  std::optional<double> d_hat;
  std::optional<double> epsilon_star;
  std::optional<double> fitted_slope;
  double wall_time_seconds = 0.0;

  std::string to_json() const;
};

ResultRecord run_solve(const RunConfig& cfg);
ResultRecord run_study(const RunConfig& cfg);
ResultRecord run_tune(const RunConfig& cfg);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// RFC 4180 writer: CRLF line ends, fields quoted when they contain a comma,
/// quote or line break.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream* out_;
};

/// Reads an RFC 4180 document into rows of fields.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Per-problem defaults.
Index default_N(geometry::ProblemId id);
Index default_k(geometry::ProblemId id);
bool default_debias(geometry::ProblemId id);
inline constexpr Index kDefaultCloudK = 128;

}  // namespace lk::app
