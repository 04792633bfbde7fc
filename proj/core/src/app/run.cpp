#include "lk/app.hpp"
#include "lk/cloud_io.hpp"
#include "lk/errors.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>

namespace lk::app {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Everything a pipeline needs once the config is resolved to a concrete cloud.
struct Setup {
  std::string label;
  geometry::DiscreteProblem problem;
  bool has_truth = false;
  Index k = 0;
  bool debias = false;
  double shift = 0.0;
};

Setup make_setup(const RunConfig& cfg) {
  Setup s;
  if (cfg.problem) {
    const auto id = *cfg.problem;
    const auto analytic = geometry::analytic_pair(id);
    geometry::SamplingOptions sampling;
    sampling.mode = cfg.mode;
    sampling.seed = cfg.seed;
    sampling.placement = cfg.grid;
    const Index n_points = cfg.N.value_or(default_N(id));
    s.problem = geometry::discretize(analytic, n_points, sampling);
    s.label = std::string(geometry::to_string(id));
    s.has_truth = true;
    s.k = cfg.k.value_or(default_k(id));
    s.debias = cfg.debias.value_or(default_debias(id));
    s.shift = s.problem.shift.size() ? s.problem.shift[0] : 0.0;
    if (cfg.shift_a) {
      // Keep u_true exact: f changes by (a_new - a_old) u.
      s.problem.rhs += (*cfg.shift_a - s.problem.shift.array()).matrix().cwiseProduct(s.problem.u_true);
      s.problem.shift.setConstant(*cfg.shift_a);
      s.shift = *cfg.shift_a;
    }
  } else {
    auto& p = s.problem;
    p.cloud = geometry::load_cloud(*cfg.cloud);
    const Index n_points = p.cloud.size();
    const Index n = p.cloud.ambient_dim();
    s.label = cfg.cloud->string();
    p.coeffs = cfg.coefficients ? geometry::load_coefficients(*cfg.coefficients, n_points, n)
                                : geometry::isotropic_coefficients(n_points, n, 2.0);
    s.shift = cfg.shift_a.value_or(0.0);
    p.shift = Vector::Constant(n_points, s.shift);
    if (const auto* path = std::get_if<std::filesystem::path>(&cfg.rhs)) {
      p.rhs = geometry::load_values(*path);
      if (p.rhs.size() != n_points) {
        throw ConfigError("config key 'rhs': " + std::to_string(p.rhs.size()) + " values for " +
                          std::to_string(n_points) + " points");
      }
    } else if (const auto* value = std::get_if<double>(&cfg.rhs)) {
      p.rhs = Vector::Constant(n_points, *value);
    } else {
      p.rhs = Vector::Zero(n_points);
    }
    if (cfg.truth) {
      p.u_true = geometry::load_values(*cfg.truth);
      if (p.u_true.size() != n_points) throw ConfigError("config key 'truth': length does not match the cloud");
      s.has_truth = true;
    }
    s.k = cfg.k.value_or(std::min(kDefaultCloudK, n_points));
    s.debias = true;
    if (cfg.debias && !*cfg.debias) throw ConfigError("config key 'debias': the cloud pathway always debiases");
  }
  if (s.k > s.problem.cloud.size()) {
    throw ConfigError("config key 'k': " + std::to_string(s.k) + " exceeds N=" +
                      std::to_string(s.problem.cloud.size()));
  }
  return s;
}

void fill_common(ResultRecord& r, const RunConfig& cfg, const Setup& s) {
  r.problem = s.label;
  r.N = s.problem.cloud.size();
  r.mode = std::string(geometry::to_string(cfg.cloud ? geometry::SamplingMode::iid_density : cfg.mode));
  r.seed = cfg.seed;
  r.grid = std::string(geometry::to_string(cfg.grid));
  r.k = s.k;
  r.debias = s.debias;
  r.shift_a = s.shift;
  r.output = cfg.output ? cfg.output->string() : "";
  r.min_norm_method = std::string(solver::to_string(cfg.min_norm_method));
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write output '" + path.string() + "'");
  return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

Index default_N(geometry::ProblemId id) {
  switch (id) {
    case geometry::ProblemId::torus:
      return 6400;
    case geometry::ProblemId::half_torus:
      return 3200;
    default:
      return 1000;
  }
}

Index default_k(geometry::ProblemId id) {
  switch (id) {
    case geometry::ProblemId::bvp1d:
      return 100;
    case geometry::ProblemId::ellipse:
    case geometry::ProblemId::half_ellipse:
      return 200;
    default:
      return 128;
  }
}

bool default_debias(geometry::ProblemId id) { return id != geometry::ProblemId::bvp1d; }

std::string ResultRecord::to_json() const {
  // Doubles are emitted through format_double so the record shares the
  // shortest round-trip representation with the CSV outputs.
  const auto num = [](double v) { return json::parse(format_double(v)); };
  const auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : json(nullptr); };
  json j = json::object();
  j["command"] = command;
  j["problem"] = problem;
  j["N"] = N;
  j["mode"] = mode;
  j["seed"] = seed;
  j["grid"] = grid;
  j["k"] = k;
  j["epsilon"] = num(epsilon);
  j["epsilon_tuned"] = epsilon_tuned;
  j["tilde_epsilon"] = num(tilde_epsilon);
  j["tilde_epsilon_tuned"] = tilde_epsilon_tuned;
  j["debias"] = debias;
  j["solver"] = solver;
  j["min_norm_method"] = min_norm_method;
  j["shift_a"] = num(shift_a);
  j["output"] = output;
  j["error_inf"] = opt(error_inf);
  j["error_l2"] = opt(error_l2);
  j["error_inf_shifted"] = opt(error_inf_shifted);
  j["residual_inf"] = opt(residual_inf);
  j["iterations"] = iterations ? json(*iterations) : json(nullptr);
  j["certificate"] = certificate ? json(*certificate) : json(nullptr);
  j["d_hat"] = opt(d_hat);
  j["epsilon_star"] = opt(epsilon_star);
  j["fitted_slope"] = opt(fitted_slope);
  j["wall_time_seconds"] = num(wall_time_seconds);
  return j.dump();
}

ResultRecord run_solve(const RunConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  Setup s = make_setup(cfg);
  const auto& p = s.problem;
  const auto pattern = kernel::build_knn_graph(p.cloud, s.k);
  const auto grid = op::default_tuning_grid();

  ResultRecord r;
  r.command = "solve";
  fill_common(r, cfg, s);

  // Q(eps) over the run's kNN pattern gives both the automatic eps and d_hat.
  const auto tuning = op::tune_bandwidth(p.cloud, p.coeffs, grid, s.k);
  r.d_hat = tuning.d_hat;
  r.epsilon_star = tuning.epsilon_star;
  r.epsilon_tuned = cfg.epsilon.automatic;
  r.epsilon = cfg.epsilon.automatic ? tuning.epsilon_star : cfg.epsilon.value;
  const Bandwidth tilde = cfg.tilde_epsilon.value_or(Bandwidth{cfg.epsilon.automatic, r.epsilon});
  r.tilde_epsilon_tuned = tilde.automatic;
  r.tilde_epsilon = tilde.automatic ? op::tune_bandwidth_gaussian(p.cloud, grid, s.k).epsilon_star : tilde.value;

  const kernel::KernelConfig kcfg{r.epsilon, r.tilde_epsilon, s.k, true};
  kcfg.validate(p.cloud.size());
  const auto gen = op::build_operator(p.cloud, p.coeffs, kcfg, s.debias, pattern);
  const solver::LinearProblem lp{&gen, p.shift, p.rhs};

  solver::Method method;
  switch (cfg.solver) {
    case SolverChoice::direct:
      method = solver::Method::direct;
      break;
    case SolverChoice::min_norm:
      method = solver::Method::min_norm;
      break;
    default:
      method = p.shift.size() && p.shift.maxCoeff() < 0.0 ? solver::Method::direct : solver::Method::min_norm;
  }
  solver::MinNormOptions mn;
  mn.method = cfg.min_norm_method;
  mn.tol = cfg.tol;
  auto report = method == solver::Method::direct ? solver::solve_direct(lp) : solver::solve_min_norm(lp, mn);
  r.solver = std::string(solver::to_string(method));
  r.residual_inf = report.residual_inf;
  if (method == solver::Method::min_norm) {
    r.iterations = report.iterations;
    r.certificate = solver::check_minimum_norm_certificate(report.u_hat, gen);
  }
  if (s.has_truth) {
    solver::attach_errors(report, p.u_true);
    r.error_inf = report.error_inf;
    r.error_l2 = report.error_l2;
    r.error_inf_shifted = report.error_inf_shifted;
  }

  if (cfg.output) {
    auto out = open_output(*cfg.output);
    CsvWriter csv(out);
    const Index n = p.cloud.ambient_dim();
    const Index d = p.cloud.intrinsic ? p.cloud.intrinsic->cols() : 0;
    std::vector<std::string> header{"index"};
    for (Index a = 0; a < n; ++a) header.push_back("x" + std::to_string(a + 1));
    for (Index a = 0; a < d; ++a) header.push_back("t" + std::to_string(a + 1));
    header.push_back("u_hat");
    if (s.has_truth) {
      header.push_back("u_true");
      header.push_back("abs_error");
    }
    csv.row(header);
    for (Index i = 0; i < p.cloud.size(); ++i) {
      std::vector<std::string> row{std::to_string(i)};
      for (Index a = 0; a < n; ++a) row.push_back(format_double(p.cloud.ambient(i, a)));
      for (Index a = 0; a < d; ++a) row.push_back(format_double((*p.cloud.intrinsic)(i, a)));
      row.push_back(format_double(report.u_hat[i]));
      if (s.has_truth) {
        row.push_back(format_double(p.u_true[i]));
        row.push_back(format_double(std::abs(report.u_hat[i] - p.u_true[i])));
      }
      csv.row(row);
    }
    close_output(out, *cfg.output);
  }
  r.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

ResultRecord run_study(const RunConfig& cfg) {
  validate(cfg);
  if (!cfg.problem) throw ConfigError("config key 'problem': study needs an analytic problem, not a cloud");
  if (cfg.N_values.size() < 4) {
    throw ConfigError("config key 'N_values': study needs at least 4 values of N, got " +
                      std::to_string(cfg.N_values.size()));
  }
  const auto start = Clock::now();
  const auto id = *cfg.problem;
  solver::StudyOptions opts;
  opts.k_neighbors = cfg.k.value_or(default_k(id));
  opts.debias = cfg.debias.value_or(default_debias(id));
  opts.sampling.mode = cfg.mode;
  opts.sampling.seed = cfg.seed;
  opts.sampling.placement = cfg.grid;
  if (cfg.tilde_epsilon && !cfg.tilde_epsilon->automatic) opts.tilde_epsilon = cfg.tilde_epsilon->value;
  opts.min_norm.method = cfg.min_norm_method;
  opts.min_norm.tol = cfg.tol;

  auto analytic = geometry::analytic_pair(id);
  const auto study = solver::convergence_study(analytic, cfg.N_values, cfg.tuning, opts);

  ResultRecord r;
  r.command = "study";
  r.problem = std::string(geometry::to_string(id));
  r.N = cfg.N_values.back();
  r.mode = std::string(geometry::to_string(cfg.mode));
  r.seed = cfg.seed;
  r.grid = std::string(geometry::to_string(cfg.grid));
  r.k = opts.k_neighbors;
  r.epsilon = study.epsilons.back();
  r.epsilon_tuned = true;
  r.tilde_epsilon = study.tilde_epsilons.back();
  r.tilde_epsilon_tuned = !opts.tilde_epsilon;
  r.debias = opts.debias;
  r.solver = "auto";
  r.min_norm_method = std::string(solver::to_string(cfg.min_norm_method));
  r.shift_a = analytic.shift_a(Vector::Zero(analytic.manifold.intrinsic_dim));
  r.output = cfg.output ? cfg.output->string() : "";
  r.error_inf = study.errors_inf.back();
  r.fitted_slope = study.fitted_slope;

  if (cfg.output) {
    auto out = open_output(*cfg.output);
    CsvWriter csv(out);
    csv.row({"N", "epsilon", "error_inf"});
    for (std::size_t i = 0; i < study.N_values.size(); ++i) {
      csv.row({std::to_string(study.N_values[i]), format_double(study.epsilons[i]),
               format_double(study.errors_inf[i])});
    }
    csv.row({"slope", format_double(study.fitted_slope), ""});
    close_output(out, *cfg.output);
  }
  r.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

ResultRecord run_tune(const RunConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  Setup s = make_setup(cfg);
  const auto& p = s.problem;
  // Without an explicit k, Q runs over all pairs.
  const Index k = cfg.k.value_or(p.cloud.size());
  s.k = k;
  const auto grid = op::default_tuning_grid();
  const auto report = op::tune_bandwidth(p.cloud, p.coeffs, grid, k);
  const auto gaussian = op::tune_bandwidth_gaussian(p.cloud, grid, k);

  ResultRecord r;
  r.command = "tune";
  fill_common(r, cfg, s);
  r.epsilon = report.epsilon_star;
  r.epsilon_tuned = true;
  r.tilde_epsilon = gaussian.epsilon_star;
  r.tilde_epsilon_tuned = true;
  r.solver = std::string(to_string(cfg.solver));
  r.d_hat = report.d_hat;
  r.epsilon_star = report.epsilon_star;

  if (cfg.output) {
    auto out = open_output(*cfg.output);
    CsvWriter csv(out);
    csv.row({"epsilon", "Q", "log_Q", "slope", "selected"});
    for (std::size_t m = 0; m < grid.size(); ++m) {
      csv.row({format_double(grid[m]), format_double(report.q[m]), format_double(report.log_q[m]),
               format_double(report.slope[m]), static_cast<Index>(m) == report.argmax ? "1" : "0"});
    }
    close_output(out, *cfg.output);
  }
  r.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

}  // namespace lk::app
