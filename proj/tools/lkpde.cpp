// lkpde: solve, study and tune subcommands over one JSON config schema.
#include "lk/app.hpp"
#include "lk/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

namespace {

// Config keys settable from the command line; each becomes --<key>.
constexpr const char* kOverrideKeys[] = {
    "problem", "cloud", "N",  "mode",   "seed",    "grid",   "k",   "epsilon",      "tilde_epsilon", "debias",
    "solver",  "min_norm_method", "tol", "shift_a", "output", "rhs", "truth",        "coefficients",  "N_values",
    "tuning"};

struct Invocation {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_config_options(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("--config", inv.config_path, "JSON config file")->check(CLI::ExistingFile);
  for (const char* key : kOverrideKeys) {
    cmd->add_option(std::string("--") + key, inv.values[key], std::string("override config key ") + key);
  }
}

lk::app::RunConfig resolve(const Invocation& inv, const CLI::App* cmd) {
  std::string text;
  if (!inv.config_path.empty()) {
    std::ifstream in(inv.config_path);
    if (!in) throw lk::Error("cannot open config '" + inv.config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const char* key : kOverrideKeys) {
    if (cmd->count(std::string("--") + key) > 0) overrides.emplace_back(key, inv.values.at(key));
  }
  return lk::app::apply_overrides(text, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mesh-free local-kernel solver for elliptic PDEs on point clouds"};
  app.require_subcommand(1);
  Invocation solve_inv, study_inv, tune_inv;
  auto* solve = app.add_subcommand("solve", "build the operator and solve (a + L) u = f");
  auto* study = app.add_subcommand("study", "error versus N convergence study");
  auto* tune = app.add_subcommand("tune", "Q(eps) bandwidth and dimension estimate");
  add_config_options(solve, solve_inv);
  add_config_options(study, study_inv);
  add_config_options(tune, tune_inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    lk::app::ResultRecord record;
    if (solve->parsed()) {
      record = lk::app::run_solve(resolve(solve_inv, solve));
    } else if (study->parsed()) {
      record = lk::app::run_study(resolve(study_inv, study));
    } else {
      record = lk::app::run_tune(resolve(tune_inv, tune));
    }
    std::cout << record.to_json() << '\n';
    return 0;
  } catch (const lk::NumericalError& e) {
    std::cerr << "lkpde: numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lkpde: " << e.what() << '\n';
    return 1;
  }
}
