// psn: experiments and rate tables for the parallel stochastic Newton method.

#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "psn/csv.hpp"
#include "psn/error.hpp"

using namespace psn::cli;

namespace {

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--seed", common.seed, "master seed for data and sampling");
  cmd->add_option("--out", common.out, "CSV output path (default stdout)");
  cmd->add_option("--threads", common.threads, "OpenMP threads; results do not depend on it")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--timing", common.timing, "fill the elapsed_seconds column");
}

void add_solve_options(CLI::App* cmd, SolveOptions& o) {
  cmd->add_option("--matrix", o.matrix, "Matrix Market file holding M");
  cmd->add_option("--rhs", o.rhs, "right-hand side q, one value per line (with --matrix)");
  cmd->add_option("--gen", o.gen, "dense:n,m | sparse:n,m,density | rho:n,rho | tridiag:n,alpha | heat:n[,r]");
  cmd->add_option("--scheme", o.scheme, "sampling, e.g. parallel-nice:tau=3,c=4")->capture_default_str();
  cmd->add_option("--c", o.c, "worker counts, e.g. 1,2,4 (default: c from --scheme)");
  cmd->add_option("--b", o.b, "aggregation divisor: auto or a value >= 1")->capture_default_str();
  cmd->add_option("--theta", o.theta, "theta for --b auto: exact, bound or a value")->capture_default_str();
  cmd->add_option("--monte-carlo", o.monte_carlo, "estimate E[(M_S)^-1] from this many samples");
  cmd->add_option("--tol", o.tol, "gradient-norm tolerance")->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "iteration limit")->capture_default_str();
  cmd->add_flag("--cache", o.cache, "pre-factorize every list window");
  cmd->add_flag("--serial", o.serial, "use the serial reference kernels");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel stochastic Newton experiments"};
  app.require_subcommand(1);

  CommonOptions common;
  std::function<int(std::ostream&)> action;

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "minimize a quadratic and write the convergence trace");
  add_common(solve_cmd, common);
  add_solve_options(solve_cmd, solve);
  solve_cmd->callback([&] { action = [&](std::ostream& out) { return cmd_solve(common, solve, out); }; });

  SolveOptions heat;
  heat.gen = "heat:1000";
  heat.scheme = "parallel-list:tau=5";
  heat.c = "1,2,4";
  heat.theta = "";
  heat.cache = true;
  auto* heat_cmd = app.add_subcommand("heat", "solve with the heat-equation generator (theta = 8.4/n by default)");
  add_common(heat_cmd, common);
  add_solve_options(heat_cmd, heat);
  heat_cmd->callback([&] {
    action = [&](std::ostream& out) {
      SolveOptions o = heat;
      if (!o.matrix.empty()) throw psn::DomainError("heat takes --gen heat:n[,r], not --matrix");
      if (o.theta.empty()) {
        const auto comma = o.gen.find(',');
        const auto colon = o.gen.find(':');
        const double n = std::stod(o.gen.substr(colon + 1, comma == std::string::npos ? std::string::npos : comma - colon - 1));
        o.theta = psn::csv_number(8.4 / n);
      }
      return cmd_solve(common, o, out);
    };
  });

  RatesOptions rates;
  auto add_rates = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, common);
    cmd->add_option("--matrix", rates.matrix, "Matrix Market file holding M");
    cmd->add_option("--gen", rates.gen, "dense:n,m | sparse:n,m,density | rho:n,rho | tridiag:n,alpha | heat:n[,r]");
    cmd->add_option("--scheme", rates.scheme, "base sampling")->capture_default_str();
    cmd->add_option("--c", rates.c, "worker counts")->capture_default_str();
    cmd->add_option("--theta", rates.theta, "exact, bound or a value used for b*")->capture_default_str();
    cmd->add_option("--monte-carlo", rates.monte_carlo, "estimate E[(M_S)^-1] from this many samples");
    cmd->callback([&] { action = [&](std::ostream& out) { return cmd_rates(common, rates, out); }; });
  };
  add_rates("rates", "rate constants sigma_1, theta, sigma_p and PCDM sigma_3 over a c grid");
  add_rates("compare-pcdm", "alias of rates");

  RhoOptions rho;
  auto* rho_cmd = app.add_subcommand("rho", "closed-form speedup curves for the rho-matrix under nice sampling");
  add_common(rho_cmd, common);
  rho_cmd->add_option("--n", rho.n, "dimension")->capture_default_str();
  rho_cmd->add_option("--tau", rho.tau, "set size")->capture_default_str();
  rho_cmd->add_option("--rho", rho.rho, "rho values")->capture_default_str();
  rho_cmd->add_option("--c", rho.c, "worker counts")->capture_default_str();
  rho_cmd->add_flag("--check", rho.check, "also enumerate sigma_1 and theta (small n only)");
  rho_cmd->callback([&] { action = [&](std::ostream& out) { return cmd_rho(common, rho, out); }; });

  TridiagOptions tri;
  auto* tri_cmd = app.add_subcommand("tridiag", "exact 2-list theta of T(alpha) against the 2/((1-alpha)n) bound");
  add_common(tri_cmd, common);
  tri_cmd->add_option("--n", tri.n, "dimensions, e.g. 5-64")->capture_default_str();
  tri_cmd->add_option("--alpha", tri.alpha, "alpha values in [0, 0.5]")->capture_default_str();
  tri_cmd->callback([&] { action = [&](std::ostream& out) { return cmd_tridiag(common, tri, out); }; });

  ErmOptions erm;
  auto* erm_cmd = app.add_subcommand("erm", "dual ERM on a LIBSVM file or synthetic data");
  add_common(erm_cmd, common);
  erm_cmd->add_option("--data", erm.data, "LIBSVM dataset");
  erm_cmd->add_option("--gen", erm.gen, "ridge:n,d | logistic:n,d");
  erm_cmd->add_option("--loss", erm.loss, "squared or logistic");
  erm_cmd->add_option("--lambda", erm.lambda, "regularization weight")->capture_default_str();
  erm_cmd->add_option("--smoothing", erm.smoothing, "quadratic smoothing added to the logistic loss")->capture_default_str();
  erm_cmd->add_option("--scheme", erm.scheme, "sampling over datapoints")->capture_default_str();
  erm_cmd->add_option("--c", erm.c, "worker counts")->capture_default_str();
  erm_cmd->add_option("--b", erm.b, "aggregation divisor: auto or a value >= 1")->capture_default_str();
  erm_cmd->add_option("--theta", erm.theta, "theta for --b auto: exact, bound or a value")->capture_default_str();
  erm_cmd->add_option("--monte-carlo", erm.monte_carlo, "estimate E[(X_S)^-1] from this many samples");
  erm_cmd->add_option("--tol", erm.tol, "duality-gap tolerance")->capture_default_str();
  erm_cmd->add_option("--grad-tol", erm.grad_tol, "dual gradient-norm tolerance (0: off)")->capture_default_str();
  erm_cmd->add_option("--max-iter", erm.max_iter, "iteration limit")->capture_default_str();
  erm_cmd->add_option("--record-every", erm.record_every, "trace period")->capture_default_str();
  erm_cmd->add_option("--min-features", erm.min_features, "pad the feature dimension to at least this");
  erm_cmd->add_flag("--serial", erm.serial, "use the serial reference kernels");
  erm_cmd->callback([&] { action = [&](std::ostream& out) { return cmd_erm(common, erm, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (common.out.empty()) return action(std::cout);
    std::ofstream file(common.out);
    if (!file) throw psn::DomainError("cannot open " + common.out + " for writing");
    const int code = action(file);
    file.close();
    if (!file) throw psn::DomainError("failed writing " + common.out);
    return code;
  } catch (const psn::DivergenceError& e) {
    std::cerr << "psn: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "psn: error: " << e.what() << '\n';
    return kExitInput;
  }
}
