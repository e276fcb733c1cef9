#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace psn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNotConverged = 2;

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out;   ///< empty: stdout
  int threads = 0;   ///< 0: OpenMP default
  bool timing = false;
};

struct SolveOptions {
  std::string matrix;
  std::string rhs;
  std::string gen;
  std::string scheme = "parallel-nice:tau=2";
  std::string c;        ///< empty: the c in the scheme string
  std::string b = "auto";
  std::string theta;     ///< required with --b auto when some c > 1
  std::size_t monte_carlo = 0;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  bool cache = false;
  bool serial = false;
};

struct RatesOptions {
  std::string matrix;
  std::string gen;
  std::string scheme = "parallel-nice:tau=2";
  std::string c = "1,2,4,8";
  std::string theta = "exact";
  std::size_t monte_carlo = 0;
};

struct RhoOptions {
  std::size_t n = 1024;
  std::size_t tau = 2;
  std::string rho = "0.1,0.3,0.5,0.7,0.9";
  std::string c = "1,2,4,8,16,32";
  bool check = false;
};

struct TridiagOptions {
  std::string n = "8,16,32,64";
  std::string alpha = "0,0.1,0.2,0.3,0.4,0.5";
};

struct ErmOptions {
  std::string data;
  std::string gen;
  std::string loss;     ///< empty: squared for ridge data, logistic otherwise
  double lambda = 1e-2;
  double smoothing = 1e-3;
  std::string scheme = "parallel-nice:tau=2";
  std::string c = "1";
  std::string b = "auto";
  std::string theta;
  std::size_t monte_carlo = 0;
  double tol = 1e-8;
  double grad_tol = 0.0;
  std::size_t max_iter = 100000;
  std::size_t record_every = 1;
  std::size_t min_features = 0;
  bool serial = false;
};

int cmd_solve(const CommonOptions& common, const SolveOptions& opts, std::ostream& out);
int cmd_rates(const CommonOptions& common, const RatesOptions& opts, std::ostream& out);
int cmd_rho(const CommonOptions& common, const RhoOptions& opts, std::ostream& out);
int cmd_tridiag(const CommonOptions& common, const TridiagOptions& opts, std::ostream& out);
int cmd_erm(const CommonOptions& common, const ErmOptions& opts, std::ostream& out);

}  // namespace psn::cli
