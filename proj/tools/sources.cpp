#include "sources.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "psn/error.hpp"
#include "psn/matrix_io.hpp"
#include "psn/sampling.hpp"

namespace psn::cli {

namespace {

struct GenSpec {
  std::string kind;
  std::vector<std::string> args;
};

GenSpec split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0) {
    throw DomainError("generator '" + spec + "' must look like kind:args");
  }
  GenSpec out{spec.substr(0, colon), {}};
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) out.args.push_back(item);
  return out;
}

std::size_t to_size(const std::string& text, const std::string& what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
    throw DomainError(what + ": '" + text + "' is not a positive integer");
  }
  return v;
}

double to_double(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw DomainError(what + ": '" + text + "' is not a number");
  }
  return v;
}

void expect_args(const GenSpec& g, std::size_t lo, std::size_t hi, const std::string& usage) {
  if (g.args.size() < lo || g.args.size() > hi) throw DomainError("generator usage: " + usage);
}

// Data engines are seeded apart from the sampling stream of the same master seed.
std::mt19937_64 data_engine(std::uint64_t seed) { return SeedStream(seed ^ 0x6a09e667f3bcc909ULL).engine(); }

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& eng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(eng);
  }
  return m;
}

Vector gaussian(Eigen::Index n, std::mt19937_64& eng) { return gaussian(n, 1, eng).col(0); }

}  // namespace

QuadraticSource generate_quadratic(const std::string& spec, std::uint64_t seed, bool with_optimum) {
  const GenSpec g = split_spec(spec);
  auto eng = data_engine(seed);
  if (g.kind == "dense" || g.kind == "sparse") {
    const bool sparse = g.kind == "sparse";
    expect_args(g, sparse ? 3 : 2, sparse ? 3 : 2, sparse ? "sparse:n,m,density" : "dense:n,m");
    const auto n = static_cast<Eigen::Index>(to_size(g.args[0], "n"));
    const auto m = static_cast<Eigen::Index>(to_size(g.args[1], "m"));
    Matrix a = gaussian(m, n, eng);
    if (sparse) {
      const double density = to_double(g.args[2], "density");
      if (!(density > 0.0 && density <= 1.0)) throw DomainError("density must lie in (0, 1]");
      std::bernoulli_distribution keep(density);
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
          if (!keep(eng)) a(i, j) = 0.0;
        }
      }
    }
    const Vector y = gaussian(m, eng);
    QuadraticObjective obj = QuadraticObjective::least_squares(a, y, with_optimum);
    return {std::move(obj), std::move(a), spec};
  }
  if (g.kind == "rho") {
    expect_args(g, 2, 2, "rho:n,rho");
    const std::size_t n = to_size(g.args[0], "n");
    SymmetricMatrix m = make_rho_matrix(n, to_double(g.args[1], "rho"));
    return {QuadraticObjective(std::move(m), gaussian(static_cast<Eigen::Index>(n), eng), 0.0, with_optimum), {}, spec};
  }
  if (g.kind == "tridiag") {
    expect_args(g, 2, 2, "tridiag:n,alpha");
    const std::size_t n = to_size(g.args[0], "n");
    SymmetricMatrix m = make_tridiagonal(n, to_double(g.args[1], "alpha"));
    return {QuadraticObjective(std::move(m), gaussian(static_cast<Eigen::Index>(n), eng), 0.0, with_optimum), {}, spec};
  }
  if (g.kind == "heat") {
    expect_args(g, 1, 2, "heat:n[,r]");
    const std::size_t n = to_size(g.args[0], "n");
    const double r = g.args.size() > 1 ? to_double(g.args[1], "r") : 0.1;
    SymmetricMatrix m = make_heat_matrix(n, r);
    Vector q(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      // interior point x_i of [-1, 1]; L = 1
      const double x = -1.0 + 2.0 * static_cast<double>(i + 1) / static_cast<double>(n + 1);
      q(static_cast<Eigen::Index>(i)) = std::cos(std::numbers::pi * x / 2.0);
    }
    return {QuadraticObjective(std::move(m), std::move(q), 0.0, with_optimum), {}, spec};
  }
  throw DomainError("unknown generator '" + g.kind + "' (dense, sparse, rho, tridiag, heat)");
}

QuadraticSource load_quadratic(const std::string& matrix_path, const std::string& rhs_path, std::uint64_t seed,
                               bool with_optimum) {
  SymmetricMatrix m = read_symmetric_matrix_market(matrix_path);
  Vector q;
  if (!rhs_path.empty()) {
    q = read_vector(rhs_path);
  } else {
    auto eng = data_engine(seed);
    q = gaussian(static_cast<Eigen::Index>(m.dim()), eng);
  }
  if (static_cast<std::size_t>(q.size()) != m.dim()) throw DomainError("right-hand side length does not match the matrix");
  return {QuadraticObjective(std::move(m), std::move(q), 0.0, with_optimum), {}, matrix_path};
}

LibsvmData generate_erm_data(const std::string& spec, std::uint64_t seed) {
  const GenSpec g = split_spec(spec);
  if (g.kind != "ridge" && g.kind != "logistic") {
    throw DomainError("unknown ERM generator '" + g.kind + "' (ridge, logistic)");
  }
  expect_args(g, 2, 2, g.kind + ":n,d");
  const auto n = static_cast<Eigen::Index>(to_size(g.args[0], "n"));
  const auto d = static_cast<Eigen::Index>(to_size(g.args[1], "d"));
  auto eng = data_engine(seed);
  LibsvmData out;
  out.features = gaussian(d, n, eng);
  const Vector truth = gaussian(d, eng);
  const Vector noise = gaussian(n, eng);
  const Vector score = out.features.transpose() * truth + 0.1 * noise;
  if (g.kind == "ridge") {
    out.labels = score;
  } else {
    out.labels = score.unaryExpr([](double s) { return s >= 0 ? 1.0 : -1.0; });
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const std::size_t lo = to_size(item.substr(0, dash), "list");
      const std::size_t hi = to_size(item.substr(dash + 1), "list");
      if (hi < lo) throw DomainError("empty range '" + item + "'");
      for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(to_size(item, "list"));
    }
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(item, "list"));
  if (out.empty()) throw DomainError("empty list");
  return out;
}

}  // namespace psn::cli
