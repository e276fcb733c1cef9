#pragma once

// Problem sources for the CLI: generator specs and files.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psn/libsvm.hpp"
#include "psn/matrix.hpp"
#include "psn/objective.hpp"

namespace psn::cli {

struct QuadraticSource {
  QuadraticObjective objective;
  std::optional<Matrix> data;  ///< A with M = A^T A, when known
  std::string description;
};

/// dense:n,m | sparse:n,m,density | rho:n,rho | tridiag:n,alpha | heat:n[,r]
/// dense and sparse build 1/2 ||A x - y||^2 with A m x n; the others use q ~ N(0, I),
/// except heat whose right-hand side samples cos(pi x / 2L) on the interior of [-L, L].
QuadraticSource generate_quadratic(const std::string& spec, std::uint64_t seed, bool with_optimum = true);

/// M from a Matrix Market file; q from a vector file, or N(0, I) from the seed.
QuadraticSource load_quadratic(const std::string& matrix_path, const std::string& rhs_path, std::uint64_t seed,
                               bool with_optimum = true);

/// ridge:n,d | logistic:n,d. Gaussian features; labels from a hidden Gaussian model.
LibsvmData generate_erm_data(const std::string& spec, std::uint64_t seed);

/// "1,2,4" or "1-4" style lists of positive integers.
std::vector<std::size_t> parse_size_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace psn::cli
