#pragma once

#include <filesystem>
#include <iosfwd>

#include "psn/erm.hpp"

namespace psn {

struct LibsvmData {
  Matrix features;  ///< d x n, one datapoint per column
  Vector labels;    ///< raw labels as written
};

/// "label idx:value idx:value ..." with 1-based, strictly increasing indices per line.
/// Blank lines and '#' comments are skipped. Errors name the offending line.
LibsvmData read_libsvm(std::istream& in, std::size_t min_features = 0);
LibsvmData read_libsvm(const std::filesystem::path& path, std::size_t min_features = 0);

/// Logistic labels: the larger of two distinct raw values becomes +1, the other -1.
/// Values already in {-1, +1} are kept. More than two distinct labels is an error.
Vector binary_labels(const Vector& raw);

ErmProblem make_erm_problem(LibsvmData data, LossKind loss, double lambda, double smoothing = 1e-3);

}  // namespace psn
