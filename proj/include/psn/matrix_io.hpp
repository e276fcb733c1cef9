#pragma once

#include <iosfwd>
#include <string>

#include "psn/matrix.hpp"

namespace psn {

enum class MatrixMarketFormat { array, coordinate };

/// Reads a real Matrix Market file (array or coordinate; general or symmetric).
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market(const std::string& path);
/// As above, and requires the result to be square and symmetric.
SymmetricMatrix read_symmetric_matrix_market(const std::string& path);

/// Writes the lower triangle with the "symmetric" qualifier.
void write_matrix_market(std::ostream& out, const SymmetricMatrix& m,
                         MatrixMarketFormat format = MatrixMarketFormat::array);
void write_matrix_market(const std::string& path, const SymmetricMatrix& m,
                         MatrixMarketFormat format = MatrixMarketFormat::array);
/// General (non-symmetric) dense array.
void write_matrix_market(std::ostream& out, const Matrix& m);

/// One value per line; blank lines and lines starting with '#' or '%' are skipped.
Vector read_vector(std::istream& in);
Vector read_vector(const std::string& path);
void write_vector(std::ostream& out, const Vector& v);
void write_vector(const std::string& path, const Vector& v);

}  // namespace psn
