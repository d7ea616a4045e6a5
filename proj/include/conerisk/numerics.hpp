#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <string>

namespace conerisk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Orthogonal/upper-triangular pair with diag(r) > 0.
struct QRFactors {
  Matrix q;
  Matrix r;
};

/// Householder QR of a square matrix, with column signs of Q flipped so the
/// diagonal of R is strictly positive. This makes the factorization unique.
/// Throws SingularMatrixError if min|r_ii| / max|r_ii| < 1e-12.
QRFactors qr_positive_diag(const Matrix& a);

struct NnlsInfo {
  int pivots = 0;
  double dual_tolerance = 0.0;
};

/// Lawson-Hanson active set solver for min ||x - G lambda||, lambda >= 0.
///
/// Dual feasibility is enforced to 1e-10 relative to max(1, ||G|| ||x||).
/// The pivot budget is 10 * k * n (at least 10); exceeding it throws
/// NumericalError. G with zero columns yields an empty lambda.
Vector nnls(const Matrix& g, const Vector& x, NnlsInfo* info = nullptr);

/// True iff v is in the row space of `rows`, i.e. the least-squares residual
/// of v against the rows is below tol * max(1, ||v||). An empty row set
/// contains only the zero vector.
bool rowspace_membership(const Vector& v, const Matrix& rows, double tol = 1e-9);

/// Plain CSV: one row per line, period decimal separator, no header.
/// Blank lines and lines starting with '#' are skipped.
Matrix read_csv_matrix(const std::filesystem::path& path);

/// Reads every number in the file in row-major order, so both a single
/// comma-separated row and a one-value-per-line column are accepted.
Vector read_csv_vector(const std::filesystem::path& path);

/// Parses "1,2.5,-3" (whitespace tolerant). Throws InvalidInput.
Vector parse_vector_list(const std::string& text);

/// Shortest round-trip decimal representation is not required; every number
/// is printed with 17 significant digits.
std::string format_real(double value);

std::string format_vector(const Vector& v, const char* separator = ",");

}  // namespace conerisk
