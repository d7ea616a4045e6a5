#include "conerisk/numerics.hpp"

#include "conerisk/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace conerisk {

QRFactors qr_positive_diag(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidInput("qr_positive_diag: matrix must be square");
  }
  if (!a.allFinite()) {
    throw InvalidInput("qr_positive_diag: non-finite entry");
  }
  const Eigen::Index n = a.rows();
  Matrix r = a;
  Matrix q = Matrix::Identity(n, n);

  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    Vector v = r.col(k).tail(n - k);
    const double norm_x = v.norm();
    if (norm_x == 0.0) continue;
    const double alpha = v(0) >= 0.0 ? -norm_x : norm_x;
    v(0) -= alpha;
    const double norm_v = v.norm();
    if (norm_v == 0.0) continue;
    v /= norm_v;
    // Apply H = I - 2 v v^T from the left to R and from the right to Q.
    auto r_block = r.bottomRows(n - k);
    r_block.noalias() -= 2.0 * v * (v.transpose() * r_block);
    auto q_block = q.rightCols(n - k);
    q_block.noalias() -= 2.0 * (q_block * v) * v.transpose();
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) r(i, j) = 0.0;
  }

  double max_diag = 0.0;
  double min_diag = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, std::abs(r(i, i)));
    min_diag = std::min(min_diag, std::abs(r(i, i)));
  }
  if (n > 0 && (max_diag == 0.0 || min_diag < 1e-12 * max_diag)) {
    throw SingularMatrixError("qr_positive_diag: matrix is rank deficient");
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  return {std::move(q), std::move(r)};
}

namespace {

Vector solve_passive(const Matrix& g, const Vector& x, const std::vector<bool>& passive,
                     std::vector<Eigen::Index>& index) {
  index.clear();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    if (passive[static_cast<std::size_t>(j)]) index.push_back(j);
  }
  Matrix sub(g.rows(), static_cast<Eigen::Index>(index.size()));
  for (std::size_t c = 0; c < index.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = g.col(index[c]);
  return sub.colPivHouseholderQr().solve(x);
}

}  // namespace

Vector nnls(const Matrix& g, const Vector& x, NnlsInfo* info) {
  if (g.rows() != x.size()) {
    throw InvalidInput("nnls: dimension mismatch between G and x");
  }
  if (!g.allFinite() || !x.allFinite()) {
    throw InvalidInput("nnls: non-finite input");
  }
  const Eigen::Index k = g.cols();
  const Eigen::Index n = g.rows();
  Vector lambda = Vector::Zero(k);
  if (k == 0) {
    if (info) *info = {};
    return lambda;
  }

  const double col_scale = g.colwise().norm().maxCoeff();
  const double tol = 1e-10 * std::max(1.0, col_scale * x.norm());
  const long cap = std::max<long>(10, 10L * static_cast<long>(k) * static_cast<long>(n));

  std::vector<bool> passive(static_cast<std::size_t>(k), false);
  std::vector<bool> blocked(static_cast<std::size_t>(k), false);
  std::vector<Eigen::Index> index;
  Vector w = g.transpose() * (x - g * lambda);
  long pivots = 0;

  for (;;) {
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (!passive[ju] && !blocked[ju] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    if (++pivots > cap) throw NumericalError("nnls: pivot budget exhausted");
    passive[static_cast<std::size_t>(enter)] = true;

    bool first_inner = true;
    for (;;) {
      const Vector z = solve_passive(g, x, passive, index);
      bool all_positive = true;
      for (Eigen::Index c = 0; c < z.size(); ++c) {
        if (!(z(c) > 0.0)) {
          all_positive = false;
          break;
        }
      }
      if (all_positive) {
        lambda.setZero();
        for (std::size_t c = 0; c < index.size(); ++c) lambda(index[c]) = z(static_cast<Eigen::Index>(c));
        std::fill(blocked.begin(), blocked.end(), false);
        break;
      }

      if (first_inner) {
        const auto pos = std::find(index.begin(), index.end(), enter) - index.begin();
        if (!(z(static_cast<Eigen::Index>(pos)) > 0.0)) {
          // Entering column is numerically dependent on the passive set.
          passive[static_cast<std::size_t>(enter)] = false;
          blocked[static_cast<std::size_t>(enter)] = true;
          break;
        }
      }
      first_inner = false;

      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < index.size(); ++c) {
        const double zc = z(static_cast<Eigen::Index>(c));
        if (zc <= 0.0) {
          const double lc = lambda(index[c]);
          alpha = std::min(alpha, lc / (lc - zc));
        }
      }

      for (std::size_t c = 0; c < index.size(); ++c) {
        const Eigen::Index j = index[c];
        lambda(j) += alpha * (z(static_cast<Eigen::Index>(c)) - lambda(j));
        const double drop = 1e-14 * std::max(1.0, std::abs(z(static_cast<Eigen::Index>(c))));
        if (lambda(j) <= drop) {
          lambda(j) = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      }
      if (++pivots > cap) throw NumericalError("nnls: pivot budget exhausted");
    }
    w = g.transpose() * (x - g * lambda);
  }

  if (info) {
    info->pivots = static_cast<int>(pivots);
    info->dual_tolerance = tol;
  }
  return lambda;
}

bool rowspace_membership(const Vector& v, const Matrix& rows, double tol) {
  const double threshold = tol * std::max(1.0, v.norm());
  if (rows.rows() == 0) return v.norm() <= threshold;
  if (rows.cols() != v.size()) {
    throw InvalidInput("rowspace_membership: dimension mismatch");
  }
  const Matrix basis = rows.transpose();
  const Vector coeff = basis.completeOrthogonalDecomposition().solve(v);
  return (basis * coeff - v).norm() <= threshold;
}

namespace {

double parse_real(std::string_view token, const std::string& where) {
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front()))) token.remove_prefix(1);
  while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) token.remove_suffix(1);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw InvalidInput("cannot parse number '" + std::string(token) + "' in " + where);
  }
  return value;
}

std::vector<double> parse_row(const std::string& line, const std::string& where) {
  std::vector<double> row;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    row.push_back(parse_real(std::string_view(line).substr(start, comma - start), where));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return row;
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open CSV file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    rows.push_back(parse_row(line, path.string()));
  }
  return rows;
}

}  // namespace

Matrix read_csv_matrix(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw InvalidInput("empty CSV file " + path.string());
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw InvalidInput("ragged CSV rows in " + path.string());
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Vector read_csv_vector(const std::filesystem::path& path) {
  std::vector<double> values;
  for (const auto& row : read_rows(path)) values.insert(values.end(), row.begin(), row.end());
  if (values.empty()) throw InvalidInput("empty CSV file " + path.string());
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector parse_vector_list(const std::string& text) {
  std::string trimmed = text;
  std::erase_if(trimmed, [](char c) { return c == '(' || c == ')' || c == '[' || c == ']'; });
  const auto row = parse_row(trimmed, "list '" + text + "'");
  return Eigen::Map<const Vector>(row.data(), static_cast<Eigen::Index>(row.size()));
}

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_vector(const Vector& v, const char* separator) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += separator;
    out += format_real(v(i));
  }
  return out;
}

}  // namespace conerisk
