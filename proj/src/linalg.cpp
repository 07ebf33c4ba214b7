#include "geodual/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace geodual {

Vector zero_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Rational(0);
  return v;
}

Vector unit_vector(Index n, Index i) {
  Vector v = zero_vector(n);
  v(i) = Rational(1);
  return v;
}

Vector make_vector(std::initializer_list<Rational> entries) {
  Vector v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (const auto& e : entries) v(i++) = e;
  return v;
}

Matrix make_matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != c) throw std::invalid_argument("ragged matrix literal");
    Index j = 0;
    for (const auto& e : row) m(i, j++) = e;
    ++i;
  }
  return m;
}

Matrix identity_matrix(Index n) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = Rational(i == j ? 1 : 0);
  return m;
}

Rational inner(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner product of vectors with different lengths");
  mpq_class s = 0;
  for (Index i = 0; i < a.size(); ++i) s += a(i).raw() * b(i).raw();
  return Rational(s);
}

bool is_zero(const Vector& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (!v(i).is_zero()) return false;
  return true;
}

std::string to_string(const Vector& v) {
  std::string s = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v(i).to_string();
  }
  return s + ")";
}

Matrix stack_rows(const std::vector<Vector>& rows, Index cols) {
  Matrix m(static_cast<Index>(rows.size()), cols);
  for (Index i = 0; i < m.rows(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("stack_rows: length mismatch");
    for (Index j = 0; j < cols; ++j) m(i, j) = rows[i](j);
  }
  return m;
}

RowEchelon row_echelon(Matrix m) {
  RowEchelon out;
  const Index rows = m.rows();
  const Index cols = m.cols();
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index pivot = -1;
    for (Index i = r; i < rows; ++i)
      if (!m(i, c).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r) m.row(pivot).swap(m.row(r));
    const Rational inv = m(r, c).inverse();
    for (Index j = c; j < cols; ++j) m(r, j) *= inv;
    for (Index i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Rational factor = m(i, c);
      for (Index j = c; j < cols; ++j) m(i, j) -= factor * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = m.topRows(r);
  return out;
}

Index rank(const Matrix& m) { return static_cast<Index>(row_echelon(m).pivots.size()); }

Index rank(const std::vector<Vector>& vectors, Index dim) {
  if (vectors.empty()) return 0;
  return rank(stack_rows(vectors, dim));
}

Matrix nullspace(const Matrix& m) {
  const Index n = m.cols();
  const RowEchelon e = row_echelon(m);
  std::vector<bool> is_pivot(n, false);
  for (Index p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (Index free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vector v = unit_vector(n, free);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v(e.pivots[r]) = -e.reduced(static_cast<Index>(r), free);
    basis.push_back(std::move(v));
  }
  Matrix out(n, static_cast<Index>(basis.size()));
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = basis[j];
  return out;
}

std::optional<Vector> solve(const Matrix& m, const Vector& rhs) {
  Matrix aug(m.rows(), m.cols() + 1);
  aug.leftCols(m.cols()) = m;
  aug.col(m.cols()) = rhs;
  const RowEchelon e = row_echelon(aug);
  Vector x = zero_vector(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == m.cols()) return std::nullopt;
    x(e.pivots[r]) = e.reduced(static_cast<Index>(r), m.cols());
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const Index n = m.rows();
  Matrix aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = identity_matrix(n);
  const RowEchelon e = row_echelon(aug);
  if (static_cast<Index>(e.pivots.size()) < n || (n > 0 && e.pivots[n - 1] >= n)) return std::nullopt;
  return Matrix(e.reduced.rightCols(n));
}

Index affine_dimension(const std::vector<Vector>& points, const std::vector<Vector>& directions) {
  if (points.empty()) return -1;
  const Index n = points.front().size();
  std::vector<Vector> span;
  for (std::size_t i = 1; i < points.size(); ++i) span.push_back(points[i] - points[0]);
  span.insert(span.end(), directions.begin(), directions.end());
  return rank(span, n);
}

Vector primitive_integer(const Vector& v) {
  if (is_zero(v)) return v;
  mpz_class lcm_den = 1;
  for (Index i = 0; i < v.size(); ++i) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), v(i).raw().get_den_mpz_t());
  std::vector<mpz_class> ints(static_cast<std::size_t>(v.size()));
  mpz_class g = 0;
  for (Index i = 0; i < v.size(); ++i) {
    ints[i] = v(i).raw().get_num() * (lcm_den / v(i).raw().get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = Rational(mpq_class(ints[i] / g));
  return out;
}

Vector project_out(const Vector& v, const std::vector<Vector>& basis) {
  if (basis.empty()) return v;
  // Solve the Gram system for the coefficients of the projection onto span(basis).
  const Matrix b = stack_rows(basis, v.size());
  const Matrix gram = b * b.transpose();
  const Vector rhs = b * v;
  const auto coeff = solve(gram, rhs);
  if (!coeff) throw std::logic_error("project_out: inconsistent Gram system");
  return v - b.transpose() * (*coeff);
}

Eigen::VectorXd to_double(const Vector& v) {
  Eigen::VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = v(i).to_double();
  return out;
}

Vector from_double(const Eigen::VectorXd& v) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = Rational::from_double(v(i));
  return out;
}

Eigen::MatrixXd to_double(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_double();
  return out;
}

}  // namespace geodual
