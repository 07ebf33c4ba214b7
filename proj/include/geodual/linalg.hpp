#ifndef GEODUAL_LINALG_HPP
#define GEODUAL_LINALG_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geodual/rational.hpp"

namespace geodual {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<Rational>;
using Matrix = MatrixX<Rational>;
using Index = Eigen::Index;

Vector zero_vector(Index n);
Vector unit_vector(Index n, Index i);
Vector make_vector(std::initializer_list<Rational> entries);
Matrix make_matrix(std::initializer_list<std::initializer_list<Rational>> rows);
Matrix identity_matrix(Index n);

Rational inner(const Vector& a, const Vector& b);
bool is_zero(const Vector& v);

/// Lexicographic strict order; shorter vectors first.
template <typename Scalar>
bool lex_less(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (b(i) < a(i)) return false;
  }
  return false;
}

struct LexLess {
  template <typename Scalar>
  bool operator()(const VectorX<Scalar>& a, const VectorX<Scalar>& b) const {
    return lex_less(a, b);
  }
};

template <typename Scalar>
bool equal_vectors(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
  return a.size() == b.size() && (a.size() == 0 || a == b);
}

/// "(p1, p2, ...)" with canonical rational rendering.
std::string to_string(const Vector& v);

/// Rows of `m` stacked from a list of vectors (all of length `cols`).
Matrix stack_rows(const std::vector<Vector>& rows, Index cols);

struct RowEchelon {
  Matrix reduced;              ///< reduced row echelon form, zero rows dropped
  std::vector<Index> pivots;   ///< pivot column of each nonzero row
};

RowEchelon row_echelon(Matrix m);
Index rank(const Matrix& m);
Index rank(const std::vector<Vector>& vectors, Index dim);

/// Basis of {x : m x = 0}, one basis vector per column.
Matrix nullspace(const Matrix& m);

/// Some solution of m x = rhs, or nullopt when inconsistent.
std::optional<Vector> solve(const Matrix& m, const Vector& rhs);
std::optional<Matrix> inverse(const Matrix& m);

/// Affine dimension of conv(points) + span(directions); -1 if no points.
Index affine_dimension(const std::vector<Vector>& points, const std::vector<Vector>& directions);

/// Positive multiple of v with coprime integer entries (v unchanged if zero).
Vector primitive_integer(const Vector& v);

/// Orthogonal projection of v onto the orthogonal complement of span(basis).
Vector project_out(const Vector& v, const std::vector<Vector>& basis);

Eigen::VectorXd to_double(const Vector& v);
Eigen::MatrixXd to_double(const Matrix& m);
/// Exact rational image of a finite double vector.
Vector from_double(const Eigen::VectorXd& v);

}  // namespace geodual

#endif  // GEODUAL_LINALG_HPP
