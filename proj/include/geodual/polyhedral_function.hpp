#ifndef GEODUAL_POLYHEDRAL_FUNCTION_HPP
#define GEODUAL_POLYHEDRAL_FUNCTION_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "geodual/polyhedron.hpp"

namespace geodual {

/// Raised for functions that are not proper: no affine piece or empty domain.
class ImproperFunction : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// x ↦ ⟨a,x⟩ - b.
struct AffinePiece {
  Vector a;
  Rational b;
  friend bool operator==(const AffinePiece& p, const AffinePiece& q) { return equal_vectors(p.a, q.a) && p.b == q.b; }
};

/// f(x) = max_i (⟨a_i,x⟩ - b_i) + indicator of D = {x : ⟨a_j,x⟩ ≤ b_j}.
///
/// Always canonical: pieces and constraints are read off the canonical
/// H-representation of epi f, so the representation is irredundant and two
/// equal functions have identical pieces and constraints. An implicit
/// equality of the domain appears as a pair of opposite constraints.
class PolyhedralConvexFunction {
 public:
  PolyhedralConvexFunction() = default;

  /// Throws ImproperFunction if `pieces` is empty or the domain is empty.
  static PolyhedralConvexFunction make(Index n, const std::vector<AffinePiece>& pieces,
                                       const std::vector<Constraint>& constraints = {});
  /// Function whose epigraph is `epi` (in R^{n+1}, last coordinate is r).
  static PolyhedralConvexFunction from_epigraph(const Polyhedron& epi);

  Index ambient_dim() const { return n_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Polyhedron& domain() const { return domain_; }
  const Polyhedron& epigraph() const { return epi_; }

  friend bool operator==(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& g) {
    return f.n_ == g.n_ && f.pieces_ == g.pieces_ && f.constraints_ == g.constraints_;
  }

 private:
  Index n_ = 0;
  std::vector<AffinePiece> pieces_;
  std::vector<Constraint> constraints_;
  Polyhedron domain_;
  Polyhedron epi_;
};

/// Indices are 0-based: I into pieces(), J into constraints().
struct ActiveSets {
  std::vector<std::size_t> I;
  std::vector<std::size_t> J;
  friend bool operator==(const ActiveSets&, const ActiveSets&) = default;
};

struct RefinedActiveSets {
  ActiveSets sets;
  Rational t_bar;  ///< active_sets(f, x + t w) == sets for every 0 < t < t_bar
};

/// The critical cone K(x,u); always a polyhedral cone.
struct Indicatrix {
  Polyhedron carrier;
};

ExtendedRational evaluate(const PolyhedralConvexFunction& f, const Vector& x);

/// Throws std::invalid_argument unless x ∈ dom f.
ActiveSets active_sets(const PolyhedralConvexFunction& f, const Vector& x);

/// conv{a_i : i ∈ I(x)} + cone{a_j : j ∈ J(x)}.
Polyhedron subdifferential(const PolyhedralConvexFunction& f, const Vector& x);
bool in_subdifferential(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u);

/// f'(x; w); +inf when w leaves the domain.
ExtendedRational directional_derivative(const PolyhedralConvexFunction& f, const Vector& x, const Vector& w);

/// f* from the generators of epi f: vertices give pieces, rays and lines give
/// domain constraints.
PolyhedralConvexFunction conjugate(const PolyhedralConvexFunction& f);

/// I'(x,w), J'(x,w) and a rational witness t̄. Throws std::invalid_argument
/// unless w is a feasible direction of dom f at x.
RefinedActiveSets refined_active_sets(const PolyhedralConvexFunction& f, const Vector& x, const Vector& w);

/// K(x,u) = {w ∈ T_D(x) : ⟨u,w⟩ = f'(x;w)}, as the polyhedral cone
/// {a_j·w ≤ 0, j ∈ J(x)} ∩ {(a_i - u)·w ≤ 0, i ∈ I(x)}.
/// Throws std::invalid_argument unless u ∈ ∂f(x).
Indicatrix indicatrix(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u);

/// Same cone assembled cell by cell: for every pattern (I', J') with
/// u ∈ conv{a_i : I'} + cone{a_j : J'} whose cell of directions is nonempty,
/// a relative-interior direction ŵ is checked to satisfy u ∈ ∂f(x + t ŵ) at
/// t = t̄/2; the result is the conic hull of the closed cells that pass.
/// Throws std::logic_error if a cell fails its witness test.
Indicatrix indicatrix_by_cells(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u);

/// "max of:" / "subject to:" listing with canonical rationals.
std::string to_string(const PolyhedralConvexFunction& f);

}  // namespace geodual

#endif  // GEODUAL_POLYHEDRAL_FUNCTION_HPP
