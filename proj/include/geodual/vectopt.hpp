#ifndef GEODUAL_VECTOPT_HPP
#define GEODUAL_VECTOPT_HPP

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geodual/polyhedral_function.hpp"
#include "geodual/report.hpp"

namespace geodual {

/// The feasible set {x : Ax ≥ b} is empty.
class InfeasibleProblem : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// k is not in the relative interior of the ordering cone.
class NotRelativeInterior : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Minimize Γx over {x ∈ R^m : Ax ≥ b} with respect to the cone C ⊆ R^q.
struct VopInstance {
  Matrix gamma;  ///< q × m
  Matrix A;      ///< p × m
  Vector b;      ///< length p
  Polyhedron cone_C;
  Vector k;      ///< length q, k ∈ ri C
  Index q() const { return gamma.rows(); }
  Index m() const { return gamma.cols(); }
};

/// Upper image P, dual image D and the transformation data linking them.
/// epi f = T⁻¹(P) with T = (E | k), and D = -epi f*.
struct ImagePair {
  VopInstance vop;
  Matrix E;      ///< q × (q-1)
  Matrix T;      ///< q × q
  Matrix T_inv;
  bool standard_basis = true;  ///< E = first q-1 unit vectors, k_q = 1
  Polyhedron P;
  Polyhedron D;
  PolyhedralConvexFunction f;
  PolyhedralConvexFunction f_star;

  Index q() const { return vop.q(); }
};

/// k as a strictly positive combination of all generators of C, decided by an
/// LP maximizing the smallest coefficient.
bool in_relative_interior_of_cone(const Polyhedron& cone, const Vector& k);

/// inf{r : r k - y ∈ C}; +inf when no r works. Requires k ∈ ri C.
ExtendedRational scalarize_phi(const Polyhedron& cone, const Vector& k, const Vector& y);

/// Validates the instance and builds P, f, f* and D. With no basis the
/// standard E is used and k_q = 1 is required.
/// Throws InfeasibleProblem (X empty), NotRelativeInterior (k ∉ ri C),
/// ImproperFunction (P = R^q) and std::invalid_argument for malformed data.
ImagePair build_images(const VopInstance& vop, const std::optional<Matrix>& basis_E = std::nullopt);

/// {(c*_1..c*_{q-1}, bᵀu - r) : c* ∈ C⁺, u ≥ 0, Aᵀu = Γᵀc*, kᵀc* = 1, r ≥ 0}.
/// Only defined for the standard basis.
Polyhedron dual_image_by_lp_duality(const VopInstance& vop);

/// (v_1..v_{q-1}, 1) T⁻¹ y - v_q.
Rational coupling_psi(const ImagePair& pair, const Vector& y, const Vector& v);
/// Σ_{i<q} y_i v_i + y_q (1 - Σ_{i<q} k_i v_i) - v_q (standard basis only).
Rational coupling_psi_expanded(const Vector& k, const Vector& y, const Vector& v);

/// y ∈ P and no y' ∈ P with y - y' ∈ ri C, by an LP maximizing the smallest
/// generator coefficient of y - y'.
bool is_relatively_minimal(const ImagePair& pair, const Vector& y);

/// Faces of P whose recession cone excludes k, in enumerate_faces order.
std::vector<FaceDescriptor> relatively_minimal_faces(const ImagePair& pair);
/// Faces of D whose recession cone excludes -e_q, in enumerate_faces order.
std::vector<FaceDescriptor> k_maximal_faces(const ImagePair& pair);

/// T[Ψ(-F*)] as a face of P. Throws std::invalid_argument unless the face is
/// K-maximal in D.
FaceDescriptor psi_hat(const ImagePair& pair, const FaceDescriptor& dual_face);
/// -Ψ*(T⁻¹ F) as a face of D. Throws std::invalid_argument unless the face
/// is relatively minimal in P.
FaceDescriptor psi_hat_inverse(const ImagePair& pair, const FaceDescriptor& primal_face);
/// P ∩ {y : ψ(y,v) = 0 for all v ∈ F*}, from the generators of F*.
Polyhedron psi_hat_by_hyperplanes(const ImagePair& pair, const FaceDescriptor& dual_face);

struct NormalVectors {
  Vector eta;       ///< -T^{-T}(v_1..v_{q-1}, 1), a normal of P at y
  Vector eta_star;  ///< (-T̃⁻¹ y, 1), a normal of D at v
};
/// Throws std::invalid_argument unless v ∈ D, y ∈ P and ψ(y,v) = 0.
NormalVectors normal_vectors(const ImagePair& pair, const Vector& v, const Vector& y);

struct ImageIndicatrices {
  Indicatrix ind_P;  ///< ind f(T̃⁻¹y | Eᵀη)
  Indicatrix ind_D;  ///< ind f*(-(v_1..v_{q-1}) | -(η*_1..η*_{q-1}))
};
/// Throws std::invalid_argument naming the first violated precondition.
ImageIndicatrices image_indicatrices(const ImagePair& pair, const Vector& y, const Vector& eta, const Vector& v,
                                     const Vector& eta_star);

struct FacePairRow {
  std::size_t dual_id = 0;    ///< index into k_maximal_faces
  std::size_t primal_id = 0;  ///< index into relatively_minimal_faces
  Index dim_dual = 0;
  Index dim_primal = 0;
  Vector witness_v;  ///< relative-interior point of the dual face
  Vector witness_y;  ///< relative-interior point of the primal face
};

struct VopReport {
  std::vector<FaceDescriptor> dual_faces;
  std::vector<FaceDescriptor> primal_faces;
  std::vector<FacePairRow> rows;  ///< sorted by dual_id
  Report report;
};

/// Checks: bijection, inclusion-reversal, hyperplane-form, dimensions,
/// indicatrix, weak-duality, dual-image, rmin.
VopReport verify_vop_duality(const ImagePair& pair);

}  // namespace geodual

#endif  // GEODUAL_VECTOPT_HPP
