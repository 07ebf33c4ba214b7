#ifndef GEODUAL_DUALITY_MAP_HPP
#define GEODUAL_DUALITY_MAP_HPP

#include <vector>

#include "geodual/polyhedral_function.hpp"
#include "geodual/report.hpp"

namespace geodual {

/// A face of an epigraph lying on the graph. The face equals
/// {(x, f(x)) : witness_u ∈ ∂f(x)} = epi f ∩ {(x,r) : ⟨witness_u,x⟩ - r = f*(witness_u)}.
struct KMinimalFace {
  FaceDescriptor face;
  VRep graph_points;  ///< canonical generators of the face
  Vector ri_point;    ///< (x̄, f(x̄)) in the relative interior
  Vector witness_u;   ///< a relative-interior point of ∂f(x̄)

  Index dim() const { return face.dim; }
  Polyhedron as_polyhedron() const { return Polyhedron::from_vrep(graph_points); }
};

/// Faces are identified by their active inequalities in the parent epigraph.
bool same_face(const KMinimalFace& a, const KMinimalFace& b);

struct FaceMapEntry {
  KMinimalFace dual_face;    ///< face of epi f*
  KMinimalFace primal_face;  ///< Ψ(dual_face), face of epi f
  Index dim_dual = 0;
  Index dim_primal = 0;
  Indicatrix primal_indicatrix;  ///< ind f(x̄ | ū)
  Indicatrix dual_indicatrix;    ///< ind f*(ū | x̄)
};

/// Faces of epi f whose recession cone excludes (0,…,0,1), in the order of
/// enumerate_faces.
std::vector<KMinimalFace> k_minimal_faces(const PolyhedralConvexFunction& f);

/// {(x, f(x)) : x ∈ ∂f*(ū)} for ū the relative-interior point of dual_face.
/// Throws std::invalid_argument if dual_face is not K-minimal in epi f*.
KMinimalFace psi(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& f_star,
                 const KMinimalFace& dual_face);
KMinimalFace psi(const PolyhedralConvexFunction& f, const KMinimalFace& dual_face);

/// {(u, f*(u)) : u ∈ ∂f(x̄)} for x̄ the relative-interior point of primal_face.
KMinimalFace psi_star(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& f_star,
                      const KMinimalFace& primal_face);
KMinimalFace psi_star(const PolyhedralConvexFunction& f, const KMinimalFace& primal_face);

/// Ψ evaluated at an explicit point ū of the dual face instead of its
/// stored relative-interior point.
KMinimalFace psi_at(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& f_star, const Vector& u_bar);

struct DualityReport {
  PolyhedralConvexFunction f;
  PolyhedralConvexFunction f_star;
  std::vector<KMinimalFace> primal_faces;
  std::vector<KMinimalFace> dual_faces;
  std::vector<FaceMapEntry> entries;  ///< one per dual face, in dual-face order
  Report report;
};

/// One entry per K-minimal face of epi f*.
std::vector<FaceMapEntry> build_face_map(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& f_star,
                                         const std::vector<KMinimalFace>& dual_faces);
std::vector<FaceMapEntry> build_face_map(const PolyhedralConvexFunction& f);

/// Checks: biconjugate, bijection, inclusion-reversal, dimensions,
/// indicatrix, witness-independence.
DualityReport verify_duality(const PolyhedralConvexFunction& f);

}  // namespace geodual

#endif  // GEODUAL_DUALITY_MAP_HPP
