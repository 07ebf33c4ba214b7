#ifndef GEODUAL_POLYHEDRON_HPP
#define GEODUAL_POLYHEDRON_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "geodual/linalg.hpp"

namespace geodual {

/// ⟨normal, x⟩ ≤ offset, or = offset when stored as an equality.
struct Constraint {
  Vector normal;
  Rational offset;

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return equal_vectors(a.normal, b.normal) && a.offset == b.offset;
  }
};

struct HRep {
  Index ambient_dim = 0;
  std::vector<Constraint> inequalities;
  std::vector<Constraint> equalities;

  friend bool operator==(const HRep&, const HRep&) = default;
};

/// conv(vertices) + cone(rays) + span(lines). No vertices means the empty set.
struct VRep {
  Index ambient_dim = 0;
  std::vector<Vector> vertices;
  std::vector<Vector> rays;
  std::vector<Vector> lines;

  bool is_empty() const { return vertices.empty(); }

  friend bool operator==(const VRep& a, const VRep& b);
};

/// Double description. The output is canonical: lines in reduced echelon
/// form scaled to coprime integers, vertices and rays taken modulo the
/// lineality space (orthogonal complement), rays primitive integer, both
/// sorted lexicographically. Infeasible input gives an empty VRep.
VRep hrep_to_vrep(const HRep& h);

/// Irredundant canonical H-representation of conv(V) + cone(R) + span(L).
/// Equalities are in reduced echelon form with coprime integer coefficients
/// and positive leading entry; inequality normals are orthogonal to the
/// equality normals and scaled by a positive factor to coprime integers.
/// The empty set is represented by the single inequality 0 ≤ -1.
HRep vrep_to_hrep(const VRep& v);

/// A convex polyhedron holding both canonical representations.
class Polyhedron {
 public:
  Polyhedron() = default;

  static Polyhedron from_hrep(const HRep& h);
  static Polyhedron from_vrep(const VRep& v);
  static Polyhedron empty(Index n);
  static Polyhedron whole_space(Index n);
  static Polyhedron point(const Vector& x);
  static Polyhedron cone(const std::vector<Vector>& rays, const std::vector<Vector>& lines, Index n);

  const HRep& h() const { return h_; }
  const VRep& v() const { return v_; }
  Index ambient_dim() const { return v_.ambient_dim; }
  bool is_empty() const { return v_.is_empty(); }
  Index dim() const;

  bool contains(const Vector& x) const;
  /// other ⊆ *this.
  bool contains(const Polyhedron& other) const;
  bool in_recession_cone(const Vector& d) const;
  bool is_cone() const;
  bool is_subspace() const;

  /// Indices into h().inequalities that are tight at x.
  std::vector<std::size_t> active_inequalities(const Vector& x) const;

  friend bool operator==(const Polyhedron& a, const Polyhedron& b);

 private:
  HRep h_;
  VRep v_;
};

/// A nonempty face of a polyhedron, identified by its canonical (maximal)
/// set of tight inequalities.
struct FaceDescriptor {
  std::shared_ptr<const Polyhedron> parent;
  std::vector<std::size_t> active_inequalities;
  Index dim = -1;
  VRep vrep;

  Polyhedron as_polyhedron() const { return Polyhedron::from_vrep(vrep); }
};

/// All nonempty faces including p itself, ordered by dimension and then by
/// active set. Empty input yields no faces.
std::vector<FaceDescriptor> enumerate_faces(const Polyhedron& p);

/// Smallest face of *parent containing the nonempty subset `s` (the face
/// whose active set is the set of inequalities tight at a relative-interior
/// point of s). Equals s exactly when s is itself a face.
FaceDescriptor smallest_face_containing(const std::shared_ptr<const Polyhedron>& parent, const Polyhedron& s);

/// Inclusion of faces of the same polyhedron (active-set superset).
bool face_subset(const FaceDescriptor& a, const FaceDescriptor& b);

/// Outer normal cone at x ∈ p. Throws std::invalid_argument if x ∉ p.
Polyhedron normal_cone(const Polyhedron& p, const Vector& x);
/// Cone of feasible directions at x ∈ p. Throws std::invalid_argument if x ∉ p.
Polyhedron tangent_cone(const Polyhedron& p, const Vector& x);
/// {u : ⟨u,x⟩ ≤ 1 for all x ∈ p}.
Polyhedron polar(const Polyhedron& p);
/// Vertex barycenter plus the sum of the canonical rays. Precondition: p nonempty.
Vector relative_interior_point(const Polyhedron& p);
bool in_relative_interior(const Polyhedron& p, const Vector& x);

/// {M x : x ∈ p}.
Polyhedron linear_image(const Matrix& m, const Polyhedron& p);
/// {x : M x ∈ p}.
Polyhedron preimage(const Matrix& m, const Polyhedron& p);
Polyhedron intersect(const Polyhedron& a, const Polyhedron& b);
/// Image under the coordinate projection onto `coords` (in that order).
Polyhedron project(const Polyhedron& p, const std::vector<Index>& coords);

std::string to_string(const HRep& h);
std::string to_string(const VRep& v);

}  // namespace geodual

#endif  // GEODUAL_POLYHEDRON_HPP
