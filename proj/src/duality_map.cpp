#include "geodual/duality_map.hpp"

#include <map>
#include <sstream>

namespace geodual {

namespace {

Vector vertical(Index n) { return unit_vector(n + 1, n); }

KMinimalFace make_face(const std::shared_ptr<const Polyhedron>& parent, const Polyhedron& set, const Vector& witness) {
  KMinimalFace k;
  k.ri_point = relative_interior_point(set);
  k.face.parent = parent;
  k.face.active_inequalities = parent->active_inequalities(k.ri_point);
  k.face.dim = set.dim();
  k.face.vrep = set.v();
  k.graph_points = set.v();
  k.witness_u = witness;
  return k;
}

// {(x, g(x)) : x ∈ ∂g*(ū)}: on ∂g*(ū) the function g is the affine map
// x ↦ ⟨ū,x⟩ - g*(ū), so generators lift one by one.
KMinimalFace lift_subdifferential(const PolyhedralConvexFunction& g, const PolyhedralConvexFunction& g_star,
                                  const Vector& u_bar) {
  const Index n = g.ambient_dim();
  const Polyhedron s = subdifferential(g_star, u_bar);
  const Rational offset = evaluate(g_star, u_bar).value();
  VRep lifted;
  lifted.ambient_dim = n + 1;
  auto lift = [&](const Vector& x, const Rational& r) {
    Vector y(n + 1);
    y << x, r;
    return y;
  };
  for (const auto& v : s.v().vertices) lifted.vertices.push_back(lift(v, inner(u_bar, v) - offset));
  for (const auto& r : s.v().rays) lifted.rays.push_back(lift(r, inner(u_bar, r)));
  for (const auto& l : s.v().lines) lifted.lines.push_back(lift(l, inner(u_bar, l)));
  return make_face(std::make_shared<const Polyhedron>(g.epigraph()), Polyhedron::from_vrep(lifted), u_bar);
}

void require_k_minimal(const KMinimalFace& face, Index n, const char* what) {
  const Polyhedron p = face.as_polyhedron();
  if (p.is_empty() || p.ambient_dim() != n + 1 || p.in_recession_cone(vertical(n)))
    throw std::invalid_argument(std::string(what) + ": face is not K-minimal");
}

std::string point_text(const Vector& v) { return to_string(v); }

}  // namespace

bool same_face(const KMinimalFace& a, const KMinimalFace& b) {
  return a.face.active_inequalities == b.face.active_inequalities && a.face.dim == b.face.dim;
}

std::vector<KMinimalFace> k_minimal_faces(const PolyhedralConvexFunction& f) {
  const Index n = f.ambient_dim();
  std::vector<KMinimalFace> out;
  for (const auto& face : enumerate_faces(f.epigraph())) {
    const Polyhedron p = face.as_polyhedron();
    if (p.in_recession_cone(vertical(n))) continue;
    KMinimalFace k;
    k.face = face;
    k.graph_points = p.v();
    k.ri_point = relative_interior_point(p);
    k.witness_u = relative_interior_point(subdifferential(f, k.ri_point.head(n)));
    out.push_back(std::move(k));
  }
  return out;
}

KMinimalFace psi_at(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& f_star, const Vector& u_bar) {
  return lift_subdifferential(f, f_star, u_bar);
}

KMinimalFace psi(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& f_star,
                 const KMinimalFace& dual_face) {
  const Index n = f.ambient_dim();
  require_k_minimal(dual_face, n, "psi");
  return lift_subdifferential(f, f_star, dual_face.ri_point.head(n));
}

KMinimalFace psi(const PolyhedralConvexFunction& f, const KMinimalFace& dual_face) {
  return psi(f, conjugate(f), dual_face);
}

KMinimalFace psi_star(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& f_star,
                      const KMinimalFace& primal_face) {
  const Index n = f.ambient_dim();
  require_k_minimal(primal_face, n, "psi_star");
  return lift_subdifferential(f_star, f, primal_face.ri_point.head(n));
}

KMinimalFace psi_star(const PolyhedralConvexFunction& f, const KMinimalFace& primal_face) {
  return psi_star(f, conjugate(f), primal_face);
}

std::vector<FaceMapEntry> build_face_map(const PolyhedralConvexFunction& f, const PolyhedralConvexFunction& f_star,
                                         const std::vector<KMinimalFace>& dual_faces) {
  const Index n = f.ambient_dim();
  std::vector<FaceMapEntry> out;
  for (const auto& dual : dual_faces) {
    FaceMapEntry e;
    e.dual_face = dual;
    e.primal_face = psi(f, f_star, dual);
    e.dim_dual = dual.dim();
    e.dim_primal = e.primal_face.dim();
    const Vector x_bar = e.primal_face.ri_point.head(n);
    const Vector u_bar = dual.ri_point.head(n);
    e.primal_indicatrix = indicatrix(f, x_bar, u_bar);
    e.dual_indicatrix = indicatrix(f_star, u_bar, x_bar);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<FaceMapEntry> build_face_map(const PolyhedralConvexFunction& f) {
  const PolyhedralConvexFunction f_star = conjugate(f);
  return build_face_map(f, f_star, k_minimal_faces(f_star));
}

DualityReport verify_duality(const PolyhedralConvexFunction& f) {
  const Index n = f.ambient_dim();
  DualityReport out;
  out.f = f;
  out.f_star = conjugate(f);
  out.primal_faces = k_minimal_faces(f);
  out.dual_faces = k_minimal_faces(out.f_star);
  out.entries = build_face_map(f, out.f_star, out.dual_faces);
  const auto& primal = out.primal_faces;
  const auto& dual = out.dual_faces;
  Report& rep = out.report;

  Check& bic = rep.add("biconjugate");
  bic.expect(conjugate(out.f_star) == f, "conjugate of f* differs from f");

  std::map<std::vector<std::size_t>, std::size_t> primal_index;
  for (std::size_t i = 0; i < primal.size(); ++i) primal_index[primal[i].face.active_inequalities] = i;

  // image[i] = index of Ψ(dual[i]) among the enumerated primal faces
  Check& bij = rep.add("bijection");
  bij.expect(primal.size() == dual.size(), "face counts differ: " + std::to_string(primal.size()) + " primal, " +
                                               std::to_string(dual.size()) + " dual");
  std::vector<std::size_t> image(dual.size(), primal.size());
  std::vector<int> hits(primal.size(), 0);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const KMinimalFace& img = out.entries[i].primal_face;
    auto it = primal_index.find(img.face.active_inequalities);
    const bool found = it != primal_index.end() && primal[it->second].as_polyhedron() == img.as_polyhedron();
    bij.expect(found, "Psi(dual face " + std::to_string(i) + ") is not an enumerated K-minimal face");
    if (!found) continue;
    image[i] = it->second;
    ++hits[it->second];
    bij.expect(same_face(psi_star(f, out.f_star, img), dual[i]),
               "Psi* o Psi differs from the identity at dual face " + std::to_string(i));
  }
  for (std::size_t j = 0; j < primal.size(); ++j) {
    bij.expect(hits[j] == 1, "primal face " + std::to_string(j) + " has " + std::to_string(hits[j]) + " preimages");
    const KMinimalFace back = psi(f, out.f_star, psi_star(f, out.f_star, primal[j]));
    bij.expect(same_face(back, primal[j]), "Psi o Psi* differs from the identity at primal face " + std::to_string(j));
  }

  Check& inc = rep.add("inclusion-reversal");
  for (std::size_t a = 0; a < dual.size(); ++a)
    for (std::size_t b = 0; b < dual.size(); ++b) {
      if (image[a] == primal.size() || image[b] == primal.size()) continue;
      const bool dual_sub = face_subset(dual[a].face, dual[b].face);
      const bool primal_sup = face_subset(primal[image[b]].face, primal[image[a]].face);
      inc.expect(dual_sub == primal_sup, "dual faces " + std::to_string(a) + " <= " + std::to_string(b) +
                                             " is " + (dual_sub ? "true" : "false") + " but image inclusion is " +
                                             (primal_sup ? "true" : "false"));
    }

  Check& dims = rep.add("dimensions");
  Check& ind = rep.add("indicatrix");
  Check& wit = rep.add("witness-independence");
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    const FaceMapEntry& e = out.entries[i];
    const std::string tag = "dual face " + std::to_string(i);
    dims.expect(e.dim_dual + e.dim_primal == n, tag + ": dims " + std::to_string(e.dim_dual) + " + " +
                                                    std::to_string(e.dim_primal) + " != " + std::to_string(n));
    const Polyhedron& kp = e.primal_indicatrix.carrier;
    const Polyhedron& kd = e.dual_indicatrix.carrier;
    ind.expect(kp.is_subspace() && kd.is_subspace(), tag + ": indicatrix is not a subspace");
    ind.expect(polar(kp) == kd, tag + ": indicatrices are not mutually polar");
    ind.expect(kp.dim() == e.dim_primal, tag + ": dim ind f = " + std::to_string(kp.dim()) + ", dim Psi = " +
                                             std::to_string(e.dim_primal));
    const Vector x_bar = e.primal_face.ri_point.head(n);
    const Vector u_bar = e.dual_face.ri_point.head(n);
    ind.expect(indicatrix_by_cells(f, x_bar, u_bar).carrier == kp, tag + ": primal indicatrix routes disagree");
    ind.expect(indicatrix_by_cells(out.f_star, u_bar, x_bar).carrier == kd, tag + ": dual indicatrix routes disagree");

    // the midpoint of a relative-interior point and any face point stays relative-interior
    const Vector other = (u_bar + Vector(e.dual_face.graph_points.vertices.front().head(n))) / Rational(2);
    wit.expect(same_face(psi_at(f, out.f_star, other), e.primal_face),
               tag + ": witnesses " + point_text(u_bar) + " and " + point_text(other) + " give different faces");
  }
  return out;
}

}  // namespace geodual
