#include "geodual/vectopt.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "geodual/duality_map.hpp"
#include "geodual/lp.hpp"

namespace geodual {

namespace {

std::vector<Vector> cone_generators(const Polyhedron& cone) {
  std::vector<Vector> g = cone.v().rays;
  for (const auto& l : cone.v().lines) {
    g.push_back(l);
    g.push_back(-l);
  }
  return g;
}

Matrix negation(Index n) { return Matrix(-identity_matrix(n)); }

Vector join(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

// (v_1..v_{q-1}, 1)
Vector hat_one(const Vector& v) {
  Vector w = v;
  w(v.size() - 1) = Rational(1);
  return w;
}

Polyhedron upper_image(const VopInstance& vop) {
  const Index m = vop.m();
  const Index q = vop.q();
  // {(x, y) : Ax ≥ b, y - Γx ∈ C}, projected onto y
  HRep lifted;
  lifted.ambient_dim = m + q;
  for (Index i = 0; i < vop.A.rows(); ++i)
    lifted.inequalities.push_back({join(Vector(-vop.A.row(i).transpose()), zero_vector(q)), -vop.b(i)});
  auto cone_row = [&](const Vector& n) { return join(Vector(-(vop.gamma.transpose() * n)), n); };
  for (const auto& c : vop.cone_C.h().inequalities) lifted.inequalities.push_back({cone_row(c.normal), Rational(0)});
  for (const auto& c : vop.cone_C.h().equalities) lifted.equalities.push_back({cone_row(c.normal), Rational(0)});
  std::vector<Index> coords;
  for (Index j = 0; j < q; ++j) coords.push_back(m + j);
  return project(Polyhedron::from_hrep(lifted), coords);
}

bool is_face_of_type(const Polyhedron& face, const Vector& forbidden) {
  return !face.is_empty() && !face.in_recession_cone(forbidden);
}

std::vector<FaceDescriptor> faces_excluding(const Polyhedron& p, const Vector& forbidden) {
  std::vector<FaceDescriptor> out;
  for (auto& face : enumerate_faces(p))
    if (is_face_of_type(face.as_polyhedron(), forbidden)) out.push_back(std::move(face));
  return out;
}

Vector minus_e_q(Index q) { return Vector(-unit_vector(q, q - 1)); }

}  // namespace

bool in_relative_interior_of_cone(const Polyhedron& cone, const Vector& k) {
  if (k.size() != cone.ambient_dim()) throw std::invalid_argument("cone and vector lengths differ");
  const auto gens = cone_generators(cone);
  if (gens.empty()) return is_zero(k);
  const Index q = cone.ambient_dim();
  const Index g = static_cast<Index>(gens.size());
  // variables (λ_1..λ_g, τ): Σ λ_i g_i = k, λ_i ≥ τ, τ ≤ 1
  HRep h;
  h.ambient_dim = g + 1;
  for (Index r = 0; r < q; ++r) {
    Vector row = zero_vector(g + 1);
    for (Index i = 0; i < g; ++i) row(i) = gens[static_cast<std::size_t>(i)](r);
    h.equalities.push_back({row, k(r)});
  }
  for (Index i = 0; i < g; ++i) {
    Vector row = zero_vector(g + 1);
    row(i) = Rational(-1);
    row(g) = Rational(1);
    h.inequalities.push_back({row, Rational(0)});
  }
  h.inequalities.push_back({unit_vector(g + 1, g), Rational(1)});
  const LpResult r = solve_lp(unit_vector(g + 1, g), h, Sense::maximize);
  return r.status == LpStatus::optimal && r.value.sign() > 0;
}

ExtendedRational scalarize_phi(const Polyhedron& cone, const Vector& k, const Vector& y) {
  if (cone.h().inequalities.empty()) throw std::invalid_argument("scalarize_phi: cone is a linear subspace");
  for (const auto& e : cone.h().equalities) {
    if (!inner(e.normal, k).is_zero()) throw std::invalid_argument("scalarize_phi: k is not in the cone");
    if (!inner(e.normal, y).is_zero()) return ExtendedRational::infinity();
  }
  // r k - y ∈ C  ⟺  r ⟨n,k⟩ ≤ ⟨n,y⟩ for every facet normal n, with ⟨n,k⟩ < 0
  std::optional<Rational> best;
  for (const auto& c : cone.h().inequalities) {
    const Rational nk = inner(c.normal, k);
    if (nk.sign() >= 0) throw std::invalid_argument("scalarize_phi: k is not in the relative interior");
    const Rational r = inner(c.normal, y) / nk;
    if (!best || r > *best) best = r;
  }
  return ExtendedRational(*best);
}

ImagePair build_images(const VopInstance& vop, const std::optional<Matrix>& basis_E) {
  const Index q = vop.q();
  const Index m = vop.m();
  if (q < 2) throw std::invalid_argument("at least two objectives are required");
  if (m < 1) throw std::invalid_argument("at least one decision variable is required");
  if (vop.A.cols() != m || vop.A.rows() != vop.b.size())
    throw std::invalid_argument("feasible set data has inconsistent sizes");
  if (vop.k.size() != q || vop.cone_C.ambient_dim() != q)
    throw std::invalid_argument("ordering cone data has inconsistent sizes");
  if (!vop.cone_C.is_cone()) throw std::invalid_argument("ordering cone is not a cone");
  if (vop.cone_C.is_subspace()) throw std::invalid_argument("ordering cone is a linear subspace");
  HRep x;
  x.ambient_dim = m;
  for (Index i = 0; i < vop.A.rows(); ++i) x.inequalities.push_back({Vector(-vop.A.row(i).transpose()), -vop.b(i)});
  if (!is_feasible(x)) throw InfeasibleProblem("feasible set is empty");
  if (!in_relative_interior_of_cone(vop.cone_C, vop.k)) throw NotRelativeInterior("k is not in ri C");

  ImagePair pair;
  pair.vop = vop;
  pair.standard_basis = !basis_E.has_value();
  if (basis_E) {
    if (basis_E->rows() != q || basis_E->cols() != q - 1) throw std::invalid_argument("basis E must be q x (q-1)");
    pair.E = *basis_E;
  } else {
    if (vop.k(q - 1) != Rational(1)) throw std::invalid_argument("the standard basis requires k_q = 1");
    pair.E = Matrix::Zero(q, q - 1);
    for (Index i = 0; i < q - 1; ++i) pair.E(i, i) = Rational(1);
  }
  pair.T.resize(q, q);
  pair.T << pair.E, vop.k;
  const auto inv = inverse(pair.T);
  if (!inv) throw std::invalid_argument("T = (E | k) is singular");
  pair.T_inv = *inv;

  pair.P = upper_image(vop);
  if (pair.P == Polyhedron::whole_space(q)) throw ImproperFunction("upper image is the whole space");
  pair.f = PolyhedralConvexFunction::from_epigraph(preimage(pair.T, pair.P));
  pair.f_star = conjugate(pair.f);
  pair.D = pair.standard_basis ? dual_image_by_lp_duality(vop) : linear_image(negation(q), pair.f_star.epigraph());
  return pair;
}

Polyhedron dual_image_by_lp_duality(const VopInstance& vop) {
  const Index q = vop.q();
  const Index p = vop.A.rows();
  const Index m = vop.m();
  const Index n = q + p + 1;  // (c*, u, r)
  auto var = [&](Index i, const Rational& c) {
    Vector v = zero_vector(n);
    v(i) = c;
    return v;
  };
  HRep h;
  h.ambient_dim = n;
  for (const auto& g : vop.cone_C.v().rays) {
    Vector row = zero_vector(n);
    row.head(q) = -g;
    h.inequalities.push_back({row, Rational(0)});
  }
  for (const auto& l : vop.cone_C.v().lines) {
    Vector row = zero_vector(n);
    row.head(q) = l;
    h.equalities.push_back({row, Rational(0)});
  }
  for (Index i = 0; i < p; ++i) h.inequalities.push_back({var(q + i, Rational(-1)), Rational(0)});
  h.inequalities.push_back({var(q + p, Rational(-1)), Rational(0)});
  for (Index j = 0; j < m; ++j) {
    Vector row = zero_vector(n);
    row.head(q) = -vop.gamma.col(j);
    row.segment(q, p) = vop.A.col(j);
    h.equalities.push_back({row, Rational(0)});
  }
  Vector normal = zero_vector(n);
  normal.head(q) = vop.k;
  h.equalities.push_back({normal, Rational(1)});

  Matrix map = Matrix::Zero(q, n);
  for (Index i = 0; i < q - 1; ++i) map(i, i) = Rational(1);
  map.row(q - 1).segment(q, p) = vop.b.transpose();
  map(q - 1, q + p) = Rational(-1);
  return linear_image(map, Polyhedron::from_hrep(h));
}

Rational coupling_psi(const ImagePair& pair, const Vector& y, const Vector& v) {
  const Index q = pair.q();
  if (y.size() != q || v.size() != q) throw std::invalid_argument("coupling_psi: dimension mismatch");
  return inner(hat_one(v), Vector(pair.T_inv * y)) - v(q - 1);
}

Rational coupling_psi_expanded(const Vector& k, const Vector& y, const Vector& v) {
  const Index q = k.size();
  Rational sum(0), weight(1);
  for (Index i = 0; i < q - 1; ++i) {
    sum += y(i) * v(i);
    weight -= k(i) * v(i);
  }
  return sum + y(q - 1) * weight - v(q - 1);
}

bool is_relatively_minimal(const ImagePair& pair, const Vector& y) {
  if (!pair.P.contains(y)) return false;
  const Index q = pair.q();
  const auto gens = cone_generators(pair.vop.cone_C);
  const Index g = static_cast<Index>(gens.size());
  const Index n = q + g + 1;  // (y', λ, τ)
  HRep h;
  h.ambient_dim = n;
  for (const auto& c : pair.P.h().inequalities) {
    Vector row = zero_vector(n);
    row.head(q) = c.normal;
    h.inequalities.push_back({row, c.offset});
  }
  for (const auto& c : pair.P.h().equalities) {
    Vector row = zero_vector(n);
    row.head(q) = c.normal;
    h.equalities.push_back({row, c.offset});
  }
  // y' + Σ λ_i g_i = y
  for (Index r = 0; r < q; ++r) {
    Vector row = zero_vector(n);
    row(r) = Rational(1);
    for (Index i = 0; i < g; ++i) row(q + i) = gens[static_cast<std::size_t>(i)](r);
    h.equalities.push_back({row, y(r)});
  }
  for (Index i = 0; i < g; ++i) {
    Vector row = zero_vector(n);
    row(q + i) = Rational(-1);
    row(n - 1) = Rational(1);
    h.inequalities.push_back({row, Rational(0)});
  }
  h.inequalities.push_back({unit_vector(n, n - 1), Rational(1)});
  const LpResult r = solve_lp(unit_vector(n, n - 1), h, Sense::maximize);
  return r.status == LpStatus::optimal && r.value.sign() <= 0;
}

std::vector<FaceDescriptor> relatively_minimal_faces(const ImagePair& pair) {
  return faces_excluding(pair.P, pair.vop.k);
}

std::vector<FaceDescriptor> k_maximal_faces(const ImagePair& pair) { return faces_excluding(pair.D, minus_e_q(pair.q())); }

FaceDescriptor psi_hat(const ImagePair& pair, const FaceDescriptor& dual_face) {
  const Index q = pair.q();
  const Polyhedron face = dual_face.as_polyhedron();
  if (!is_face_of_type(face, minus_e_q(q)) || !pair.D.contains(face))
    throw std::invalid_argument("psi_hat: face is not K-maximal in D");
  const Vector u = relative_interior_point(linear_image(negation(q), face)).head(q - 1);
  const Polyhedron lifted = psi_at(pair.f, pair.f_star, u).as_polyhedron();
  return smallest_face_containing(std::make_shared<const Polyhedron>(pair.P), linear_image(pair.T, lifted));
}

FaceDescriptor psi_hat_inverse(const ImagePair& pair, const FaceDescriptor& primal_face) {
  const Index q = pair.q();
  const Polyhedron face = primal_face.as_polyhedron();
  if (!is_face_of_type(face, pair.vop.k) || !pair.P.contains(face))
    throw std::invalid_argument("psi_hat_inverse: face is not relatively minimal in P");
  const Vector z = relative_interior_point(linear_image(pair.T_inv, face)).head(q - 1);
  const Polyhedron lifted = psi_at(pair.f_star, pair.f, z).as_polyhedron();
  return smallest_face_containing(std::make_shared<const Polyhedron>(pair.D), linear_image(negation(q), lifted));
}

Polyhedron psi_hat_by_hyperplanes(const ImagePair& pair, const FaceDescriptor& dual_face) {
  const Index q = pair.q();
  const Polyhedron face = dual_face.as_polyhedron();
  HRep h = pair.P.h();
  // ψ(y,v) = 0 at every vertex; its linear part vanishes along rays and lines
  for (const auto& v : face.v().vertices) h.equalities.push_back({Vector(pair.T_inv.transpose() * hat_one(v)), v(q - 1)});
  auto linear_part = [&](const Vector& d) {
    Vector w = d;
    w(q - 1) = Rational(0);
    h.equalities.push_back({Vector(pair.T_inv.transpose() * w), d(q - 1)});
  };
  for (const auto& d : face.v().rays) linear_part(d);
  for (const auto& d : face.v().lines) linear_part(d);
  return Polyhedron::from_hrep(h);
}

NormalVectors normal_vectors(const ImagePair& pair, const Vector& v, const Vector& y) {
  const Index q = pair.q();
  if (!pair.D.contains(v)) throw std::invalid_argument("normal_vectors: v is not in D");
  if (!pair.P.contains(y)) throw std::invalid_argument("normal_vectors: y is not in P");
  if (!coupling_psi(pair, y, v).is_zero()) throw std::invalid_argument("normal_vectors: psi(y,v) != 0");
  NormalVectors out;
  out.eta = -(pair.T_inv.transpose() * hat_one(v));
  out.eta_star.resize(q);
  out.eta_star << Vector(-(pair.T_inv.topRows(q - 1) * y)), Rational(1);
  return out;
}

ImageIndicatrices image_indicatrices(const ImagePair& pair, const Vector& y, const Vector& eta, const Vector& v,
                                     const Vector& eta_star) {
  const Index q = pair.q();
  if (inner(eta, pair.vop.k) != Rational(-1)) throw std::invalid_argument("image_indicatrices: <eta,k> != -1");
  if (!pair.P.contains(y) || !normal_cone(pair.P, y).contains(eta))
    throw std::invalid_argument("image_indicatrices: eta is not in N_P(y)");
  if (eta_star(q - 1) != Rational(1)) throw std::invalid_argument("image_indicatrices: eta*_q != 1");
  if (!pair.D.contains(v) || !normal_cone(pair.D, v).contains(eta_star))
    throw std::invalid_argument("image_indicatrices: eta* is not in N_D(v)");
  const Vector z = pair.T_inv.topRows(q - 1) * y;
  const Vector u = pair.E.transpose() * eta;
  ImageIndicatrices out;
  out.ind_P = indicatrix(pair.f, z, u);
  out.ind_D = indicatrix(pair.f_star, Vector(-v.head(q - 1)), Vector(-eta_star.head(q - 1)));
  return out;
}

VopReport verify_vop_duality(const ImagePair& pair) {
  const Index q = pair.q();
  VopReport out;
  out.dual_faces = k_maximal_faces(pair);
  out.primal_faces = relatively_minimal_faces(pair);
  const auto& dual = out.dual_faces;
  const auto& primal = out.primal_faces;
  Report& rep = out.report;

  std::map<std::vector<std::size_t>, std::size_t> primal_index, dual_index;
  for (std::size_t j = 0; j < primal.size(); ++j) primal_index[primal[j].active_inequalities] = j;
  for (std::size_t i = 0; i < dual.size(); ++i) dual_index[dual[i].active_inequalities] = i;
  std::vector<Polyhedron> primal_sets, dual_sets;
  for (const auto& f : primal) primal_sets.push_back(f.as_polyhedron());
  for (const auto& f : dual) dual_sets.push_back(f.as_polyhedron());

  Check& bij = rep.add("bijection");
  bij.expect(primal.size() == dual.size(), "face counts differ: " + std::to_string(dual.size()) + " dual, " +
                                               std::to_string(primal.size()) + " primal");
  std::vector<std::size_t> image(dual.size(), primal.size());
  std::vector<int> hits(primal.size(), 0);
  for (std::size_t i = 0; i < dual.size(); ++i) {
    const FaceDescriptor img = psi_hat(pair, dual[i]);
    auto it = primal_index.find(img.active_inequalities);
    const bool found = it != primal_index.end() && primal_sets[it->second] == img.as_polyhedron();
    bij.expect(found, "image of dual face " + std::to_string(i) + " is not a relatively minimal face");
    if (!found) continue;
    image[i] = it->second;
    ++hits[it->second];
    bij.expect(psi_hat_inverse(pair, img).active_inequalities == dual[i].active_inequalities,
               "inverse map fails to return dual face " + std::to_string(i));
  }
  for (std::size_t j = 0; j < primal.size(); ++j) {
    bij.expect(hits[j] == 1, "primal face " + std::to_string(j) + " has " + std::to_string(hits[j]) + " preimages");
    const FaceDescriptor back = psi_hat_inverse(pair, primal[j]);
    auto it = dual_index.find(back.active_inequalities);
    bij.expect(it != dual_index.end() && image[it->second] == j,
               "map fails to return primal face " + std::to_string(j) + " from its inverse image");
  }

  Check& inc = rep.add("inclusion-reversal");
  for (std::size_t a = 0; a < dual.size(); ++a)
    for (std::size_t b = 0; b < dual.size(); ++b) {
      if (image[a] == primal.size() || image[b] == primal.size()) continue;
      const bool sub = face_subset(dual[a], dual[b]);
      inc.expect(sub == face_subset(primal[image[b]], primal[image[a]]),
                 "dual faces " + std::to_string(a) + ", " + std::to_string(b) + " break inclusion reversal");
    }

  Check& hyp = rep.add("hyperplane-form");
  Check& dims = rep.add("dimensions");
  Check& ind = rep.add("indicatrix");
  for (std::size_t i = 0; i < dual.size(); ++i) {
    if (image[i] == primal.size()) continue;
    const std::string tag = "dual face " + std::to_string(i);
    const std::size_t j = image[i];
    hyp.expect(psi_hat_by_hyperplanes(pair, dual[i]) == primal_sets[j], tag + ": hyperplane intersection differs");
    FacePairRow row{i, j, dual[i].dim, primal[j].dim, relative_interior_point(dual_sets[i]),
                    relative_interior_point(primal_sets[j])};
    dims.expect(row.dim_dual + row.dim_primal == q - 1, tag + ": dims " + std::to_string(row.dim_dual) + " + " +
                                                            std::to_string(row.dim_primal) + " != " +
                                                            std::to_string(q - 1));
    // witness pair plus every vertex pair of the two faces
    std::vector<std::pair<Vector, Vector>> probes{{row.witness_v, row.witness_y}};
    for (const auto& v : dual_sets[i].v().vertices)
      for (const auto& y : primal_sets[j].v().vertices) probes.emplace_back(v, y);
    for (std::size_t s = 0; s < probes.size(); ++s) {
      const auto& [v, y] = probes[s];
      try {
        const NormalVectors nv = normal_vectors(pair, v, y);
        const ImageIndicatrices ii = image_indicatrices(pair, y, nv.eta, v, nv.eta_star);
        ind.expect(polar(ii.ind_P.carrier) == ii.ind_D.carrier,
                   tag + ": indicatrices at v = " + to_string(v) + ", y = " + to_string(y) + " are not polar");
        if (s == 0) {
          ind.expect(ii.ind_P.carrier.is_subspace() && ii.ind_D.carrier.is_subspace(),
                     tag + ": witness indicatrices are not subspaces");
          ind.expect(ii.ind_P.carrier.dim() == row.dim_primal, tag + ": dim ind_P differs from the face dimension");
        }
      } catch (const std::invalid_argument& e) {
        ind.expect(false, tag + ": " + e.what());
      }
    }
    out.rows.push_back(std::move(row));
  }

  // samples: vertices, vertex + ray, and a relative-interior point of every face
  auto samples = [](const Polyhedron& p, const std::vector<Polyhedron>& faces) {
    std::vector<Vector> s = p.v().vertices;
    for (const auto& v : p.v().vertices)
      for (const auto& r : p.v().rays) s.push_back(v + r);
    for (const auto& f : faces) s.push_back(relative_interior_point(f));
    return s;
  };
  std::vector<Polyhedron> all_p, all_d;
  for (const auto& f : enumerate_faces(pair.P)) all_p.push_back(f.as_polyhedron());
  for (const auto& f : enumerate_faces(pair.D)) all_d.push_back(f.as_polyhedron());
  const auto ys = samples(pair.P, all_p);
  const auto vs = samples(pair.D, all_d);
  Check& weak = rep.add("weak-duality");
  for (const auto& y : ys)
    for (const auto& v : vs) {
      const Rational value = coupling_psi(pair, y, v);
      weak.expect(value.sign() >= 0, "psi(" + to_string(y) + ", " + to_string(v) + ") = " + value.to_string() + " < 0");
      bool coupled = false;
      for (const auto& row : out.rows)
        if (dual_sets[row.dual_id].contains(v) && primal_sets[row.primal_id].contains(y)) coupled = true;
      weak.expect(value.is_zero() == coupled, "psi(" + to_string(y) + ", " + to_string(v) + ") = " +
                                                  value.to_string() + " disagrees with the face pairing");
    }

  Check& dimg = rep.add("dual-image");
  dimg.expect(pair.D == linear_image(negation(q), pair.f_star.epigraph()), "D differs from -epi f*");
  // f*(-w) = -sup{bᵀu : u ≥ 0, Aᵀu = Γᵀc*(w)} wherever f*(-w) is finite
  for (const auto& v : vs) {
    const Vector w = v.head(q - 1);
    const ExtendedRational fs = evaluate(pair.f_star, Vector(-w));
    if (fs.is_infinite()) continue;
    const Vector c = pair.T_inv.transpose() * hat_one(join(w, zero_vector(1)));
    bool dual_cone = true;
    for (const auto& g : pair.vop.cone_C.v().rays) dual_cone = dual_cone && inner(c, g).sign() >= 0;
    for (const auto& l : pair.vop.cone_C.v().lines) dual_cone = dual_cone && inner(c, l).is_zero();
    dimg.expect(dual_cone, "c*(" + to_string(w) + ") is not in the dual cone");
    HRep lp;
    lp.ambient_dim = pair.vop.A.rows();
    for (Index i = 0; i < lp.ambient_dim; ++i) lp.inequalities.push_back({Vector(-unit_vector(lp.ambient_dim, i)), Rational(0)});
    const Vector rhs = pair.vop.gamma.transpose() * c;
    for (Index j = 0; j < pair.vop.m(); ++j) lp.equalities.push_back({Vector(pair.vop.A.col(j)), rhs(j)});
    const LpResult r = solve_lp(pair.vop.b, lp, Sense::maximize);
    dimg.expect(r.status == LpStatus::optimal && r.value == -fs.value(),
                "conjugate formula fails at w = " + to_string(w));
  }

  Check& rmin = rep.add("rmin");
  for (const auto& y : ys) {
    const Vector zr = pair.T_inv * y;
    const bool on_graph = evaluate(pair.f, Vector(zr.head(q - 1))) == ExtendedRational(zr(q - 1));
    rmin.expect(is_relatively_minimal(pair, y) == on_graph,
                "y = " + to_string(y) + ": definition and graph characterization disagree");
  }
  return out;
}

}  // namespace geodual
