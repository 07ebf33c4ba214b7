#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "geodual/vectopt.hpp"
#include "oracles.hpp"

using namespace geodual;
using namespace oracle;

namespace {

Polyhedron orthant2() { return Polyhedron::cone({vec({1, 0}), vec({0, 1})}, {}, 2); }

VopInstance simplex_instance() {
  VopInstance vop;
  vop.gamma = identity_matrix(2);
  vop.A = make_matrix({{1, 1}, {1, 0}, {0, 1}});
  vop.b = vec({1, 0, 0});
  vop.cone_C = orthant2();
  vop.k = vec({1, 1});
  return vop;
}

VopInstance orthant_instance() {
  VopInstance vop = simplex_instance();
  vop.A = make_matrix({{1, 0}, {0, 1}});
  vop.b = vec({0, 0});
  return vop;
}

// Hand-derived D of the simplex instance: 0 ≤ w ≤ 1, s ≤ w, s ≤ 1 - w.
Polyhedron simplex_dual_image() {
  return Polyhedron::from_hrep(hrep(2, {leq({-1, 0}, 0), leq({1, 0}, 1), leq({-1, 1}, 0), leq({1, 1}, 1)}));
}

const FaceDescriptor& face_equal_to(const std::vector<FaceDescriptor>& faces, const Polyhedron& p) {
  for (const auto& f : faces)
    if (f.as_polyhedron() == p) return f;
  FAIL("face not found");
  return faces.front();
}

Polyhedron seg(std::initializer_list<Rational> a, std::initializer_list<Rational> b) {
  return Polyhedron::from_vrep(vrep(static_cast<Index>(a.size()), {vec(a), vec(b)}));
}

std::optional<Rational> phi_by_lp(const Polyhedron& c, const Vector& k, const Vector& y) {
  // min r subject to r k - y ∈ C, in variables (r)
  HRep h;
  h.ambient_dim = 1;
  for (const auto& row : c.h().inequalities) h.inequalities.push_back({vec({inner(row.normal, k)}), inner(row.normal, y)});
  for (const auto& row : c.h().equalities) h.equalities.push_back({vec({inner(row.normal, k)}), inner(row.normal, y)});
  const LpResult r = solve_lp(vec({1}), h, Sense::minimize);
  if (r.status != LpStatus::optimal) return std::nullopt;
  return r.value;
}

Vector join_zero(const Vector& a) {
  Vector out(a.size() + 1);
  out << a, Rational(0);
  return out;
}

ImagePair build_with_retries(std::uint64_t seed, Index q, int& attempts) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed * 1000 + attempt);
    const Index m = rng.uniform(1, 4);
    const Index p = rng.uniform(1, 6);
    ++attempts;
    try {
      return build_images(random_vop(rng, q, m, p));
    } catch (const ImproperFunction&) {
    }
  }
}

}  // namespace

TEST_CASE("scalarize_phi examples agree with the LP definition") {
  CHECK(scalarize_phi(orthant2(), vec({1, 1}), vec({2, -1})) == ExtendedRational(2));
  CHECK(scalarize_phi(orthant2(), vec({1, 1}), vec({0, 0})) == ExtendedRational(0));
  const Polyhedron c = Polyhedron::cone({vec({1, 1}), vec({-1, 1})}, {}, 2);
  CHECK(scalarize_phi(c, vec({0, 1}), vec({3, 0})) == ExtendedRational(3));
  CHECK(phi_by_lp(c, vec({0, 1}), vec({3, 0})) == Rational(3));
  // a cone with empty interior: φ is +inf off span(C) - y
  const Polyhedron flat = Polyhedron::cone({vec({1, 0, 1}), vec({-1, 0, 1})}, {}, 3);
  CHECK(scalarize_phi(flat, vec({0, 0, 1}), vec({0, 1, 0})).is_infinite());
  CHECK(!phi_by_lp(flat, vec({0, 0, 1}), vec({0, 1, 0})));
  CHECK_THROWS_AS(scalarize_phi(orthant2(), vec({1, 0}), vec({0, 0})), std::invalid_argument);
}

TEST_CASE("scalarize_phi is translative and sublinear") {
  for (int seed = 0; seed < 30; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 11000);
    const Index q = rng.uniform(2, 3);
    const VopInstance vop = random_vop(rng, q, 1, 1);
    const Polyhedron& c = vop.cone_C;
    CAPTURE(seed);
    for (int s = 0; s < 5; ++s) {
      const Vector y1 = rng.vector(q, -4, 4);
      const Vector y2 = rng.vector(q, -4, 4);
      const Rational t = rng.rational(-3, 3, 4);
      const ExtendedRational p1 = scalarize_phi(c, vop.k, y1);
      const ExtendedRational p2 = scalarize_phi(c, vop.k, y2);
      CHECK(p1 == (phi_by_lp(c, vop.k, y1) ? ExtendedRational(*phi_by_lp(c, vop.k, y1)) : ExtendedRational::infinity()));
      if (p1.is_finite()) {
        CHECK(scalarize_phi(c, vop.k, Vector(y1 + t * vop.k)) == ExtendedRational(p1.value() + t));
        CHECK(scalarize_phi(c, vop.k, Vector(Rational(3, 2) * y1)) == ExtendedRational(Rational(3, 2) * p1.value()));
      }
      CHECK(scalarize_phi(c, vop.k, Vector(y1 + y2)) <= p1 + p2);
    }
  }
}

TEST_CASE("build_images: simplex instance") {
  const ImagePair pair = build_images(simplex_instance());
  CHECK(pair.P == Polyhedron::from_hrep(hrep(2, {leq({-1, -1}, -1), leq({-1, 0}, 0), leq({0, -1}, 0)})));
  CHECK(pair.D == simplex_dual_image());
  CHECK(pair.D == dual_image_by_lp_duality(simplex_instance()));
  CHECK(pair.T == make_matrix({{1, 1}, {0, 1}}));
  CHECK(pair.standard_basis);
  // D = -epi f*
  CHECK(pair.D == linear_image(Matrix(-identity_matrix(2)), pair.f_star.epigraph()));
  // epi f = T⁻¹(P)
  CHECK(pair.f.epigraph() == preimage(pair.T, pair.P));
}

TEST_CASE("build_images: orthant and cone instances") {
  const ImagePair orth = build_images(orthant_instance());
  CHECK(orth.P == orthant2());
  CHECK(orth.D == Polyhedron::from_hrep(hrep(2, {leq({-1, 0}, 0), leq({1, 0}, 1), leq({0, 1}, 0)})));

  VopInstance vop;
  vop.gamma = identity_matrix(2);
  vop.A = make_matrix({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  vop.b = vec({0, 0, 0, 0});
  vop.cone_C = Polyhedron::cone({vec({1, 0}), vec({1, 2})}, {}, 2);
  vop.k = vec({1, 1});
  const ImagePair pair = build_images(vop);
  CHECK(pair.P == vop.cone_C);
  // C⁺ = cone{(0,1),(2,-1)}; kᵀc* = 1 cuts it to the segment w ∈ [0,2]; inner value 0
  const Polyhedron c_plus = polar(vop.cone_C);
  CHECK(c_plus == Polyhedron::cone({vec({0, -1}), vec({-2, 1})}, {}, 2));
  CHECK(pair.D == Polyhedron::from_hrep(hrep(2, {leq({-1, 0}, 0), leq({1, 0}, 2), leq({0, 1}, 0)})));
  CHECK(pair.D == dual_image_by_lp_duality(vop));
}

TEST_CASE("build_images rejects invalid instances") {
  VopInstance empty = simplex_instance();
  empty.A = make_matrix({{1, 0}, {-1, 0}});
  empty.b = vec({1, 0});
  CHECK_THROWS_AS(build_images(empty), InfeasibleProblem);

  VopInstance boundary = simplex_instance();
  boundary.k = vec({1, 0});
  CHECK_THROWS_AS(build_images(boundary), NotRelativeInterior);

  VopInstance scalar;
  scalar.gamma = make_matrix({{1}});
  scalar.A = make_matrix({{1}});
  scalar.b = vec({0});
  scalar.cone_C = Polyhedron::cone({vec({1})}, {}, 1);
  scalar.k = vec({1});
  CHECK_THROWS_AS(build_images(scalar), std::invalid_argument);

  // E parallel to k makes T singular
  CHECK_THROWS_AS(build_images(simplex_instance(), make_matrix({{1}, {1}})), std::invalid_argument);

  VopInstance unbounded = simplex_instance();
  unbounded.A = make_matrix({{0, 0}});
  unbounded.b = vec({0});
  CHECK_THROWS_AS(build_images(unbounded), ImproperFunction);

  VopInstance subspace = simplex_instance();
  subspace.cone_C = Polyhedron::cone({}, {vec({1, 1})}, 2);
  CHECK_THROWS_AS(build_images(subspace), std::invalid_argument);
}

TEST_CASE("coupling_psi examples and the expanded formula") {
  const ImagePair pair = build_images(simplex_instance());
  CHECK(coupling_psi(pair, vec({1, 0}), vec({Rational(1, 2), Rational(1, 2)})) == 0);
  CHECK(coupling_psi_expanded(pair.vop.k, vec({1, 0}), vec({Rational(1, 2), Rational(1, 2)})) == 0);
  for (const Rational yq : {Rational(-3), Rational(0), Rational(7, 2)})
    CHECK(coupling_psi(pair, vec({5, yq}), vec({0, yq})) == 0);
  CHECK(coupling_psi(pair, vec({2, 3}), vec({Rational(1, 2), Rational(1, 4)})) == Rational(9, 4));
  Rng rng(4242);
  for (int s = 0; s < 50; ++s) {
    const Vector y = rng.vector(2, -5, 5);
    const Vector v = rng.vector(2, -5, 5);
    CHECK(coupling_psi(pair, y, v) == coupling_psi_expanded(pair.vop.k, y, v));
  }
}

TEST_CASE("relatively minimal and K-maximal faces of the simplex instance") {
  const ImagePair pair = build_images(simplex_instance());
  const auto primal = relatively_minimal_faces(pair);
  CHECK(primal.size() == 5);
  face_equal_to(primal, seg({1, 0}, {0, 1}));
  face_equal_to(primal, Polyhedron::point(vec({1, 0})));
  face_equal_to(primal, Polyhedron::point(vec({0, 1})));
  face_equal_to(primal, Polyhedron::from_vrep(vrep(2, {vec({1, 0})}, {vec({1, 0})})));
  face_equal_to(primal, Polyhedron::from_vrep(vrep(2, {vec({0, 1})}, {vec({0, 1})})));
  // pointwise definition at every face's relative-interior point
  for (const auto& face : enumerate_faces(pair.P)) {
    const bool listed = std::any_of(primal.begin(), primal.end(),
                                    [&](const FaceDescriptor& f) { return f.active_inequalities == face.active_inequalities; });
    CHECK(listed == is_relatively_minimal(pair, relative_interior_point(face.as_polyhedron())));
  }
  const auto dual = k_maximal_faces(pair);
  CHECK(dual.size() == 5);

  const ImagePair orth = build_images(orthant_instance());
  CHECK(relatively_minimal_faces(orth).size() == 3);
}

TEST_CASE("psi_hat examples on the simplex instance") {
  const ImagePair pair = build_images(simplex_instance());
  const auto dual = k_maximal_faces(pair);
  const auto primal = relatively_minimal_faces(pair);

  const FaceDescriptor& apex = face_equal_to(dual, Polyhedron::point(vec({Rational(1, 2), Rational(1, 2)})));
  CHECK(psi_hat(pair, apex).as_polyhedron() == seg({1, 0}, {0, 1}));
  CHECK(psi_hat_by_hyperplanes(pair, apex) == seg({1, 0}, {0, 1}));
  // y₁ + y₂ = 1 is the zero set of ψ(·, (1/2,1/2)) intersected with P
  HRep cut = pair.P.h();
  cut.equalities.push_back({vec({1, 1}), 1});
  CHECK(Polyhedron::from_hrep(cut) == seg({1, 0}, {0, 1}));

  const FaceDescriptor& left = face_equal_to(dual, seg({0, 0}, {Rational(1, 2), Rational(1, 2)}));
  CHECK(psi_hat(pair, left).as_polyhedron() == Polyhedron::point(vec({1, 0})));
  CHECK(psi_hat_by_hyperplanes(pair, left) == Polyhedron::point(vec({1, 0})));
  const FaceDescriptor& right = face_equal_to(dual, seg({Rational(1, 2), Rational(1, 2)}, {1, 0}));
  CHECK(psi_hat(pair, right).as_polyhedron() == Polyhedron::point(vec({0, 1})));

  // v = (0,0): ψ(y, 0) = y₂, so the primal face is the ray along y₂ = 0
  const FaceDescriptor& origin = face_equal_to(dual, Polyhedron::point(vec({0, 0})));
  CHECK(psi_hat(pair, origin).as_polyhedron() == Polyhedron::from_vrep(vrep(2, {vec({1, 0})}, {vec({1, 0})})));

  for (const auto& f : dual) {
    const FaceDescriptor g = psi_hat(pair, f);
    CHECK(psi_hat_inverse(pair, g).active_inequalities == f.active_inequalities);
    CHECK(f.dim + g.dim == 1);
  }
  for (const auto& g : primal) CHECK(psi_hat(pair, psi_hat_inverse(pair, g)).active_inequalities == g.active_inequalities);

  // the whole of D contains -e_q and is not K-maximal
  CHECK_THROWS_AS(psi_hat(pair, enumerate_faces(pair.D).back()), std::invalid_argument);
  CHECK_THROWS_AS(psi_hat_inverse(pair, enumerate_faces(pair.P).back()), std::invalid_argument);
}

TEST_CASE("normal_vectors and image_indicatrices on the simplex instance") {
  const ImagePair pair = build_images(simplex_instance());
  const Vector v = vec({Rational(1, 2), Rational(1, 2)});
  const Vector y = vec({1, 0});
  const NormalVectors nv = normal_vectors(pair, v, y);
  CHECK(nv.eta == vec({Rational(-1, 2), Rational(-1, 2)}));
  CHECK(nv.eta_star == vec({-1, 1}));
  CHECK(inner(nv.eta, pair.vop.k) == -1);
  CHECK(normal_cone(pair.P, y).contains(nv.eta));
  CHECK(normal_cone(pair.D, v).contains(nv.eta_star));
  CHECK_THROWS_AS(normal_vectors(pair, vec({0, 0}), vec({0, 1})), std::invalid_argument);

  // facet / vertex pair at the ri point of the facet
  const Vector y_mid = vec({Rational(1, 2), Rational(1, 2)});
  const NormalVectors mid = normal_vectors(pair, v, y_mid);
  const ImageIndicatrices ind = image_indicatrices(pair, y_mid, mid.eta, v, mid.eta_star);
  CHECK(ind.ind_P.carrier == Polyhedron::whole_space(1));
  CHECK(ind.ind_D.carrier == Polyhedron::point(vec({0})));
  CHECK(ind.ind_D.carrier == polar(ind.ind_P.carrier));

  // mirrored pair: dual segment ri point, primal vertex (1,0)
  const Vector v_seg = vec({Rational(1, 4), Rational(1, 4)});
  const NormalVectors mirrored = normal_vectors(pair, v_seg, y);
  const ImageIndicatrices ind2 = image_indicatrices(pair, y, mirrored.eta, v_seg, mirrored.eta_star);
  CHECK(ind2.ind_P.carrier == Polyhedron::point(vec({0})));
  CHECK(ind2.ind_D.carrier == Polyhedron::whole_space(1));

  // precondition failures name the violated membership
  try {
    (void)image_indicatrices(pair, y, vec({1, 1}), v, nv.eta_star);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("eta") != std::string::npos);
  }
  CHECK_THROWS_AS(image_indicatrices(pair, y, nv.eta, v, vec({-1, 2})), std::invalid_argument);
}

TEST_CASE("general basis E gives the same faces") {
  const ImagePair standard = build_images(simplex_instance());
  const ImagePair general = build_images(simplex_instance(), make_matrix({{1}, {-1}}));
  CHECK(!general.standard_basis);
  CHECK(general.P == standard.P);
  CHECK(general.f.epigraph() == preimage(general.T, general.P));
  CHECK(relatively_minimal_faces(general).size() == 5);
  const VopReport r = verify_vop_duality(general);
  INFO(to_string(r.report));
  CHECK(r.report.passed());
}

TEST_CASE("a ray ordering cone makes the whole lower boundary relatively minimal") {
  VopInstance vop = simplex_instance();
  vop.cone_C = Polyhedron::cone({vec({1, 1})}, {}, 2);
  vop.k = vec({1, 1});
  const ImagePair pair = build_images(vop);
  // P = X + cone{(1,1)}: every boundary point not reachable from below along k
  for (const auto& face : enumerate_faces(pair.P)) {
    if (face.dim == 2) continue;
    const Vector y = relative_interior_point(face.as_polyhedron());
    CHECK(is_relatively_minimal(pair, y) == !face.as_polyhedron().in_recession_cone(vop.k));
  }
  const VopReport r = verify_vop_duality(pair);
  INFO(to_string(r.report));
  CHECK(r.report.passed());
}

TEST_CASE("an ordering cone with empty interior") {
  VopInstance vop;
  vop.gamma = identity_matrix(3);
  vop.A = make_matrix({{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  vop.b = vec({1, 0, 0, 0});
  vop.cone_C = Polyhedron::cone({vec({1, 0, 1}), vec({-1, 0, 1})}, {}, 3);
  vop.k = vec({0, 0, 1});
  CHECK(in_relative_interior_of_cone(vop.cone_C, vop.k));
  const ImagePair pair = build_images(vop);
  const VopReport r = verify_vop_duality(pair);
  INFO(to_string(r.report));
  CHECK(r.report.passed());
  for (const auto& row : r.rows) CHECK(row.dim_dual + row.dim_primal == 2);
  // the vertex (1,0,0) is relatively minimal; (1,0,0) + (0,0,1) is not
  CHECK(is_relatively_minimal(pair, vec({1, 0, 0})));
  CHECK(!is_relatively_minimal(pair, vec({1, 0, 1})));
}

TEST_CASE("f agrees with the P-slice and the scalarization") {
  for (int seed = 0; seed < 10; ++seed) {
    int attempts = 0;
    const ImagePair pair = build_with_retries(static_cast<std::uint64_t>(seed) + 12000, seed % 2 == 0 ? 2 : 3, attempts);
    const Index q = pair.q();
    Rng rng(static_cast<std::uint64_t>(seed) + 12500);
    CAPTURE(seed);
    CHECK(pair.f.epigraph() == preimage(pair.T, pair.P));
    for (int s = 0; s < 5; ++s) {
      const Vector z = rng.vector(q - 1, -3, 3);
      const ExtendedRational direct = evaluate(pair.f, z);
      // inf{r : T(z,r) ∈ P}
      HRep slice;
      slice.ambient_dim = 1;
      const Vector base = pair.E * z;
      for (const auto& c : pair.P.h().inequalities) slice.inequalities.push_back({vec({inner(c.normal, pair.vop.k)}), c.offset - inner(c.normal, base)});
      for (const auto& c : pair.P.h().equalities) slice.equalities.push_back({vec({inner(c.normal, pair.vop.k)}), c.offset - inner(c.normal, base)});
      const LpResult lp = solve_lp(vec({1}), slice, Sense::minimize);
      CHECK(lp.status != LpStatus::unbounded);
      CHECK(direct == (lp.status == LpStatus::optimal ? ExtendedRational(lp.value) : ExtendedRational::infinity()));
      // inf{r : r k - (y - Ez) ∈ C, y ∈ P} as one LP in (y, r)
      HRep joint;
      joint.ambient_dim = q + 1;
      for (const auto& c : pair.P.h().inequalities) joint.inequalities.push_back({join_zero(c.normal), c.offset});
      for (const auto& c : pair.P.h().equalities) joint.equalities.push_back({join_zero(c.normal), c.offset});
      for (const auto& c : pair.vop.cone_C.h().inequalities) {
        Vector row(q + 1);
        row << Vector(-c.normal), inner(c.normal, pair.vop.k);
        joint.inequalities.push_back({row, -inner(c.normal, base)});
      }
      for (const auto& c : pair.vop.cone_C.h().equalities) {
        Vector row(q + 1);
        row << Vector(-c.normal), inner(c.normal, pair.vop.k);
        joint.equalities.push_back({row, -inner(c.normal, base)});
      }
      const LpResult inf_phi = solve_lp(unit_vector(q + 1, q), joint, Sense::minimize);
      CHECK(direct == (inf_phi.status == LpStatus::optimal ? ExtendedRational(inf_phi.value) : ExtendedRational::infinity()));
    }
  }
}

TEST_CASE("verify_vop_duality on the worked instances") {
  const VopReport r = verify_vop_duality(build_images(simplex_instance()));
  INFO(to_string(r.report));
  CHECK(r.report.passed());
  CHECK(r.rows.size() == 5);
  for (const auto& row : r.rows) CHECK(row.dim_dual + row.dim_primal == 1);
  const VopReport o = verify_vop_duality(build_images(orthant_instance()));
  INFO(to_string(o.report));
  CHECK(o.report.passed());
  CHECK(o.rows.size() == 3);
}

TEST_CASE("verify_vop_duality on seeded random instances") {
  const auto start = std::chrono::steady_clock::now();
  int attempts = 0;
  std::size_t pairs = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const ImagePair pair = build_with_retries(static_cast<std::uint64_t>(seed) + 13000, seed % 2 == 0 ? 2 : 3, attempts);
    const VopReport r = verify_vop_duality(pair);
    CAPTURE(seed);
    INFO(to_string(r.report));
    CHECK(r.report.passed());
    pairs += r.rows.size();
  }
  MESSAGE("100 instances (" << attempts << " draws, " << pairs << " face pairs) in "
                           << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s");
}
