// Test-only oracles. Everything here is deliberately independent of the
// double-description and simplex code paths it is used to check.
#ifndef GEODUAL_TESTS_ORACLES_HPP
#define GEODUAL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "geodual/linalg.hpp"
#include "geodual/lp.hpp"
#include "geodual/polyhedral_function.hpp"
#include "geodual/polyhedron.hpp"
#include "geodual/vectopt.hpp"

namespace oracle {

using namespace geodual;

/// Small deterministic integer generator (portable across standard libraries).
struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  long uniform(long lo, long hi) { return lo + static_cast<long>(engine() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Rational rational(long lo, long hi, long max_den = 1) {
    return Rational(uniform(lo * max_den, hi * max_den), uniform(1, max_den));
  }
  Vector vector(Index n, long lo, long hi) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Rational(uniform(lo, hi));
    return v;
  }
  std::mt19937_64 engine;
};

inline bool satisfies(const HRep& h, const Vector& x) {
  for (const auto& c : h.inequalities)
    if (inner(c.normal, x) > c.offset) return false;
  for (const auto& c : h.equalities)
    if (inner(c.normal, x) != c.offset) return false;
  return true;
}

/// Basic feasible solutions: every choice of `n` linearly independent tight
/// constraints (equalities always tight), solved exactly and filtered by
/// feasibility. Only meaningful for pointed polyhedra.
inline std::vector<Vector> brute_force_vertices(const HRep& h) {
  const Index n = h.ambient_dim;
  std::vector<Constraint> all = h.equalities;
  all.insert(all.end(), h.inequalities.begin(), h.inequalities.end());
  std::vector<Vector> out;
  const std::size_t k = all.size();
  std::vector<int> mask(k, 0);
  std::fill(mask.begin(), mask.begin() + std::min<std::size_t>(k, static_cast<std::size_t>(n)), 1);
  if (k < static_cast<std::size_t>(n)) return out;
  std::sort(mask.begin(), mask.end());
  do {
    Matrix a(n, n);
    Vector b(n);
    Index r = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask[i]) {
        a.row(r) = all[i].normal.transpose();
        b(r) = all[i].offset;
        ++r;
      }
    const auto inv = inverse(a);
    if (!inv) continue;
    const Vector x = (*inv) * b;
    if (!satisfies(h, x)) continue;
    if (std::none_of(out.begin(), out.end(), [&](const Vector& y) { return equal_vectors(x, y); })) out.push_back(x);
  } while (std::next_permutation(mask.begin(), mask.end()));
  std::sort(out.begin(), out.end(), LexLess{});
  return out;
}

/// Minimum of c·x over a polyhedron given only by generators; nullopt means
/// unbounded. Precondition: nonempty.
inline std::optional<Rational> scan_minimum(const Vector& c, const VRep& v) {
  for (const auto& r : v.rays)
    if (inner(c, r).sign() < 0) return std::nullopt;
  for (const auto& l : v.lines)
    if (!inner(c, l).is_zero()) return std::nullopt;
  std::optional<Rational> best;
  for (const auto& x : v.vertices) {
    const Rational val = inner(c, x);
    if (!best || val < *best) best = val;
  }
  return best;
}

inline HRep hrep(Index n, std::vector<Constraint> ineq, std::vector<Constraint> eq = {}) {
  HRep h;
  h.ambient_dim = n;
  h.inequalities = std::move(ineq);
  h.equalities = std::move(eq);
  return h;
}

inline Constraint leq(std::initializer_list<Rational> a, Rational b) { return Constraint{make_vector(a), b}; }

inline VRep vrep(Index n, std::vector<Vector> vx, std::vector<Vector> rays = {}, std::vector<Vector> lines = {}) {
  VRep v;
  v.ambient_dim = n;
  v.vertices = std::move(vx);
  v.rays = std::move(rays);
  v.lines = std::move(lines);
  return v;
}

inline Vector vec(std::initializer_list<Rational> a) { return make_vector(a); }

/// Random polyhedron: random inequalities around a known interior point.
inline HRep random_hrep(Rng& rng, Index n, int count, bool bounded) {
  HRep h;
  h.ambient_dim = n;
  const Vector center = rng.vector(n, -2, 2);
  for (int i = 0; i < count; ++i) {
    Vector a = rng.vector(n, -3, 3);
    if (is_zero(a)) a(0) = Rational(1);
    h.inequalities.push_back({a, inner(a, center) + Rational(rng.uniform(0, 3))});
  }
  if (bounded)
    for (Index i = 0; i < n; ++i) {
      h.inequalities.push_back({unit_vector(n, i), center(i) + Rational(4)});
      h.inequalities.push_back({-unit_vector(n, i), -center(i) + Rational(4)});
    }
  return h;
}


/// Raw data of a random polyhedral function: `m` pieces and `extra`
/// constraints, the latter slack at a known point so the domain is nonempty.
struct RawFunction {
  Index n = 0;
  std::vector<AffinePiece> pieces;
  std::vector<Constraint> constraints;
  PolyhedralConvexFunction build() const { return PolyhedralConvexFunction::make(n, pieces, constraints); }
};

inline RawFunction random_function(Rng& rng, Index n, int m, int extra) {
  RawFunction raw;
  raw.n = n;
  for (int i = 0; i < m; ++i) raw.pieces.push_back({rng.vector(n, -3, 3), Rational(rng.uniform(-3, 3))});
  const Vector center = rng.vector(n, -2, 2);
  for (int j = 0; j < extra; ++j) {
    Vector a = rng.vector(n, -3, 3);
    if (is_zero(a)) a(j % n) = Rational(1);
    raw.constraints.push_back({a, inner(a, center) + Rational(rng.uniform(0, 3))});
  }
  return raw;
}

/// sup_x ⟨u,x⟩ - f(x) as an LP over the raw epigraph inequalities; nullopt
/// when unbounded.
inline std::optional<Rational> conjugate_by_lp(const RawFunction& raw, const Vector& u) {
  const Index n = raw.n;
  HRep h;
  h.ambient_dim = n + 1;
  for (const auto& p : raw.pieces) {
    Vector row(n + 1);
    row << p.a, Rational(-1);
    h.inequalities.push_back({row, p.b});
  }
  for (const auto& c : raw.constraints) {
    Vector row(n + 1);
    row << c.normal, Rational(0);
    h.inequalities.push_back({row, c.offset});
  }
  Vector obj(n + 1);
  obj << u, Rational(-1);
  const LpResult r = solve_lp(obj, h, Sense::maximize);
  if (r.status != LpStatus::optimal) return std::nullopt;
  return r.value;
}

/// f(x) from raw data; nullopt outside the domain.
inline std::optional<Rational> evaluate_raw(const RawFunction& raw, const Vector& x) {
  for (const auto& c : raw.constraints)
    if (inner(c.normal, x) > c.offset) return std::nullopt;
  std::optional<Rational> best;
  for (const auto& p : raw.pieces) {
    const Rational v = inner(p.a, x) - p.b;
    if (!best || v > *best) best = v;
  }
  return best;
}

/// {(x, f(x)) : u ∈ ∂f(x)} as the optimal face of the LP sup ⟨u,x⟩ - r over
/// the raw epigraph; empty when the supremum is not attained.
inline Polyhedron argmax_face(const RawFunction& raw, const Vector& u) {
  const Index n = raw.n;
  HRep h;
  h.ambient_dim = n + 1;
  for (const auto& p : raw.pieces) {
    Vector row(n + 1);
    row << p.a, Rational(-1);
    h.inequalities.push_back({row, p.b});
  }
  for (const auto& c : raw.constraints) {
    Vector row(n + 1);
    row << c.normal, Rational(0);
    h.inequalities.push_back({row, c.offset});
  }
  Vector obj(n + 1);
  obj << u, Rational(-1);
  const LpResult r = solve_lp(obj, h, Sense::maximize);
  if (r.status != LpStatus::optimal) return Polyhedron::empty(n + 1);
  h.equalities.push_back({obj, r.value});
  return Polyhedron::from_hrep(h);
}

/// Intersection of argmax_face over the u-parts of vertices, vertex + ray and
/// vertex ± line of a face; equals the image of the whole face because the
/// conjugate is affine on it.
inline Polyhedron intersect_over_face(const RawFunction& raw, const VRep& face) {
  const Index n = raw.n;
  std::vector<Vector> pts;
  for (const auto& v : face.vertices) {
    pts.push_back(v.head(n));
    for (const auto& r : face.rays) pts.push_back(Vector(v.head(n) + r.head(n)));
    for (const auto& l : face.lines) {
      pts.push_back(Vector(v.head(n) + l.head(n)));
      pts.push_back(Vector(v.head(n) - l.head(n)));
    }
  }
  Polyhedron acc = argmax_face(raw, pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) acc = intersect(acc, argmax_face(raw, pts[i]));
  return acc;
}

/// Faces of p by brute force: every subset of inequalities forced tight,
/// nonempty results deduplicated as sets.
inline std::vector<Polyhedron> brute_force_faces(const Polyhedron& p) {
  std::vector<Polyhedron> out;
  const std::size_t m = p.h().inequalities.size();
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    HRep h = p.h();
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1UL) h.equalities.push_back(h.inequalities[i]);
    const Polyhedron face = Polyhedron::from_hrep(h);
    if (face.is_empty()) continue;
    if (std::none_of(out.begin(), out.end(), [&](const Polyhedron& q) { return q == face; })) out.push_back(face);
  }
  return out;
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols, long lo, long hi) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = Rational(rng.uniform(lo, hi));
  return out;
}

/// Random linear vector optimization instance with a pointed ordering cone
/// generated by vectors with positive last coordinate, k the normalized sum
/// of the generators (so k ∈ ri C and k_q = 1), and a feasible set around a
/// known point. About half the instances get lower bounds on every variable.
inline VopInstance random_vop(Rng& rng, Index q, Index m, Index p) {
  VopInstance vop;
  vop.gamma = random_matrix(rng, q, m, -2, 2);
  const Vector x0 = rng.vector(m, -2, 2);
  std::vector<Vector> rows;
  if (rng.uniform(0, 1) == 1 && m <= p)
    for (Index j = 0; j < m; ++j) rows.push_back(unit_vector(m, j));
  while (static_cast<Index>(rows.size()) < p) rows.push_back(rng.vector(m, -3, 3));
  vop.A.resize(static_cast<Index>(rows.size()), m);
  vop.b.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    vop.A.row(static_cast<Index>(i)) = rows[i].transpose();
    vop.b(static_cast<Index>(i)) = inner(rows[i], x0) - Rational(rng.uniform(0, 2));
  }
  const int count = static_cast<int>(rng.uniform(q == 2 ? 1 : 2, q == 2 ? 2 : 4));
  std::vector<Vector> gens;
  Vector sum = zero_vector(q);
  for (int i = 0; i < count; ++i) {
    Vector g = rng.vector(q, -2, 2);
    g(q - 1) = Rational(rng.uniform(1, 2));
    gens.push_back(g);
    sum += g;
  }
  vop.cone_C = Polyhedron::cone(gens, {}, q);
  vop.k = sum / sum(q - 1);
  return vop;
}

}  // namespace oracle

#endif  // GEODUAL_TESTS_ORACLES_HPP
