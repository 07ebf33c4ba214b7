#include "geodual/polyhedron.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace geodual {

namespace {

// ---------------------------------------------------------------------------
// Double description on homogeneous cones {y : a·y ≤ 0 (or = 0)}.

struct HomogeneousConstraint {
  Vector a;
  bool equality = false;
};

struct DdRay {
  Vector y;
  std::vector<bool> zero;  // zero[k]: constraint k processed and tight
};

struct ConeGenerators {
  std::vector<Vector> lines;
  std::vector<Vector> rays;
};

void normalize_in_place(Vector& v) { v = primitive_integer(v); }

bool subset_of(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

ConeGenerators double_description(Index d, const std::vector<HomogeneousConstraint>& constraints) {
  const std::size_t total = constraints.size();
  std::vector<Vector> lines;
  for (Index i = 0; i < d; ++i) lines.push_back(unit_vector(d, i));
  std::vector<DdRay> rays;

  for (std::size_t k = 0; k < total; ++k) {
    const Vector& a = constraints[k].a;
    const bool eq = constraints[k].equality;

    // A line not orthogonal to a absorbs the constraint.
    auto pivot = std::find_if(lines.begin(), lines.end(), [&](const Vector& l) { return !inner(a, l).is_zero(); });
    if (pivot != lines.end()) {
      Vector l0 = *pivot;
      lines.erase(pivot);
      Rational al0 = inner(a, l0);
      if (al0.sign() > 0) {
        l0 = -l0;
        al0 = -al0;
      }
      for (auto& l : lines) {
        const Rational al = inner(a, l);
        if (!al.is_zero()) {
          l -= (al / al0) * l0;
          normalize_in_place(l);
        }
      }
      for (auto& r : rays) {
        const Rational ar = inner(a, r.y);
        if (!ar.is_zero()) {
          r.y -= (ar / al0) * l0;
          normalize_in_place(r.y);
        }
        r.zero[k] = true;
      }
      if (!eq) {
        DdRay fresh{primitive_integer(l0), std::vector<bool>(total, false)};
        for (std::size_t j = 0; j < k; ++j) fresh.zero[j] = true;
        rays.push_back(std::move(fresh));
      }
      continue;
    }

    std::vector<std::size_t> plus, minus, zero;
    std::vector<Rational> values(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      values[i] = inner(a, rays[i].y);
      const int s = values[i].sign();
      (s > 0 ? plus : (s < 0 ? minus : zero)).push_back(i);
    }

    std::vector<DdRay> next;
    // Pairs of adjacent rays with opposite signs produce new rays on the hyperplane.
    const Index min_common = d - static_cast<Index>(lines.size()) - 2;
    for (std::size_t ip : plus) {
      for (std::size_t in : minus) {
        std::vector<bool> common(total, false);
        Index count = 0;
        for (std::size_t j = 0; j < k; ++j)
          if (rays[ip].zero[j] && rays[in].zero[j]) {
            common[j] = true;
            ++count;
          }
        if (count < min_common) continue;
        bool adjacent = true;
        for (std::size_t ir = 0; ir < rays.size() && adjacent; ++ir) {
          if (ir == ip || ir == in) continue;
          if (subset_of(common, rays[ir].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        Vector y = values[ip] * rays[in].y - values[in] * rays[ip].y;
        normalize_in_place(y);
        common[k] = true;
        next.push_back(DdRay{std::move(y), std::move(common)});
      }
    }
    for (std::size_t i : zero) {
      rays[i].zero[k] = true;
      next.push_back(std::move(rays[i]));
    }
    if (!eq)
      for (std::size_t i : minus) next.push_back(std::move(rays[i]));
    rays = std::move(next);
  }

  ConeGenerators out;
  out.lines = std::move(lines);
  for (auto& r : rays) out.rays.push_back(std::move(r.y));
  return out;
}

std::vector<Vector> canonical_line_basis(const std::vector<Vector>& lines, Index n) {
  std::vector<Vector> out;
  if (lines.empty()) return out;
  const RowEchelon e = row_echelon(stack_rows(lines, n));
  for (Index r = 0; r < e.reduced.rows(); ++r) out.push_back(primitive_integer(e.reduced.row(r).transpose()));
  return out;
}

void sort_unique(std::vector<Vector>& v) {
  std::sort(v.begin(), v.end(), LexLess{});
  v.erase(std::unique(v.begin(), v.end(), [](const Vector& a, const Vector& b) { return equal_vectors(a, b); }),
          v.end());
}

HRep empty_hrep(Index n) {
  HRep h;
  h.ambient_dim = n;
  h.inequalities.push_back(Constraint{zero_vector(n), Rational(-1)});
  return h;
}

Vector extend(const Vector& x, const Rational& last) {
  Vector y(x.size() + 1);
  y.head(x.size()) = x;
  y(x.size()) = last;
  return y;
}

void check_dims(const HRep& h) {
  for (const auto& c : h.inequalities)
    if (c.normal.size() != h.ambient_dim) throw std::invalid_argument("HRep: inequality normal has wrong length");
  for (const auto& c : h.equalities)
    if (c.normal.size() != h.ambient_dim) throw std::invalid_argument("HRep: equality normal has wrong length");
}

void check_dims(const VRep& v) {
  auto check = [&](const std::vector<Vector>& vs, const char* what) {
    for (const auto& x : vs)
      if (x.size() != v.ambient_dim) throw std::invalid_argument(std::string("VRep: ") + what + " has wrong length");
  };
  check(v.vertices, "vertex");
  check(v.rays, "ray");
  check(v.lines, "line");
}

}  // namespace

bool operator==(const VRep& a, const VRep& b) {
  auto same = [](const std::vector<Vector>& x, const std::vector<Vector>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!equal_vectors(x[i], y[i])) return false;
    return true;
  };
  return a.ambient_dim == b.ambient_dim && same(a.vertices, b.vertices) && same(a.rays, b.rays) &&
         same(a.lines, b.lines);
}

VRep hrep_to_vrep(const HRep& h) {
  check_dims(h);
  const Index n = h.ambient_dim;
  std::vector<HomogeneousConstraint> cons;
  cons.push_back({-unit_vector(n + 1, n), false});  // t ≥ 0
  for (const auto& c : h.inequalities) cons.push_back({extend(c.normal, -c.offset), false});
  for (const auto& c : h.equalities) cons.push_back({extend(c.normal, -c.offset), true});
  const ConeGenerators g = double_description(n + 1, cons);

  VRep v;
  v.ambient_dim = n;
  std::vector<Vector> lines;
  for (const auto& l : g.lines) lines.push_back(l.head(n));
  lines = canonical_line_basis(lines, n);

  for (const auto& r : g.rays) {
    const Rational t = r(n);
    Vector x = project_out(Vector(r.head(n)), lines);
    if (t.sign() > 0) {
      v.vertices.push_back(x / t);
    } else {
      if (!is_zero(x)) v.rays.push_back(primitive_integer(x));
    }
  }
  if (v.vertices.empty()) {
    v.rays.clear();
    return v;
  }
  v.lines = std::move(lines);
  sort_unique(v.vertices);
  sort_unique(v.rays);
  return v;
}

HRep vrep_to_hrep(const VRep& v) {
  check_dims(v);
  const Index n = v.ambient_dim;
  if (v.vertices.empty()) return empty_hrep(n);

  std::vector<HomogeneousConstraint> cons;
  for (const auto& x : v.vertices) cons.push_back({extend(x, Rational(1)), false});
  for (const auto& r : v.rays) cons.push_back({extend(r, Rational(0)), false});
  for (const auto& l : v.lines) cons.push_back({extend(l, Rational(0)), true});
  const ConeGenerators g = double_description(n + 1, cons);

  HRep h;
  h.ambient_dim = n;

  // Equalities: rows [a | b] of ⟨a,x⟩ = b in reduced echelon form.
  std::vector<Vector> eq_rows;
  for (const auto& l : g.lines) {
    Vector row = l;
    row(n) = -row(n);
    eq_rows.push_back(row);
  }
  std::vector<Vector> eq_normals;
  std::vector<Rational> eq_offsets;
  if (!eq_rows.empty()) {
    const RowEchelon e = row_echelon(stack_rows(eq_rows, n + 1));
    for (Index r = 0; r < e.reduced.rows(); ++r) {
      const Vector row = primitive_integer(e.reduced.row(r).transpose());
      eq_normals.push_back(row.head(n));
      eq_offsets.push_back(row(n));
      h.equalities.push_back(Constraint{row.head(n), row(n)});
    }
  }

  Matrix eq_matrix = stack_rows(eq_normals, n);
  Matrix gram = eq_matrix * eq_matrix.transpose();
  for (const auto& r : g.rays) {
    Vector a = r.head(n);
    Rational b = -r(n);
    if (!eq_normals.empty()) {
      const auto lambda = solve(gram, Vector(eq_matrix * a));
      for (std::size_t i = 0; i < eq_normals.size(); ++i) {
        a -= (*lambda)(static_cast<Index>(i)) * eq_normals[i];
        b -= (*lambda)(static_cast<Index>(i)) * eq_offsets[i];
      }
    }
    if (is_zero(a)) continue;  // 0 ≤ b with b ≥ 0
    const Vector scaled = primitive_integer(extend(a, b));
    h.inequalities.push_back(Constraint{scaled.head(n), scaled(n)});
  }
  std::sort(h.inequalities.begin(), h.inequalities.end(), [](const Constraint& x, const Constraint& y) {
    if (!equal_vectors(x.normal, y.normal)) return lex_less(x.normal, y.normal);
    return x.offset < y.offset;
  });
  h.inequalities.erase(std::unique(h.inequalities.begin(), h.inequalities.end()), h.inequalities.end());
  return h;
}

// ---------------------------------------------------------------------------

Polyhedron Polyhedron::from_hrep(const HRep& h) {
  Polyhedron p;
  p.v_ = hrep_to_vrep(h);
  p.h_ = vrep_to_hrep(p.v_);
  return p;
}

Polyhedron Polyhedron::from_vrep(const VRep& v) {
  Polyhedron p;
  p.h_ = vrep_to_hrep(v);
  p.v_ = hrep_to_vrep(p.h_);
  return p;
}

Polyhedron Polyhedron::empty(Index n) { return from_hrep(empty_hrep(n)); }

Polyhedron Polyhedron::whole_space(Index n) {
  HRep h;
  h.ambient_dim = n;
  return from_hrep(h);
}

Polyhedron Polyhedron::point(const Vector& x) {
  VRep v;
  v.ambient_dim = x.size();
  v.vertices.push_back(x);
  return from_vrep(v);
}

Polyhedron Polyhedron::cone(const std::vector<Vector>& rays, const std::vector<Vector>& lines, Index n) {
  VRep v;
  v.ambient_dim = n;
  v.vertices.push_back(zero_vector(n));
  v.rays = rays;
  v.lines = lines;
  return from_vrep(v);
}

Index Polyhedron::dim() const {
  std::vector<Vector> dirs = v_.rays;
  dirs.insert(dirs.end(), v_.lines.begin(), v_.lines.end());
  return affine_dimension(v_.vertices, dirs);
}

bool Polyhedron::contains(const Vector& x) const {
  if (x.size() != ambient_dim()) throw std::invalid_argument("contains: dimension mismatch");
  if (is_empty()) return false;
  for (const auto& c : h_.inequalities)
    if (inner(c.normal, x) > c.offset) return false;
  for (const auto& c : h_.equalities)
    if (inner(c.normal, x) != c.offset) return false;
  return true;
}

bool Polyhedron::in_recession_cone(const Vector& d) const {
  if (is_empty()) return false;
  for (const auto& c : h_.inequalities)
    if (inner(c.normal, d).sign() > 0) return false;
  for (const auto& c : h_.equalities)
    if (!inner(c.normal, d).is_zero()) return false;
  return true;
}

bool Polyhedron::contains(const Polyhedron& other) const {
  if (other.ambient_dim() != ambient_dim()) throw std::invalid_argument("contains: dimension mismatch");
  if (other.is_empty()) return true;
  if (is_empty()) return false;
  for (const auto& x : other.v().vertices)
    if (!contains(x)) return false;
  for (const auto& r : other.v().rays)
    if (!in_recession_cone(r)) return false;
  for (const auto& l : other.v().lines)
    if (!in_recession_cone(l) || !in_recession_cone(Vector(-l))) return false;
  return true;
}

bool Polyhedron::is_cone() const {
  return !is_empty() && v_.vertices.size() == 1 && is_zero(v_.vertices.front());
}

bool Polyhedron::is_subspace() const { return is_cone() && v_.rays.empty(); }

std::vector<std::size_t> Polyhedron::active_inequalities(const Vector& x) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < h_.inequalities.size(); ++i)
    if (inner(h_.inequalities[i].normal, x) == h_.inequalities[i].offset) out.push_back(i);
  return out;
}

bool operator==(const Polyhedron& a, const Polyhedron& b) { return a.contains(b) && b.contains(a); }

// ---------------------------------------------------------------------------
// Faces.

std::vector<FaceDescriptor> enumerate_faces(const Polyhedron& p) {
  std::vector<FaceDescriptor> faces;
  if (p.is_empty()) return faces;
  auto parent = std::make_shared<const Polyhedron>(p);
  const auto& ineq = p.h().inequalities;
  const auto& vx = p.v().vertices;
  const auto& rays = p.v().rays;
  const std::size_t m = ineq.size();

  std::vector<std::vector<bool>> vertex_tight(vx.size(), std::vector<bool>(m));
  std::vector<std::vector<bool>> ray_tight(rays.size(), std::vector<bool>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < vx.size(); ++j) vertex_tight[j][i] = inner(ineq[i].normal, vx[j]) == ineq[i].offset;
    for (std::size_t j = 0; j < rays.size(); ++j) ray_tight[j][i] = inner(ineq[i].normal, rays[j]).is_zero();
  }

  // Closure: generators tight on all of `active`, then every inequality tight on them.
  auto closure = [&](const std::vector<std::size_t>& active, std::vector<std::size_t>& vsel,
                     std::vector<std::size_t>& rsel) -> std::vector<std::size_t> {
    vsel.clear();
    rsel.clear();
    for (std::size_t j = 0; j < vx.size(); ++j)
      if (std::all_of(active.begin(), active.end(), [&](std::size_t i) { return vertex_tight[j][i]; })) vsel.push_back(j);
    if (vsel.empty()) return {};
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (std::all_of(active.begin(), active.end(), [&](std::size_t i) { return ray_tight[j][i]; })) rsel.push_back(j);
    std::vector<std::size_t> closed;
    for (std::size_t i = 0; i < m; ++i) {
      bool tight = std::all_of(vsel.begin(), vsel.end(), [&](std::size_t j) { return vertex_tight[j][i]; }) &&
                   std::all_of(rsel.begin(), rsel.end(), [&](std::size_t j) { return ray_tight[j][i]; });
      if (tight) closed.push_back(i);
    }
    return closed;
  };

  auto make_face = [&](const std::vector<std::size_t>& active, const std::vector<std::size_t>& vsel,
                       const std::vector<std::size_t>& rsel) {
    FaceDescriptor f;
    f.parent = parent;
    f.active_inequalities = active;
    f.vrep.ambient_dim = p.ambient_dim();
    for (std::size_t j : vsel) f.vrep.vertices.push_back(vx[j]);
    for (std::size_t j : rsel) f.vrep.rays.push_back(rays[j]);
    f.vrep.lines = p.v().lines;
    std::vector<Vector> dirs = f.vrep.rays;
    dirs.insert(dirs.end(), f.vrep.lines.begin(), f.vrep.lines.end());
    f.dim = affine_dimension(f.vrep.vertices, dirs);
    return f;
  };

  std::set<std::vector<std::size_t>> seen;
  std::deque<std::vector<std::size_t>> queue;
  std::vector<std::size_t> vsel, rsel;
  const auto top = closure({}, vsel, rsel);
  seen.insert(top);
  queue.push_back(top);
  faces.push_back(make_face(top, vsel, rsel));
  while (!queue.empty()) {
    const auto active = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < m; ++i) {
      if (std::binary_search(active.begin(), active.end(), i)) continue;
      auto trial = active;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), i), i);
      auto closed = closure(trial, vsel, rsel);
      if (vsel.empty() || seen.count(closed)) continue;
      seen.insert(closed);
      faces.push_back(make_face(closed, vsel, rsel));
      queue.push_back(std::move(closed));
    }
  }
  std::sort(faces.begin(), faces.end(), [](const FaceDescriptor& a, const FaceDescriptor& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.active_inequalities > b.active_inequalities;
  });
  return faces;
}

FaceDescriptor smallest_face_containing(const std::shared_ptr<const Polyhedron>& parent, const Polyhedron& s) {
  if (s.is_empty() || !parent->contains(s)) throw std::invalid_argument("smallest_face_containing: subset not contained");
  FaceDescriptor f;
  f.parent = parent;
  f.active_inequalities = parent->active_inequalities(relative_interior_point(s));
  HRep h = parent->h();
  for (std::size_t i : f.active_inequalities) h.equalities.push_back(h.inequalities[i]);
  const Polyhedron face = Polyhedron::from_hrep(h);
  f.vrep = face.v();
  f.dim = face.dim();
  return f;
}

bool face_subset(const FaceDescriptor& a, const FaceDescriptor& b) {
  return std::includes(a.active_inequalities.begin(), a.active_inequalities.end(), b.active_inequalities.begin(),
                       b.active_inequalities.end());
}

// ---------------------------------------------------------------------------
// Cones, polar, relative interior.

Polyhedron normal_cone(const Polyhedron& p, const Vector& x) {
  if (!p.contains(x)) throw std::invalid_argument("normal_cone: point " + to_string(x) + " not in polyhedron");
  std::vector<Vector> rays, lines;
  for (std::size_t i : p.active_inequalities(x)) rays.push_back(p.h().inequalities[i].normal);
  for (const auto& c : p.h().equalities) lines.push_back(c.normal);
  return Polyhedron::cone(rays, lines, p.ambient_dim());
}

Polyhedron tangent_cone(const Polyhedron& p, const Vector& x) {
  if (!p.contains(x)) throw std::invalid_argument("tangent_cone: point " + to_string(x) + " not in polyhedron");
  HRep h;
  h.ambient_dim = p.ambient_dim();
  for (std::size_t i : p.active_inequalities(x)) h.inequalities.push_back({p.h().inequalities[i].normal, Rational(0)});
  for (const auto& c : p.h().equalities) h.equalities.push_back({c.normal, Rational(0)});
  return Polyhedron::from_hrep(h);
}

Polyhedron polar(const Polyhedron& p) {
  HRep h;
  h.ambient_dim = p.ambient_dim();
  for (const auto& x : p.v().vertices) h.inequalities.push_back({x, Rational(1)});
  for (const auto& r : p.v().rays) h.inequalities.push_back({r, Rational(0)});
  for (const auto& l : p.v().lines) h.equalities.push_back({l, Rational(0)});
  return Polyhedron::from_hrep(h);
}

Vector relative_interior_point(const Polyhedron& p) {
  if (p.is_empty()) throw std::invalid_argument("relative_interior_point of empty polyhedron");
  Vector x = zero_vector(p.ambient_dim());
  for (const auto& v : p.v().vertices) x += v;
  x /= Rational(static_cast<long>(p.v().vertices.size()));
  for (const auto& r : p.v().rays) x += r;
  return x;
}

bool in_relative_interior(const Polyhedron& p, const Vector& x) {
  if (!p.contains(x)) return false;
  // x is relatively interior iff no inequality is tight there (canonical H-rep
  // has no inequality that is tight on all of p).
  return p.active_inequalities(x).empty();
}

Polyhedron linear_image(const Matrix& m, const Polyhedron& p) {
  if (m.cols() != p.ambient_dim()) throw std::invalid_argument("linear_image: dimension mismatch");
  VRep v;
  v.ambient_dim = m.rows();
  for (const auto& x : p.v().vertices) v.vertices.push_back(m * x);
  for (const auto& r : p.v().rays) v.rays.push_back(m * r);
  for (const auto& l : p.v().lines) v.lines.push_back(m * l);
  return Polyhedron::from_vrep(v);
}

Polyhedron preimage(const Matrix& m, const Polyhedron& p) {
  if (m.rows() != p.ambient_dim()) throw std::invalid_argument("preimage: dimension mismatch");
  HRep h;
  h.ambient_dim = m.cols();
  for (const auto& c : p.h().inequalities) h.inequalities.push_back({m.transpose() * c.normal, c.offset});
  for (const auto& c : p.h().equalities) h.equalities.push_back({m.transpose() * c.normal, c.offset});
  return Polyhedron::from_hrep(h);
}

Polyhedron intersect(const Polyhedron& a, const Polyhedron& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("intersect: dimension mismatch");
  HRep h = a.h();
  h.inequalities.insert(h.inequalities.end(), b.h().inequalities.begin(), b.h().inequalities.end());
  h.equalities.insert(h.equalities.end(), b.h().equalities.begin(), b.h().equalities.end());
  return Polyhedron::from_hrep(h);
}

Polyhedron project(const Polyhedron& p, const std::vector<Index>& coords) {
  Matrix sel(static_cast<Index>(coords.size()), p.ambient_dim());
  for (Index i = 0; i < sel.rows(); ++i)
    for (Index j = 0; j < sel.cols(); ++j) sel(i, j) = Rational(coords[i] == j ? 1 : 0);
  return linear_image(sel, p);
}

std::string to_string(const HRep& h) {
  std::ostringstream os;
  for (const auto& c : h.equalities) os << to_string(c.normal) << " . x = " << c.offset << "\n";
  for (const auto& c : h.inequalities) os << to_string(c.normal) << " . x <= " << c.offset << "\n";
  return os.str();
}

std::string to_string(const VRep& v) {
  std::ostringstream os;
  if (v.is_empty()) return "empty\n";
  for (const auto& x : v.vertices) os << "vertex " << to_string(x) << "\n";
  for (const auto& x : v.rays) os << "ray " << to_string(x) << "\n";
  for (const auto& x : v.lines) os << "line " << to_string(x) << "\n";
  return os.str();
}

}  // namespace geodual
