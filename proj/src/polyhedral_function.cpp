#include "geodual/polyhedral_function.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "geodual/lp.hpp"

namespace geodual {

namespace {

bool piece_less(const AffinePiece& p, const AffinePiece& q) {
  if (lex_less(p.a, q.a)) return true;
  if (lex_less(q.a, p.a)) return false;
  return p.b < q.b;
}

bool constraint_less(const Constraint& p, const Constraint& q) {
  if (lex_less(p.normal, q.normal)) return true;
  if (lex_less(q.normal, p.normal)) return false;
  return p.offset < q.offset;
}

void check_dim(const PolyhedralConvexFunction& f, const Vector& x, const char* what) {
  if (x.size() != f.ambient_dim()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

Rational max_value(const PolyhedralConvexFunction& f, const Vector& x) {
  std::optional<Rational> best;
  for (const auto& p : f.pieces()) {
    Rational v = inner(p.a, x) - p.b;
    if (!best || v > *best) best = v;
  }
  return *best;
}

bool in_domain(const PolyhedralConvexFunction& f, const Vector& x) {
  for (const auto& c : f.constraints())
    if (inner(c.normal, x) > c.offset) return false;
  return true;
}

// Subsets of `items` encoded by the bits of `mask`.
std::vector<std::size_t> subset(const std::vector<std::size_t>& items, unsigned long mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (mask >> i & 1UL) out.push_back(items[i]);
  return out;
}

// u ∈ conv{a_i : i ∈ I} + cone{a_j : j ∈ J}, decided by an exact LP in the
// combination coefficients.
bool in_hull(const PolyhedralConvexFunction& f, const std::vector<std::size_t>& I, const std::vector<std::size_t>& J,
             const Vector& u) {
  const Index n = f.ambient_dim();
  const Index k = static_cast<Index>(I.size() + J.size());
  HRep h;
  h.ambient_dim = k;
  for (Index c = 0; c < k; ++c) h.inequalities.push_back({-unit_vector(k, c), Rational(0)});
  Vector ones = zero_vector(k);
  for (std::size_t c = 0; c < I.size(); ++c) ones(static_cast<Index>(c)) = Rational(1);
  h.equalities.push_back({ones, Rational(1)});
  for (Index r = 0; r < n; ++r) {
    Vector row(k);
    for (std::size_t c = 0; c < I.size(); ++c) row(static_cast<Index>(c)) = f.pieces()[I[c]].a(r);
    for (std::size_t c = 0; c < J.size(); ++c) row(static_cast<Index>(I.size() + c)) = f.constraints()[J[c]].normal(r);
    h.equalities.push_back({row, u(r)});
  }
  return is_feasible(h);
}

}  // namespace

PolyhedralConvexFunction PolyhedralConvexFunction::make(Index n, const std::vector<AffinePiece>& pieces,
                                                        const std::vector<Constraint>& constraints) {
  if (pieces.empty()) throw ImproperFunction("function has no affine piece");
  HRep h;
  h.ambient_dim = n + 1;
  for (const auto& p : pieces) {
    if (p.a.size() != n) throw std::invalid_argument("affine piece has wrong length");
    Vector row(n + 1);
    row << p.a, Rational(-1);
    h.inequalities.push_back({row, p.b});
  }
  for (const auto& c : constraints) {
    if (c.normal.size() != n) throw std::invalid_argument("domain constraint has wrong length");
    Vector row(n + 1);
    row << c.normal, Rational(0);
    h.inequalities.push_back({row, c.offset});
  }
  return from_epigraph(Polyhedron::from_hrep(h));
}

PolyhedralConvexFunction PolyhedralConvexFunction::from_epigraph(const Polyhedron& epi) {
  const Index n = epi.ambient_dim() - 1;
  if (n < 0) throw std::invalid_argument("epigraph needs at least one coordinate");
  if (epi.is_empty()) throw ImproperFunction("function has empty domain");
  if (!epi.in_recession_cone(unit_vector(n + 1, n))) throw std::invalid_argument("set is not an epigraph");
  PolyhedralConvexFunction f;
  f.n_ = n;
  for (const auto& c : epi.h().inequalities) {
    const Rational s = c.normal(n);
    const Vector a = c.normal.head(n);
    if (s.is_zero()) {
      f.constraints_.push_back({a, c.offset});
    } else {
      const Rational scale = (-s).inverse();
      f.pieces_.push_back({Vector(a * scale), c.offset * scale});
    }
  }
  for (const auto& c : epi.h().equalities) {
    const Vector a = c.normal.head(n);
    f.constraints_.push_back({a, c.offset});
    f.constraints_.push_back({Vector(-a), -c.offset});
  }
  if (f.pieces_.empty()) throw ImproperFunction("function is unbounded below");
  std::sort(f.pieces_.begin(), f.pieces_.end(), piece_less);
  std::sort(f.constraints_.begin(), f.constraints_.end(), constraint_less);
  HRep d;
  d.ambient_dim = n;
  d.inequalities = f.constraints_;
  f.domain_ = Polyhedron::from_hrep(d);
  f.epi_ = epi;
  return f;
}

ExtendedRational evaluate(const PolyhedralConvexFunction& f, const Vector& x) {
  check_dim(f, x, "evaluate");
  if (!in_domain(f, x)) return ExtendedRational::infinity();
  return ExtendedRational(max_value(f, x));
}

ActiveSets active_sets(const PolyhedralConvexFunction& f, const Vector& x) {
  check_dim(f, x, "active_sets");
  if (!in_domain(f, x)) throw std::invalid_argument("active_sets: point outside dom f");
  const Rational fx = max_value(f, x);
  ActiveSets s;
  for (std::size_t i = 0; i < f.pieces().size(); ++i)
    if (inner(f.pieces()[i].a, x) - f.pieces()[i].b == fx) s.I.push_back(i);
  for (std::size_t j = 0; j < f.constraints().size(); ++j)
    if (inner(f.constraints()[j].normal, x) == f.constraints()[j].offset) s.J.push_back(j);
  return s;
}

Polyhedron subdifferential(const PolyhedralConvexFunction& f, const Vector& x) {
  const ActiveSets s = active_sets(f, x);
  VRep v;
  v.ambient_dim = f.ambient_dim();
  for (auto i : s.I) v.vertices.push_back(f.pieces()[i].a);
  for (auto j : s.J) v.rays.push_back(f.constraints()[j].normal);
  return Polyhedron::from_vrep(v);
}

bool in_subdifferential(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u) {
  check_dim(f, x, "in_subdifferential");
  check_dim(f, u, "in_subdifferential");
  if (!in_domain(f, x)) return false;
  const ActiveSets s = active_sets(f, x);
  return in_hull(f, s.I, s.J, u);
}

ExtendedRational directional_derivative(const PolyhedralConvexFunction& f, const Vector& x, const Vector& w) {
  check_dim(f, w, "directional_derivative");
  const ActiveSets s = active_sets(f, x);
  for (auto j : s.J)
    if (inner(f.constraints()[j].normal, w).sign() > 0) return ExtendedRational::infinity();
  std::optional<Rational> best;
  for (auto i : s.I) {
    Rational v = inner(f.pieces()[i].a, w);
    if (!best || v > *best) best = v;
  }
  return ExtendedRational(*best);
}

PolyhedralConvexFunction conjugate(const PolyhedralConvexFunction& f) {
  const Index n = f.ambient_dim();
  const VRep& g = f.epigraph().v();
  std::vector<AffinePiece> pieces;
  std::vector<Constraint> constraints;
  for (const auto& v : g.vertices) pieces.push_back({v.head(n), v(n)});
  for (const auto& r : g.rays) constraints.push_back({r.head(n), r(n)});
  for (const auto& l : g.lines) {
    constraints.push_back({l.head(n), l(n)});
    constraints.push_back({Vector(-l.head(n)), -l(n)});
  }
  return PolyhedralConvexFunction::make(n, pieces, constraints);
}

RefinedActiveSets refined_active_sets(const PolyhedralConvexFunction& f, const Vector& x, const Vector& w) {
  check_dim(f, w, "refined_active_sets");
  const ActiveSets s = active_sets(f, x);
  for (auto j : s.J)
    if (inner(f.constraints()[j].normal, w).sign() > 0)
      throw std::invalid_argument("refined_active_sets: direction leaves dom f");
  const Rational fx = max_value(f, x);
  std::optional<Rational> top;
  for (auto i : s.I) {
    Rational v = inner(f.pieces()[i].a, w);
    if (!top || v > *top) top = v;
  }
  RefinedActiveSets out;
  for (auto i : s.I)
    if (inner(f.pieces()[i].a, w) == *top) out.sets.I.push_back(i);
  for (auto j : s.J)
    if (inner(f.constraints()[j].normal, w).is_zero()) out.sets.J.push_back(j);

  std::optional<Rational> bound;
  auto tighten = [&](const Rational& t) {
    if (!bound || t < *bound) bound = t;
  };
  // a piece overtakes the refined maximizers only after its gap closes
  for (const auto& p : f.pieces()) {
    const Rational slope = inner(p.a, w);
    if (slope > *top) tighten((fx - (inner(p.a, x) - p.b)) / (slope - *top));
  }
  // an inactive constraint stays slack until the direction reaches it
  for (std::size_t k = 0; k < f.constraints().size(); ++k) {
    if (std::binary_search(s.J.begin(), s.J.end(), k)) continue;
    const Constraint& c = f.constraints()[k];
    const Rational slope = inner(c.normal, w);
    if (slope.sign() > 0) tighten((c.offset - inner(c.normal, x)) / slope);
  }
  out.t_bar = bound ? *bound : Rational(1);
  return out;
}

Indicatrix indicatrix(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u) {
  if (!in_subdifferential(f, x, u)) throw std::invalid_argument("indicatrix: u is not a subgradient at x");
  const ActiveSets s = active_sets(f, x);
  HRep h;
  h.ambient_dim = f.ambient_dim();
  for (auto j : s.J) h.inequalities.push_back({f.constraints()[j].normal, Rational(0)});
  for (auto i : s.I) h.inequalities.push_back({Vector(f.pieces()[i].a - u), Rational(0)});
  return {Polyhedron::from_hrep(h)};
}

Indicatrix indicatrix_by_cells(const PolyhedralConvexFunction& f, const Vector& x, const Vector& u) {
  if (!in_subdifferential(f, x, u)) throw std::invalid_argument("indicatrix: u is not a subgradient at x");
  const Index n = f.ambient_dim();
  const ActiveSets s = active_sets(f, x);
  if (s.I.size() + s.J.size() >= 8 * sizeof(unsigned long))
    throw std::length_error("indicatrix_by_cells: too many active indices");
  std::vector<Vector> rays, lines;
  for (unsigned long mi = 1; mi < (1UL << s.I.size()); ++mi) {
    const auto I1 = subset(s.I, mi);
    for (unsigned long mj = 0; mj < (1UL << s.J.size()); ++mj) {
      const auto J1 = subset(s.J, mj);
      if (!in_hull(f, I1, J1, u)) continue;
      // closure of the directions whose refined sets are exactly (I1, J1)
      HRep cell;
      cell.ambient_dim = n;
      const Vector& lead = f.pieces()[I1.front()].a;
      for (auto i : s.I) {
        const Vector d = f.pieces()[i].a - lead;
        if (std::binary_search(I1.begin(), I1.end(), i))
          cell.equalities.push_back({d, Rational(0)});
        else
          cell.inequalities.push_back({d, Rational(0)});
      }
      for (auto j : s.J) {
        const Vector& a = f.constraints()[j].normal;
        if (std::binary_search(J1.begin(), J1.end(), j))
          cell.equalities.push_back({a, Rational(0)});
        else
          cell.inequalities.push_back({a, Rational(0)});
      }
      const Polyhedron closed = Polyhedron::from_hrep(cell);
      const Vector w = relative_interior_point(closed);
      const RefinedActiveSets r = refined_active_sets(f, x, w);
      if (r.sets.I != I1 || r.sets.J != J1) continue;
      const Vector probe = x + (r.t_bar / Rational(2)) * w;
      if (!in_subdifferential(f, probe, u))
        throw std::logic_error("indicatrix_by_cells: witness step leaves the subdifferential");
      rays.insert(rays.end(), closed.v().rays.begin(), closed.v().rays.end());
      lines.insert(lines.end(), closed.v().lines.begin(), closed.v().lines.end());
    }
  }
  return {Polyhedron::cone(rays, lines, n)};
}

std::string to_string(const PolyhedralConvexFunction& f) {
  std::ostringstream os;
  os << "max of:\n";
  for (const auto& p : f.pieces()) {
    os << "  " << to_string(p.a) << " . x";
    if (p.b.sign() < 0)
      os << " + " << (-p.b).to_string();
    else
      os << " - " << p.b.to_string();
    os << "\n";
  }
  os << "subject to:\n";
  if (f.constraints().empty()) os << "  (none)\n";
  for (const auto& c : f.constraints()) os << "  " << to_string(c.normal) << " . x <= " << c.offset.to_string() << "\n";
  return os.str();
}

}  // namespace geodual
