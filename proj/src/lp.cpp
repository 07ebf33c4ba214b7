#include "geodual/lp.hpp"

#include <stdexcept>

namespace geodual {

namespace {

// Dense tableau in canonical form: basis columns are unit vectors.
struct Tableau {
  std::vector<std::vector<Rational>> a;  // rows × cols
  std::vector<Rational> rhs;
  std::vector<std::size_t> basis;
  std::size_t cols = 0;

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = a[row][col].inverse();
    for (auto& x : a[row]) x *= inv;
    rhs[row] *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      const Rational f = a[i][col];
      for (std::size_t j = 0; j < cols; ++j)
        if (!a[row][j].is_zero()) a[i][j] -= f * a[row][j];
      rhs[i] -= f * rhs[row];
    }
    basis[row] = col;
  }
};

enum class PhaseResult { optimal, unbounded };

// Minimizes cost·x over the tableau's standard-form polyhedron, only letting
// columns < `allowed` enter the basis.
PhaseResult run_simplex(Tableau& t, const std::vector<Rational>& cost, std::size_t allowed) {
  while (true) {
    std::size_t entering = t.cols;
    for (std::size_t j = 0; j < allowed; ++j) {
      Rational reduced = cost[j];
      for (std::size_t i = 0; i < t.a.size(); ++i)
        if (!t.a[i][j].is_zero()) reduced -= cost[t.basis[i]] * t.a[i][j];
      if (reduced.sign() < 0) {
        entering = j;
        break;
      }
    }
    if (entering == t.cols) return PhaseResult::optimal;
    std::size_t leaving = t.a.size();
    Rational best;
    for (std::size_t i = 0; i < t.a.size(); ++i) {
      if (t.a[i][entering].sign() <= 0) continue;
      const Rational ratio = t.rhs[i] / t.a[i][entering];
      if (leaving == t.a.size() || ratio < best || (ratio == best && t.basis[i] < t.basis[leaving])) {
        leaving = i;
        best = ratio;
      }
    }
    if (leaving == t.a.size()) return PhaseResult::unbounded;
    t.pivot(leaving, entering);
  }
}

struct StandardForm {
  Tableau tableau;
  std::size_t structural = 0;  // 2n split variables + slacks
  Index n = 0;
};

// Rows: ⟨a,x+⟩ - ⟨a,x-⟩ + s = b for inequalities, without slack for
// equalities; each row followed by an artificial basis column.
StandardForm build(const HRep& h) {
  StandardForm sf;
  sf.n = h.ambient_dim;
  const std::size_t n = static_cast<std::size_t>(h.ambient_dim);
  const std::size_t ni = h.inequalities.size();
  const std::size_t ne = h.equalities.size();
  const std::size_t rows = ni + ne;
  sf.structural = 2 * n + ni;
  Tableau& t = sf.tableau;
  t.cols = sf.structural + rows;
  t.a.assign(rows, std::vector<Rational>(t.cols, Rational(0)));
  t.rhs.assign(rows, Rational(0));
  t.basis.assign(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const bool ineq = r < ni;
    const Constraint& c = ineq ? h.inequalities[r] : h.equalities[r - ni];
    if (c.normal.size() != h.ambient_dim) throw std::invalid_argument("solve_lp: constraint length mismatch");
    for (std::size_t j = 0; j < n; ++j) {
      t.a[r][j] = c.normal(static_cast<Index>(j));
      t.a[r][n + j] = -c.normal(static_cast<Index>(j));
    }
    if (ineq) t.a[r][2 * n + r] = Rational(1);
    t.rhs[r] = c.offset;
    if (t.rhs[r].sign() < 0) {
      for (auto& x : t.a[r]) x = -x;
      t.rhs[r] = -t.rhs[r];
    }
    t.a[r][sf.structural + r] = Rational(1);
    t.basis[r] = sf.structural + r;
  }
  return sf;
}

// Phase one; on success removes artificial columns from the basis (dropping
// redundant rows). Returns false when infeasible.
bool phase_one(StandardForm& sf) {
  Tableau& t = sf.tableau;
  std::vector<Rational> cost(t.cols, Rational(0));
  for (std::size_t j = sf.structural; j < t.cols; ++j) cost[j] = Rational(1);
  run_simplex(t, cost, t.cols);
  Rational infeasibility(0);
  for (std::size_t i = 0; i < t.a.size(); ++i)
    if (t.basis[i] >= sf.structural) infeasibility += t.rhs[i];
  if (infeasibility.sign() > 0) return false;
  for (std::size_t i = 0; i < t.a.size();) {
    if (t.basis[i] < sf.structural) {
      ++i;
      continue;
    }
    std::size_t col = sf.structural;
    for (std::size_t j = 0; j < sf.structural; ++j)
      if (!t.a[i][j].is_zero()) {
        col = j;
        break;
      }
    if (col < sf.structural) {
      t.pivot(i, col);
      ++i;
    } else {
      t.a.erase(t.a.begin() + static_cast<std::ptrdiff_t>(i));
      t.rhs.erase(t.rhs.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  return true;
}

}  // namespace

LpResult solve_lp(const Vector& objective, const HRep& h, Sense sense) {
  if (objective.size() != h.ambient_dim) throw std::invalid_argument("solve_lp: objective length mismatch");
  StandardForm sf = build(h);
  LpResult result;
  if (!phase_one(sf)) {
    result.status = LpStatus::infeasible;
    return result;
  }
  const std::size_t n = static_cast<std::size_t>(sf.n);
  Tableau& t = sf.tableau;
  std::vector<Rational> cost(t.cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    Rational c = objective(static_cast<Index>(j));
    if (sense == Sense::maximize) c = -c;
    cost[j] = c;
    cost[n + j] = -c;
  }
  if (run_simplex(t, cost, sf.structural) == PhaseResult::unbounded) {
    result.status = LpStatus::unbounded;
    return result;
  }
  std::vector<Rational> values(t.cols, Rational(0));
  for (std::size_t i = 0; i < t.a.size(); ++i) values[t.basis[i]] = t.rhs[i];
  result.status = LpStatus::optimal;
  result.optimizer = zero_vector(sf.n);
  for (std::size_t j = 0; j < n; ++j) result.optimizer(static_cast<Index>(j)) = values[j] - values[n + j];
  result.value = inner(objective, result.optimizer);
  return result;
}

bool is_feasible(const HRep& h) {
  StandardForm sf = build(h);
  return phase_one(sf);
}

bool is_redundant_inequality(const HRep& h, std::size_t index) {
  HRep rest = h;
  const Constraint c = rest.inequalities.at(index);
  rest.inequalities.erase(rest.inequalities.begin() + static_cast<std::ptrdiff_t>(index));
  const LpResult r = solve_lp(c.normal, rest, Sense::maximize);
  if (r.status == LpStatus::infeasible) return true;
  if (r.status == LpStatus::unbounded) return false;
  return r.value <= c.offset;
}

}  // namespace geodual
