#ifndef GEODUAL_LP_HPP
#define GEODUAL_LP_HPP

#include "geodual/polyhedron.hpp"

namespace geodual {

enum class LpStatus { optimal, unbounded, infeasible };
enum class Sense { minimize, maximize };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational value;     ///< meaningful only when optimal
  Vector optimizer;   ///< meaningful only when optimal
};

/// Exact two-phase simplex (Bland's rule) over the constraints of `h` with
/// free variables.
LpResult solve_lp(const Vector& objective, const HRep& h, Sense sense);

inline LpResult solve_lp(const Vector& objective, const Polyhedron& p, Sense sense) {
  return solve_lp(objective, p.h(), sense);
}

/// Feasibility of an H-representation via phase one.
bool is_feasible(const HRep& h);

/// True if inequality `index` of h can be dropped without changing the set:
/// maximizing its left-hand side over the remaining constraints stays within
/// its offset.
bool is_redundant_inequality(const HRep& h, std::size_t index);

}  // namespace geodual

#endif  // GEODUAL_LP_HPP
