#pragma once

#include <optional>

#include "cech/group.hpp"
#include "cech/poset.hpp"

namespace cech {

// An abelian Cech n-cochain on a cover nerve with constant coefficients:
// one group element per inhabited strictly increasing (n+1)-tuple.
struct AbelianCochain {
  int degree = 0;
  std::map<std::vector<int>, int> values;

  friend bool operator==(const AbelianCochain& a, const AbelianCochain& b) {
    return a.degree == b.degree && a.values == b.values;
  }
  friend auto operator<=>(const AbelianCochain& a, const AbelianCochain& b) = default;
};

// The cochain that is the unit on every inhabited tuple.
AbelianCochain unit_cochain(const AbstractNerve& nv, const FiniteGroup& a, int degree);

bool is_unit_cochain(const AbelianCochain& c, const FiniteGroup& a);

// Alternating-product coboundary (dc)(t) = prod_i c(t minus i)^(+/-1) over
// inhabited (n+2)-tuples. Requires an abelian coefficient group; degrees
// beyond the nerve depth give the empty cochain, so d(d(c)) is always unit.
AbelianCochain cech_coboundary(const AbstractNerve& nv, const FiniteGroup& a,
                               const AbelianCochain& c);

// All n-cochains in canonical mixed-radix order (last tuple varies fastest).
// Throws BudgetError when |A|^#tuples exceeds the budget.
std::vector<AbelianCochain> all_cochains(const AbstractNerve& nv, const FiniteGroup& a,
                                         int degree, long long budget);

// |H^n| = |ker d_n| / |im d_(n-1)|, by direct enumeration.
long long cohomology_order(const AbstractNerve& nv, const FiniteGroup& a, int degree,
                           long long budget);

// Some z of degree xi.degree - 1 with dz = xi, or nullopt. Deterministic:
// first solution in canonical enumeration order.
std::optional<AbelianCochain> solve_coboundary(const AbstractNerve& nv,
                                               const FiniteGroup& a,
                                               const AbelianCochain& xi,
                                               long long budget);

}  // namespace cech
