#pragma once

#include <vector>

#include "cech/presheaf.hpp"

namespace cech {

// A space over a base poset whose projection is a local homeomorphism: it
// maps the minimal open of every total-space point isomorphically onto the
// minimal open of its image.
struct EtaleSpace {
  const FinitePoset* base = nullptr;
  FinitePoset total;
  std::vector<int> projection;  // total point -> base point

  std::vector<int> fiber(int base_point) const;
};

// Validates monotonicity and the local-homeomorphism condition.
EtaleSpace make_etale_space(const FinitePoset& base, FinitePoset total,
                            std::vector<int> projection);

// Space of germs: points (x, s) for s in the stalk of P at x, ordered by
// (x, s) <= (y, t) iff x <= y and s restricts to t.
EtaleSpace etale_space(const Presheaf& p);

// U |-> monotone sections of the projection over U. Always a sheaf.
Presheaf sections_sheaf(const EtaleSpace& e);

// Isomorphism over the base: an order-isomorphism of total spaces commuting
// with the projections.
bool etale_isomorphic(const EtaleSpace& a, const EtaleSpace& b,
                      long long budget = 2000000);

// Pointwise fibered product over the common base.
EtaleSpace fibered_product(const EtaleSpace& a, const EtaleSpace& b);

}  // namespace cech
