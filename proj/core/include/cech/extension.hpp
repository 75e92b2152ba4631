#pragma once

#include "cech/etale.hpp"
#include "cech/gerbe.hpp"

namespace cech {

// A finite groupoid extension L -> G -> M x_X M over a surjective etale map
// pi: M -> X, given as a fiberwise transitive action: the arrows m -> n (for
// pi(m) = pi(n)) are the elements of G carrying m to n, composition is the
// group law, and j embeds L onto the common stabilizer (= every vertex
// group), which makes (s, t) surjective onto M x_X M.
struct GroupoidExtension {
  FiniteGroup l, g;
  std::vector<int> j;  // embedding L -> G onto the stabilizer of every point
  EtaleSpace m;        // surjective etale projection
  // action[e] is the permutation of total points by e in G; it must be a
  // group action by homeomorphisms over X
  std::vector<std::vector<int>> action;
};

// Validates all extension axioms; throws ValidationError with the violated
// axiom named.
GroupoidExtension make_extension(FiniteGroup l, FiniteGroup g, std::vector<int> j,
                                 EtaleSpace m, std::vector<std::vector<int>> action);

// The product extension (L x H acting through H on the trivial H-cover
// X x H); its class is trivial.
GroupoidExtension split_extension(const FiniteGroup& l, const FiniteGroup& h,
                                  const FinitePoset& base);

// Chart data for extracting the band and the class of an extension:
// connected charts with chosen sections of pi, and for each inhabited pair an
// arrow of G per component of the intersection carrying the second section to
// the first.
struct ExtensionCharts {
  Cover cover;
  // per chart: base point -> total point (-1 outside the chart), monotone,
  // sectional over the chart
  std::vector<std::vector<int>> sections;
  // per inhabited increasing pair: one G element per component of U_ab with
  // g . a_b = a_a on that component
  std::map<std::pair<int, int>, std::vector<int>> arrows;
};

// The band (constant L twisted by conjugation along the chosen arrows) and
// the 2-cocycle theta_a(g_ab g_bc g_ac^-1); the result always passes
// check_cocycle2.
std::pair<BandPresentation, Cocycle2> extension_to_cocycle(
    const GroupoidExtension& ext, const ExtensionCharts& charts);

}  // namespace cech
