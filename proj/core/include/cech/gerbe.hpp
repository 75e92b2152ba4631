#pragma once

#include "cech/cochain.hpp"
#include "cech/groupoid.hpp"

namespace cech {

// A band presented over a cover: a coefficient group K_alpha per chart and a
// gluing isomorphism lambda_ab: K_b -> K_a per inhabited pair. Two modes:
//  - nerve mode: an abstract nerve with constant groups; every inhabited
//    tuple must be connected.
//  - cover mode: a concrete cover on a finite space with locally constant
//    coefficients; data on an intersection carries one entry per connected
//    component.
// A "value" of K_alpha over the intersection of a tuple is one group element
// per component of that intersection (always exactly one in nerve mode).
class BandPresentation {
 public:
  using Value = std::vector<int>;

  // lambda maps each inhabited increasing pair (a, b) to one element map
  // K_b -> K_a per component of U_ab; each map must be an isomorphism.
  BandPresentation(AbstractNerve nerve, std::vector<FiniteGroup> groups,
                   std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda);
  BandPresentation(Cover cover, std::vector<FiniteGroup> groups,
                   std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda);

  const AbstractNerve& nerve() const { return nerve_; }
  bool cover_mode() const { return cover_.has_value(); }
  const Cover& cover() const;
  int index_count() const { return static_cast<int>(groups_.size()); }
  const FiniteGroup& group(int alpha) const { return groups_[alpha]; }

  // number of connected components of the intersection of an inhabited tuple
  int components(const std::vector<int>& t) const;
  // fine ⊇ coarse as index sets; the component of U_coarse containing
  // component j of U_fine
  int parent_component(const std::vector<int>& fine, const std::vector<int>& coarse,
                       int j) const;

  Value unit_value(int alpha, const std::vector<int>& t) const;
  Value mul(int alpha, const Value& x, const Value& y) const;
  Value inv(int alpha, const Value& x) const;
  bool is_central(int alpha, const Value& x) const;
  // restrict a K_alpha value from U_coarse to U_fine (fine ⊇ coarse)
  Value restrict(int alpha, const std::vector<int>& coarse,
                 const std::vector<int>& fine, const Value& v) const;
  // the element map of lambda extended to arbitrary index order: stored map
  // for a < b, its inverse for a > b, identity for a == b; per component of
  // the pair intersection
  std::vector<int> lambda_map(int a, int b, int comp) const;
  // apply extended lambda_ab to a K_b value over U_t, where t contains a, b
  Value apply_lambda(int a, int b, const std::vector<int>& t, const Value& v) const;

  // same cover/nerve shape and the same coefficient groups (lambda may differ)
  bool same_coefficients(const BandPresentation& other) const;

  std::string value_name(int alpha, const Value& v) const;

 private:
  AbstractNerve nerve_;
  std::optional<Cover> cover_;
  std::vector<FiniteGroup> groups_;
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda_;
  // per inhabited tuple: component masks (cover mode), or one dummy entry
  std::map<std::vector<int>, std::vector<std::uint64_t>> comps_;

  void validate();
};

// A normal 2-cocycle: g_abc in K_a over U_abc per inhabited increasing
// triple; values at permuted or repeated index triples are derived.
struct Cocycle2 {
  BandPresentation band;
  std::map<std::vector<int>, BandPresentation::Value> g;
};

Cocycle2 trivial_cocycle2(const BandPresentation& band);

// Verifies, with a first-failure diagnostic:
//  (i)  lambda_ab lambda_bc = (g_abc)_* lambda_ac on triple overlaps
//  (ii) g_abc g_acd = lambda_ab(g_bcd) g_abd on quadruple overlaps
//  (iii) normality, which holds by construction of the storage
CheckResult check_cocycle2(const Cocycle2& c);

// g extended to an arbitrary ordered triple, as a K_a value over U_t (t must
// contain the triple's indices): unit when indices repeat, otherwise the
// stored value or its lambda-transported inverse, per permutation parity.
BandPresentation::Value extended_g(const Cocycle2& c, int a, int b, int d,
                                   const std::vector<int>& t);

// Witness for equivalence of 2-cocycles: k_ab in K_a over U_ab per pair with
//   d.lambda_ab = (k_ab)_* c.lambda_ab   and
//   d.g_abc = k_ab lambda_ab(k_bc) c.g_abc k_ac^-1.
using CocycleWitness = std::map<std::pair<int, int>, BandPresentation::Value>;

std::optional<CocycleWitness> cocycles2_equivalent(const Cocycle2& c, const Cocycle2& d,
                                                   long long budget);

// All classes of 2-cocycles with the given lambda presentation, canonical
// first representatives in enumeration order. `threads` splits the candidate
// enumeration deterministically.
std::vector<Cocycle2> h2(const BandPresentation& band, long long budget,
                         int threads = 1);

// The sheaf of groupoids built from a 2-cocycle, materialized stalkwise: one
// finite groupoid per (inhabited tuple S, component of its intersection),
// modelling the stalk at a point lying in exactly the charts of S. Objects
// are the indices of S; an arrow b -> a is an element of K_a; composition is
// k . lambda_ab(l) . g_abc.
struct GerbeGroupoid {
  const Cocycle2* source = nullptr;
  std::vector<std::pair<std::vector<int>, int>> stalk_keys;  // (tuple, component)
  std::vector<FiniteGroupoid> stalks;

  int stalk_index(const std::vector<int>& tuple, int comp) const;
  // arrow index of element k: (object at pos_b) -> (object at pos_a)
  int arrow_of(int stalk, int pos_a, int pos_b, int k) const;
  // inverse lookup: arrow index -> (pos_a, pos_b, k)
  std::tuple<int, int, int> arrow_data(int stalk, int arrow) const;
};

// Throws ValidationError when the cocycle is invalid: with validate_input the
// cocycle identities are checked up front, otherwise the failure surfaces as
// non-associativity of the constructed composition.
GerbeGroupoid cocycle_to_groupoid(const Cocycle2& c, bool validate_input = true);

// Choices presenting a gerbe groupoid over its band: arrows f_ab: a_b -> a_a
// per inhabited increasing pair (as K_a values) and band isomorphisms
// theta_a: Aut(a_a) -> K_a (as automorphism element maps of K_a).
struct BandedGerbePresentation {
  std::map<std::pair<int, int>, BandPresentation::Value> f;
  std::vector<std::vector<int>> theta;
};

BandedGerbePresentation canonical_presentation(const BandPresentation& band);

// g_abc = theta_a(f_ab f_bc f_ac^-1), composed inside the groupoid's stalks.
// Throws ValidationError when the theta/lambda square fails to commute
// strictly for the given f (the caller must re-choose f).
Cocycle2 groupoid_to_cocycle(const GerbeGroupoid& gg, const BandPresentation& band,
                             const BandedGerbePresentation& pres);

// The four change-of-choice operations on the data presenting a cocycle.
enum class ChoiceChange {
  kLambdaTwist,    // replace lambda by (k_ab)_* lambda; data: k per pair
  kThetaChange,    // replace theta_a; data: e_a per index; cocycle unchanged
  kCentralTwist,   // multiply f_ab by central z_ab; data: m per pair, central
  kObjectChange,   // replace objects a_a; data: e_a per index; unchanged
};

struct Recoordinated {
  Cocycle2 cocycle;
  CocycleWitness witness;
};

Recoordinated recoordinate_cocycle(
    const Cocycle2& c, ChoiceChange change,
    const std::map<std::pair<int, int>, BandPresentation::Value>& pair_data,
    const std::vector<BandPresentation::Value>& index_data);

// For a cocycle on a constant band with identity lambda: every g_abc is
// central, and the values form an abelian 2-cocycle over the center.
struct AbelianReduction {
  Subgroup center_of;  // center of the common coefficient group
  AbelianCochain cocycle;
};
AbelianReduction abelian_reduce(const Cocycle2& c);

// Obstruction to correcting a lambda-compatible cochain g into a cocycle:
// xi_abcd = g_abc g_acd g_abd^-1 lambda_ab(g_bcd)^-1, central and d-closed;
// when xi = d(zeta) is solvable the corrected h = zeta g is a cocycle.
struct ObstructionResult {
  Subgroup center_of;
  AbelianCochain xi;  // degree 3 over the center
  std::optional<AbelianCochain> zeta;
  std::optional<Cocycle2> corrected;
};
ObstructionResult band_obstruction(
    const BandPresentation& band,
    const std::map<std::vector<int>, BandPresentation::Value>& g, long long budget);

}  // namespace cech
