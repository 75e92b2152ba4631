#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cech/presheaf.hpp"

namespace cech {

inline constexpr long long kDefaultBudget = 10'000'000;

// A sheaf of sets with a left action of a sheaf of groups.
struct Torsor {
  const GroupPresheaf* coeff = nullptr;
  Presheaf carrier;
  // action[open][g][s] = g . s
  std::vector<std::vector<std::vector<int>>> action;

  int act(int open_idx, int g, int s) const { return action[open_idx][g][s]; }
};

// Torsor axioms: the action is a map of sheaves, the carrier is a sheaf, the
// opens with sections cover the space, and each nonempty section set is acted
// on freely and transitively.
CheckResult check_torsor(const Torsor& t);

// The coefficient sheaf acting on itself by left multiplication.
Torsor trivial_torsor(const GroupPresheaf& g);

std::vector<std::string> global_sections(const Torsor& t);

// A degree-1 Cech cocycle. Values are stored on sorted inhabited pairs
// (a < b); g_ba is derived as the inverse and g_aa as the unit.
// Two modes: over a concrete cover with sheaf coefficients, or over an
// abstract nerve with a constant group (inhabited pairs must be connected).
class Cocycle1 {
 public:
  Cocycle1(Cover cover, const GroupPresheaf& coeff,
           std::map<std::pair<int, int>, int> g);
  Cocycle1(AbstractNerve nv, FiniteGroup group,
           std::map<std::pair<int, int>, int> g);

  bool cover_mode() const { return cover_.has_value(); }
  const Cover& cover() const { return *cover_; }
  const AbstractNerve& nerve() const { return nerve_; }
  const GroupPresheaf& coeff() const { return *coeff_; }
  const FiniteGroup& constant_group() const { return *group_; }

  int index_count() const { return nerve_.index_count(); }
  // The group the value g_ab lives in.
  const FiniteGroup& group_on(int a, int b) const;
  // The group a witness component f_a lives in.
  const FiniteGroup& group_at(int a) const;
  int at(int a, int b) const;
  const std::map<std::pair<int, int>, int>& pairs() const { return g_; }

  friend bool operator==(const Cocycle1& a, const Cocycle1& b) {
    return a.g_ == b.g_;
  }

 private:
  std::optional<Cover> cover_;
  AbstractNerve nerve_;
  const GroupPresheaf* coeff_ = nullptr;
  std::optional<FiniteGroup> group_;
  std::map<std::pair<int, int>, int> g_;

  void check() const;
};

Cocycle1 trivial_cocycle1(const Cover& cover, const GroupPresheaf& coeff);
Cocycle1 trivial_cocycle1(const AbstractNerve& nv, const FiniteGroup& group);

// Cocycle extraction: the unique g_ab with g_ab . s_b = s_a on overlaps.
// `sections` holds one chosen section index per cover member; every member
// must have at least one section.
Cocycle1 torsor_to_cocycle(const Torsor& t, const Cover& cover,
                           const std::vector<int>& sections);

// Gluing construction: sections over W are families t_a in G(W /\ U_a) with
// t_b = t_a g_ab on overlaps, with the left translation action.
Torsor cocycle_to_torsor(const Cocycle1& c);

// A family f_a with f_a g_ab = h_ab f_b on overlaps, or nullopt. Exhaustive
// search in canonical order over the product of the G(U_a).
std::optional<std::vector<int>> cocycles1_equivalent(
    const Cocycle1& g, const Cocycle1& h, long long budget = kDefaultBudget);

// All cocycle classes over the cover/nerve, canonical representatives in
// enumeration order.
std::vector<Cocycle1> h1(const Cover& cover, const GroupPresheaf& coeff,
                         long long budget = kDefaultBudget);
std::vector<Cocycle1> h1(const AbstractNerve& nv, const FiniteGroup& group,
                         long long budget = kDefaultBudget);

// Colimit over all covers, attained at the cover by minimal opens.
std::vector<Cocycle1> h1_colim(const GroupPresheaf& coeff,
                               long long budget = kDefaultBudget);

// An equivariant map of torsors over the same coefficients (any such map is
// an isomorphism); per-open component maps, or nullopt.
std::optional<std::vector<std::vector<int>>> torsor_isomorphism(
    const Torsor& s, const Torsor& t, long long budget = kDefaultBudget);

}  // namespace cech
