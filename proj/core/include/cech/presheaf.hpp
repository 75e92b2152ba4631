#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cech/group.hpp"
#include "cech/poset.hpp"

namespace cech {

// A presheaf of finite sets on a FinitePoset, materialized on the full open
// lattice. Elements of P(U) are indices into a per-open label list;
// restriction maps are stored for every comparable pair of opens and are
// checked to be functorial.
class Presheaf {
 public:
  // restrict_fn(vOpen, uOpen, elem): the restriction P(V) -> P(U) for U <= V,
  // both given as indices into space.all_opens().
  Presheaf(const FinitePoset& space,
           std::vector<std::vector<std::string>> values,
           const std::function<int(int, int, int)>& restrict_fn);

  const FinitePoset& space() const { return *space_; }
  int open_count() const { return static_cast<int>(opens_.size()); }
  const Open& open_at(int i) const { return opens_[i]; }
  int open_index(const Open& u) const;
  int empty_open_index() const { return open_index(space_->empty_open()); }
  int whole_open_index() const { return open_index(space_->whole()); }

  int value_count(int open_idx) const { return static_cast<int>(values_[open_idx].size()); }
  const std::string& value_name(int open_idx, int elem) const {
    return values_[open_idx][elem];
  }
  int value_index(int open_idx, const std::string& name) const;

  // P(V) -> P(U) for U subset of V.
  int restrict(int v_open, int u_open, int elem) const;

  // Functoriality: identity restrictions and composition along all chains.
  void validate() const;

 private:
  const FinitePoset* space_;
  std::vector<Open> opens_;
  std::map<std::uint64_t, int> open_lookup_;
  std::vector<std::vector<std::string>> values_;
  std::map<std::pair<int, int>, std::vector<int>> res_;
};

// A natural transformation between presheaves on the same space.
struct PresheafMorphism {
  const Presheaf* source = nullptr;
  const Presheaf* target = nullptr;
  std::vector<std::vector<int>> component;  // per open: P(U) -> Q(U)

  bool is_isomorphism() const;
};

// Every natural transformation source -> target, in canonical order.
// Throws BudgetError beyond `budget` candidate maps per open.
std::vector<PresheafMorphism> all_morphisms(const Presheaf& source,
                                            const Presheaf& target,
                                            long long budget = 2000000);
bool naturality_holds(const PresheafMorphism& m);
std::optional<PresheafMorphism> find_isomorphism(const Presheaf& a, const Presheaf& b,
                                                 long long budget = 2000000);

// Sheaf conditions, checked on the covers by minimal opens plus the empty
// cover of the empty open (these generate all covers on a finite poset).
bool is_separated(const Presheaf& p);
bool is_sheaf(const Presheaf& p);

// Same conditions checked against *every* cover of every open; exponential,
// intended for cross-validation on tiny spaces.
bool is_separated_full(const Presheaf& p);
bool is_sheaf_full(const Presheaf& p);

struct SheafificationStep {
  Presheaf result;
  std::vector<std::vector<int>> unit;  // per open: P(U) -> result(U)
};

// Quotient by local equality; the result is separated and the unit map is the
// universal map to a separated presheaf.
SheafificationStep separate(const Presheaf& p);

// separate followed by amalgamation of compatible families over the minimal
// cover of each open; the result is a sheaf, the unit is locally surjective.
SheafificationStep sheafify(const Presheaf& p);

// The stalk at x: attained at the minimal open of x. Returns the open index
// of minimal_open(x); values and germs are read off the presheaf there.
int stalk_open(const Presheaf& p, int x);
std::vector<std::string> stalk(const Presheaf& p, int x);

// Constant presheaf: every open gets the same value set, identity
// restrictions.
Presheaf constant_presheaf(const FinitePoset& space, const std::vector<std::string>& values);

// Product presheaf (P x Q)(U) = P(U) x Q(U).
Presheaf product(const Presheaf& p, const Presheaf& q);

// A presheaf of finite groups: a value shape plus one group structure per
// open, with homomorphic restrictions. Element order of each group matches
// the presheaf's value labels.
class GroupPresheaf {
 public:
  GroupPresheaf(Presheaf shape, std::vector<FiniteGroup> groups);

  const Presheaf& shape() const { return shape_; }
  const FiniteGroup& group_at(int open_idx) const { return groups_[open_idx]; }
  const FinitePoset& space() const { return shape_.space(); }
  int restrict(int v_open, int u_open, int elem) const {
    return shape_.restrict(v_open, u_open, elem);
  }
  bool is_sheaf_of_groups() const { return is_sheaf(shape_); }

 private:
  Presheaf shape_;
  std::vector<FiniteGroup> groups_;
};

// The sheaf of locally constant G-valued functions (the sheafified constant
// presheaf): value on U = one element of G per connected component.
GroupPresheaf constant_group_sheaf(const FinitePoset& space, const FiniteGroup& g);

}  // namespace cech
