#pragma once

#include <tuple>

#include "cech/groupoid.hpp"

namespace cech {

inline constexpr long long kDescentArrowBudget = 10'000;

// Hom(a|V, b|V) as V ranges over the lattice; at opens V the value is taken
// in F(V /\ U). For a prestack this is a sheaf for every U, a, b.
Presheaf hom_presheaf(const GroupoidPresheaf& f, const Open& u, int a, int b);

struct DescentObject {
  std::vector<int> a;      // object of F(U_alpha) per index
  std::vector<int> theta;  // arrow of F(U_ab) per sorted inhabited pair
};

struct DescentArrow {
  int src = -1, dst = -1;
  std::vector<int> f;  // arrow of F(U_alpha) per index
};

// The category of descent data over a cover, materialized as a finite
// groupoid, with the structured objects kept alongside.
struct DescentCategory {
  Cover cover;
  std::vector<std::pair<int, int>> pairs;  // sorted inhabited pairs
  std::vector<DescentObject> objects;
  std::vector<DescentArrow> arrows;
  // only populated when the category is assembled into a groupoid; the
  // composition table can dwarf the data above, so the stack checks skip it
  bool assembled = false;
  FiniteGroupoid groupoid;
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> obj_lookup;
  std::map<std::tuple<int, int, std::vector<int>>, int> arr_lookup;

  int object_index(const DescentObject& o) const;
  int arrow_index(int src, int dst, const std::vector<int>& f) const;
};

DescentCategory descent_category(const Cover& cover, const GroupoidPresheaf& f,
                                 long long max_arrows = kDescentArrowBudget,
                                 bool assemble_groupoid = true);

// D: F(U) -> Des as raw object/arrow maps; works without assembly.
std::pair<std::vector<int>, std::vector<int>> comparison_maps(
    const GroupoidPresheaf& f, const DescentCategory& dc);

// D: F(U) -> Des, b |-> (b restricted, identity gluing). Needs assembly.
GroupoidFunctor comparison_functor(const GroupoidPresheaf& f,
                                   const DescentCategory& dc);

bool comparison_fully_faithful(const GroupoidPresheaf& f, const DescentCategory& dc);
bool comparison_essentially_surjective(const GroupoidPresheaf& f,
                                       const DescentCategory& dc);

// Hom-presheaves are sheaves for every open and object pair; cross-checked
// against full faithfulness of D over minimal covers (the two criteria must
// agree, anything else is an internal error).
bool is_prestack(const GroupoidPresheaf& f,
                 long long max_arrows = kDescentArrowBudget);

// Prestack and every descent datum over every minimal cover is isomorphic to
// some D(b).
bool is_stack(const GroupoidPresheaf& f,
              long long max_arrows = kDescentArrowBudget);

struct Stackification {
  GroupoidPresheaf result;
  // unit functor F(U) -> result(U) per open
  std::vector<std::vector<int>> unit_obj, unit_arr;
};

// Value at U = descent data over the cover of U by minimal opens (on a
// finite poset this cover refines every other, so the colimit is attained);
// restriction drops charts.
Stackification stackify(const GroupoidPresheaf& f,
                        long long max_arrows = kDescentArrowBudget);

}  // namespace cech
