#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cech/presheaf.hpp"

namespace cech {

// A finite groupoid: finitely many objects and arrows, every arrow
// invertible. comp[f][g] = f after g, defined when src(f) == dst(g),
// recorded as -1 otherwise.
class FiniteGroupoid {
 public:
  // comp maps composable pairs (f, g) with src(f) == dst(g) to f after g; it
  // must be defined on exactly those pairs.
  FiniteGroupoid(std::vector<std::string> objects, std::vector<std::string> arrows,
                 std::vector<int> src, std::vector<int> dst,
                 std::vector<int> units, std::map<std::pair<int, int>, int> comp);

  int object_count() const { return static_cast<int>(objects_.size()); }
  int arrow_count() const { return static_cast<int>(arrows_.size()); }
  const std::string& object_name(int a) const { return objects_[a]; }
  const std::string& arrow_name(int f) const { return arrows_[f]; }
  int src(int f) const { return src_[f]; }
  int dst(int f) const { return dst_[f]; }
  int unit(int obj) const { return units_[obj]; }
  int compose(int f, int g) const;  // f after g
  int inv(int f) const { return inv_[f]; }

  std::vector<int> hom(int a, int b) const;
  const std::vector<int>& arrows_from(int obj) const { return from_[obj]; }
  const std::vector<int>& arrows_into(int obj) const { return into_[obj]; }
  bool isomorphic_objects(int a, int b) const { return !hom(a, b).empty(); }
  // Partition of objects into isomorphism classes, canonical order.
  std::vector<std::vector<int>> iso_classes() const;

 private:
  std::vector<std::string> objects_, arrows_;
  std::vector<int> src_, dst_, units_, inv_;
  std::map<std::pair<int, int>, int> comp_;
  std::vector<std::vector<int>> from_, into_;
};

// One object per group element-free carrier: the group as a groupoid.
FiniteGroupoid one_object_groupoid(const FiniteGroup& g);
FiniteGroupoid terminal_groupoid();

struct GroupoidFunctor {
  const FiniteGroupoid* source = nullptr;
  const FiniteGroupoid* target = nullptr;
  std::vector<int> obj_map;
  std::vector<int> arr_map;
};

// Functor laws: src/dst/units/composition preserved.
CheckResult check_functor(const GroupoidFunctor& f);
bool fully_faithful(const GroupoidFunctor& f);
bool essentially_surjective(const GroupoidFunctor& f);

// A strict presheaf of finite groupoids on the full open lattice:
// restriction functors compose on the nose.
class GroupoidPresheaf {
 public:
  GroupoidPresheaf(const FinitePoset& space, std::vector<FiniteGroupoid> values,
                   const std::function<int(int, int, int)>& restrict_obj_fn,
                   const std::function<int(int, int, int)>& restrict_arr_fn);

  const FinitePoset& space() const { return *space_; }
  int open_count() const { return static_cast<int>(opens_.size()); }
  const Open& open_at(int i) const { return opens_[i]; }
  int open_index(const Open& u) const;
  const FiniteGroupoid& at(int open_idx) const { return values_[open_idx]; }

  int restrict_obj(int v_open, int u_open, int obj) const;
  int restrict_arr(int v_open, int u_open, int arrow) const;

 private:
  const FinitePoset* space_;
  std::vector<Open> opens_;
  std::map<std::uint64_t, int> open_lookup_;
  std::vector<FiniteGroupoid> values_;
  std::map<std::pair<int, int>, std::vector<int>> obj_res_, arr_res_;

  void validate() const;
};

// A sheaf of groups viewed as a presheaf of one-object groupoids.
GroupoidPresheaf one_object_presheaf(const GroupPresheaf& g);

}  // namespace cech
