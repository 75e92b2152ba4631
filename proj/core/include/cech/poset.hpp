#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cech/errors.hpp"

namespace cech {

class FinitePoset;

// An open set of a finite T0 space, i.e. an up-closed subset of the poset,
// stored as a bitmask over the canonical point order.
struct Open {
  const FinitePoset* space = nullptr;
  std::uint64_t bits = 0;

  bool contains(int p) const { return (bits >> p) & 1u; }
  bool empty() const { return bits == 0; }
  int size() const;
  bool subset_of(const Open& other) const {
    return (bits & ~other.bits) == 0;
  }
  std::vector<int> points() const;

  friend bool operator==(const Open& a, const Open& b) {
    return a.space == b.space && a.bits == b.bits;
  }
  friend auto operator<=>(const Open& a, const Open& b) = default;
};

// A finite T0 topological space encoded as a poset under specialization.
// Opens are exactly the up-sets. Points carry string identifiers and a fixed
// canonical order; every enumeration in the library iterates in this order.
class FinitePoset {
 public:
  // `leq_pairs` lists (x, y) meaning x <= y; the reflexive-transitive closure
  // is taken automatically, antisymmetry is checked.
  FinitePoset(std::vector<std::string> points,
              const std::vector<std::pair<std::string, std::string>>& leq_pairs);

  int size() const { return static_cast<int>(points_.size()); }
  const std::string& point_name(int i) const { return points_[i]; }
  const std::vector<std::string>& point_names() const { return points_; }
  int point_index(const std::string& name) const;
  bool leq(int x, int y) const { return leq_[x][y]; }

  // The smallest open containing x: the up-set {y : x <= y}.
  Open minimal_open(int x) const;
  Open minimal_open(const std::string& name) const {
    return minimal_open(point_index(name));
  }

  Open empty_open() const { return Open{this, 0}; }
  Open whole() const;
  Open make_open(std::uint64_t bits) const;  // validates up-closure
  Open make_open(const std::vector<std::string>& names) const;

  bool is_up_closed(std::uint64_t bits) const;

  // All up-sets, in a canonical order (increasing as bitmasks).
  const std::vector<Open>& all_opens() const;

  // A subset is connected iff its comparability graph is connected.
  bool is_connected(std::uint64_t bits) const;
  // Connected components of a subset, each canonically ordered by least point.
  std::vector<std::uint64_t> components(std::uint64_t bits) const;

  // Induced poset on the points of an open, with the point order inherited.
  // Returns the sub-poset plus the map from sub-poset indices to ours.
  std::pair<FinitePoset, std::vector<int>> subspace(const Open& u) const;

 private:
  std::vector<std::string> points_;
  std::map<std::string, int> index_;
  std::vector<std::vector<bool>> leq_;
  mutable std::vector<Open> all_opens_;  // lazily computed
};

inline Open intersect(const Open& u, const Open& v) {
  if (u.space != v.space) throw ValidationError("intersect: opens over different spaces");
  return Open{u.space, u.bits & v.bits};
}

inline Open unite(const Open& u, const Open& v) {
  if (u.space != v.space) throw ValidationError("union: opens over different spaces");
  return Open{u.space, u.bits | v.bits};
}

// An indexed open cover {U_alpha} of an open set.
struct Cover {
  Open of;
  std::vector<std::string> labels;
  std::vector<Open> members;

  Cover(Open target, std::vector<std::string> index_labels, std::vector<Open> opens);
  int size() const { return static_cast<int>(members.size()); }
  Open intersection(const std::vector<int>& tuple) const;
};

// The cover of an open by the minimal opens of its points, indexed by point
// name. This cover refines every cover of the open.
Cover minimal_cover(const Open& u);

// Which intersections of cover members are inhabited, for tuples of up to
// `depth` distinct indices, plus a connectivity flag per inhabited tuple.
// Tuples are stored sorted; queries are permutation-symmetric.
class AbstractNerve {
 public:
  AbstractNerve(std::vector<std::string> indices,
                std::vector<std::vector<int>> inhabited_tuples,
                int depth,
                std::map<std::vector<int>, bool> connected = {});

  int index_count() const { return static_cast<int>(indices_.size()); }
  const std::vector<std::string>& indices() const { return indices_; }
  int depth() const { return depth_; }

  // Accepts tuples in any order, with or without repeats; repeats are
  // collapsed. Tuples longer than `depth` report false.
  bool inhabited(std::vector<int> tuple) const;
  bool connected(std::vector<int> tuple) const;

  // All inhabited sorted tuples of exactly `k` distinct indices.
  std::vector<std::vector<int>> tuples(int k) const;

 private:
  std::vector<std::string> indices_;
  int depth_;
  std::set<std::vector<int>> inhabited_;
  std::map<std::vector<int>, bool> connected_;
};

// Nerve of a concrete cover: inhabitation by actual intersection,
// connectivity from the poset.
AbstractNerve nerve(const Cover& cover, int depth);

// Some index map r with fine[i] subset of coarse[r(i)], or nullopt.
// Deterministic: smallest admissible coarse index per fine index.
std::optional<std::vector<int>> refinement_map(const Cover& fine, const Cover& coarse);

std::string tuple_name(const AbstractNerve& nv, const std::vector<int>& t);

}  // namespace cech
