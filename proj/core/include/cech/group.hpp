#pragma once

#include <string>
#include <vector>

#include "cech/errors.hpp"

namespace cech {

// A finite group as a multiplication table over canonically ordered element
// labels. Element 0..n-1 are indices into `elements()`.
class FiniteGroup {
 public:
  FiniteGroup(std::vector<std::string> elements, std::vector<std::vector<int>> table);

  int order() const { return static_cast<int>(elements_.size()); }
  const std::string& element_name(int i) const { return elements_[i]; }
  const std::vector<std::string>& elements() const { return elements_; }
  int element_index(const std::string& name) const;

  int mul(int a, int b) const { return table_[a][b]; }
  int unit() const { return unit_; }
  int inv(int a) const { return inv_[a]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }

  bool is_abelian() const;
  const std::vector<std::vector<int>>& table() const { return table_; }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.elements_ == b.elements_ && a.table_ == b.table_;
  }

 private:
  std::vector<std::string> elements_;
  std::vector<std::vector<int>> table_;
  int unit_ = -1;
  std::vector<int> inv_;
};

// A group homomorphism given by its element assignment.
struct Homomorphism {
  const FiniteGroup* source = nullptr;
  const FiniteGroup* target = nullptr;
  std::vector<int> map;

  int operator()(int x) const { return map[x]; }
  bool is_bijective() const;
  friend bool operator==(const Homomorphism& a, const Homomorphism& b) {
    return a.source == b.source && a.target == b.target && a.map == b.map;
  }
};

// Validates the homomorphism law; throws ValidationError otherwise.
Homomorphism make_homomorphism(const FiniteGroup& src, const FiniteGroup& dst,
                               std::vector<int> map);

Homomorphism identity_homomorphism(const FiniteGroup& g);
Homomorphism compose(const Homomorphism& f, const Homomorphism& g);  // f after g
Homomorphism inverse(const Homomorphism& f);  // f must be bijective

// All automorphisms, in canonical order (lexicographic in the element map).
// Backtracking enumeration; fine for the table sizes this library targets.
std::vector<Homomorphism> automorphisms(const FiniteGroup& g);

// x -> g x g^-1
Homomorphism inner_automorphism(const FiniteGroup& g, int elem);

// Partition of automorphisms(g) into classes modulo inner automorphisms.
// Entries are indices into automorphisms(g); the first entry of each class is
// the canonical representative (least in enumeration order).
std::vector<std::vector<int>> outer_classes(const FiniteGroup& g);

// The center as a subgroup together with its inclusion, given as the list of
// parent element indices (inclusion[i] is the parent index of element i).
struct Subgroup {
  FiniteGroup group;
  std::vector<int> inclusion;
};
Subgroup center(const FiniteGroup& g);

int conjugacy_class_count(const FiniteGroup& g);

// Named constructors.
FiniteGroup cyclic_group(int n);        // Z/n, elements "0".."n-1"
FiniteGroup symmetric3();               // S3 on {1,2,3}
FiniteGroup klein_four();               // Z/2 x Z/2
FiniteGroup quaternion8();              // Q8
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

// Resolves CLI-style names: "Z2", "Z3", "Z4", ..., "S3", "Z2xZ2", "Q8".
FiniteGroup group_by_name(const std::string& name);

}  // namespace cech
