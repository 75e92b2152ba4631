#include "cech/poset.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cech {

int Open::size() const {
  return static_cast<int>(__builtin_popcountll(bits));
}

std::vector<int> Open::points() const {
  std::vector<int> out;
  for (int i = 0; i < 64; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

FinitePoset::FinitePoset(
    std::vector<std::string> points,
    const std::vector<std::pair<std::string, std::string>>& leq_pairs)
    : points_(std::move(points)) {
  const int n = static_cast<int>(points_.size());
  if (n > 64) throw ValidationError("FinitePoset: at most 64 points supported");
  for (int i = 0; i < n; ++i) {
    if (!index_.emplace(points_[i], i).second)
      throw ValidationError("FinitePoset: duplicate point identifier '" + points_[i] + "'");
  }
  leq_.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) leq_[i][i] = true;
  for (const auto& [a, b] : leq_pairs) {
    leq_[point_index(a)][point_index(b)] = true;
  }
  // transitive closure
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (leq_[i][k])
        for (int j = 0; j < n; ++j)
          if (leq_[k][j]) leq_[i][j] = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && leq_[i][j] && leq_[j][i])
        throw ValidationError("FinitePoset: leq not antisymmetric between '" +
                              points_[i] + "' and '" + points_[j] + "'");
}

int FinitePoset::point_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ValidationError("unknown point identifier '" + name + "'");
  return it->second;
}

Open FinitePoset::minimal_open(int x) const {
  if (x < 0 || x >= size()) throw ValidationError("minimal_open: point out of range");
  std::uint64_t bits = 0;
  for (int y = 0; y < size(); ++y)
    if (leq_[x][y]) bits |= (1ull << y);
  return Open{this, bits};
}

Open FinitePoset::whole() const {
  std::uint64_t bits = size() == 64 ? ~0ull : ((1ull << size()) - 1);
  return Open{this, bits};
}

bool FinitePoset::is_up_closed(std::uint64_t bits) const {
  for (int x = 0; x < size(); ++x) {
    if (!((bits >> x) & 1u)) continue;
    for (int y = 0; y < size(); ++y)
      if (leq_[x][y] && !((bits >> y) & 1u)) return false;
  }
  return true;
}

Open FinitePoset::make_open(std::uint64_t bits) const {
  if (!is_up_closed(bits))
    throw ValidationError("make_open: subset is not up-closed");
  return Open{this, bits};
}

Open FinitePoset::make_open(const std::vector<std::string>& names) const {
  std::uint64_t bits = 0;
  for (const auto& nm : names) bits |= (1ull << point_index(nm));
  return make_open(bits);
}

const std::vector<Open>& FinitePoset::all_opens() const {
  if (!all_opens_.empty() || size() == 0) {
    if (all_opens_.empty() && size() == 0)
      all_opens_.push_back(Open{this, 0});
    return all_opens_;
  }
  if (size() > 20)
    throw BudgetError("all_opens: too many points to enumerate the open lattice");
  for (std::uint64_t bits = 0; bits < (1ull << size()); ++bits)
    if (is_up_closed(bits)) all_opens_.push_back(Open{this, bits});
  return all_opens_;
}

bool FinitePoset::is_connected(std::uint64_t bits) const {
  return components(bits).size() <= 1;
}

std::vector<std::uint64_t> FinitePoset::components(std::uint64_t bits) const {
  std::vector<std::uint64_t> comps;
  std::uint64_t seen = 0;
  for (int s = 0; s < size(); ++s) {
    if (!((bits >> s) & 1u) || ((seen >> s) & 1u)) continue;
    // flood fill over comparability within bits
    std::uint64_t comp = 1ull << s;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int x = 0; x < size(); ++x) {
        if (!((bits >> x) & 1u) || ((comp >> x) & 1u)) continue;
        for (int y = 0; y < size(); ++y) {
          if (!((comp >> y) & 1u)) continue;
          if (leq_[x][y] || leq_[y][x]) {
            comp |= 1ull << x;
            grew = true;
            break;
          }
        }
      }
    }
    comps.push_back(comp);
    seen |= comp;
  }
  return comps;
}

std::pair<FinitePoset, std::vector<int>> FinitePoset::subspace(const Open& u) const {
  if (u.space != this) throw ValidationError("subspace: open over a different space");
  std::vector<int> back = u.points();
  std::vector<std::string> pts;
  for (int p : back) pts.push_back(points_[p]);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i : back)
    for (int j : back)
      if (leq_[i][j]) pairs.emplace_back(points_[i], points_[j]);
  return {FinitePoset(pts, pairs), back};
}

Cover::Cover(Open target, std::vector<std::string> index_labels, std::vector<Open> opens)
    : of(target), labels(std::move(index_labels)), members(std::move(opens)) {
  if (labels.size() != members.size())
    throw ValidationError("Cover: label/member count mismatch");
  std::uint64_t un = 0;
  for (const auto& m : members) {
    if (m.space != of.space) throw ValidationError("Cover: member over a different space");
    if (!m.subset_of(of)) throw ValidationError("Cover: member not contained in the covered open");
    un |= m.bits;
  }
  if (un != of.bits) throw ValidationError("Cover: members do not cover the target open");
}

Open Cover::intersection(const std::vector<int>& tuple) const {
  Open out = of;
  for (int i : tuple) out = intersect(out, members.at(i));
  return out;
}

Cover minimal_cover(const Open& u) {
  std::vector<std::string> labels;
  std::vector<Open> members;
  for (int p : u.points()) {
    labels.push_back(u.space->point_name(p));
    members.push_back(u.space->minimal_open(p));
  }
  return Cover(u, labels, members);
}

AbstractNerve::AbstractNerve(std::vector<std::string> indices,
                             std::vector<std::vector<int>> inhabited_tuples,
                             int depth,
                             std::map<std::vector<int>, bool> connected)
    : indices_(std::move(indices)), depth_(depth), connected_(std::move(connected)) {
  if (depth_ < 1 || depth_ > 4)
    throw ValidationError("AbstractNerve: depth must be in 1..4");
  for (auto t : inhabited_tuples) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    for (int i : t)
      if (i < 0 || i >= index_count())
        throw ValidationError("AbstractNerve: tuple index out of range");
    inhabited_.insert(t);
  }
  // downward closure: every sub-tuple of an inhabited tuple is inhabited
  for (const auto& t : inhabited_) {
    const int k = static_cast<int>(t.size());
    for (std::uint32_t m = 1; m + 1 < (1u << k); ++m) {
      std::vector<int> sub;
      for (int i = 0; i < k; ++i)
        if ((m >> i) & 1u) sub.push_back(t[i]);
      if (!inhabited_.count(sub))
        throw ValidationError("AbstractNerve: inhabited tuples are not downward closed");
    }
  }
}

bool AbstractNerve::inhabited(std::vector<int> tuple) const {
  std::sort(tuple.begin(), tuple.end());
  tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());
  if (static_cast<int>(tuple.size()) > depth_) return false;
  return inhabited_.count(tuple) > 0;
}

bool AbstractNerve::connected(std::vector<int> tuple) const {
  std::sort(tuple.begin(), tuple.end());
  tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());
  auto it = connected_.find(tuple);
  if (it != connected_.end()) return it->second;
  return inhabited_.count(tuple) > 0;  // abstract mode: treated as connected
}

std::vector<std::vector<int>> AbstractNerve::tuples(int k) const {
  std::vector<std::vector<int>> out;
  for (const auto& t : inhabited_)
    if (static_cast<int>(t.size()) == k) out.push_back(t);
  return out;
}

AbstractNerve nerve(const Cover& cover, int depth) {
  if (depth < 1 || depth > 4) throw ValidationError("nerve: depth must be in 1..4");
  const int n = cover.size();
  std::vector<std::vector<int>> inhabited;
  std::map<std::vector<int>, bool> connected;
  std::vector<int> tuple;
  auto rec = [&](auto&& self, int start, int k) -> void {
    if (k == 0) {
      Open u = cover.intersection(tuple);
      if (!u.empty()) {
        inhabited.push_back(tuple);
        connected[tuple] = u.space->is_connected(u.bits);
      }
      return;
    }
    for (int i = start; i < n; ++i) {
      tuple.push_back(i);
      self(self, i + 1, k - 1);
      tuple.pop_back();
    }
  };
  for (int k = 1; k <= depth; ++k) rec(rec, 0, k);
  return AbstractNerve(cover.labels, inhabited, depth, connected);
}

std::optional<std::vector<int>> refinement_map(const Cover& fine, const Cover& coarse) {
  if (fine.of != coarse.of)
    throw ValidationError("refinement_map: covers of different opens");
  std::vector<int> r;
  for (const auto& v : fine.members) {
    int found = -1;
    for (int j = 0; j < coarse.size(); ++j) {
      if (v.subset_of(coarse.members[j])) {
        found = j;
        break;
      }
    }
    if (found < 0) return std::nullopt;
    r.push_back(found);
  }
  return r;
}

std::string tuple_name(const AbstractNerve& nv, const std::vector<int>& t) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << ",";
    os << nv.indices()[t[i]];
  }
  os << ")";
  return os.str();
}

}  // namespace cech
