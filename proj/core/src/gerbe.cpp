#include "cech/gerbe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace cech {

namespace {

std::vector<int> norm_tuple(std::vector<int> t) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

std::vector<int> inverse_map(const std::vector<int>& m) {
  std::vector<int> out(m.size(), -1);
  for (size_t i = 0; i < m.size(); ++i) out[m[i]] = static_cast<int>(i);
  return out;
}

std::vector<int> identity_map(int n) {
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

BandPresentation::BandPresentation(
    AbstractNerve nerve, std::vector<FiniteGroup> groups,
    std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda)
    : nerve_(std::move(nerve)), groups_(std::move(groups)), lambda_(std::move(lambda)) {
  for (int k = 1; k <= nerve_.depth(); ++k)
    for (const auto& t : nerve_.tuples(k)) {
      if (!nerve_.connected(t))
        throw ValidationError("BandPresentation: nerve mode requires connected "
                              "intersections (" + tuple_name(nerve_, t) + ")");
      comps_[t] = {0};
    }
  validate();
}

BandPresentation::BandPresentation(
    Cover cover, std::vector<FiniteGroup> groups,
    std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda)
    : nerve_(cech::nerve(cover, std::min(4, std::max(1, cover.size())))),
      cover_(std::move(cover)),
      groups_(std::move(groups)),
      lambda_(std::move(lambda)) {
  for (int k = 1; k <= nerve_.depth(); ++k)
    for (const auto& t : nerve_.tuples(k))
      comps_[t] = cover_->of.space->components(cover_->intersection(t).bits);
  validate();
}

void BandPresentation::validate() {
  if (static_cast<int>(groups_.size()) != nerve_.index_count())
    throw ValidationError("BandPresentation: need one group per cover index");
  if (groups_.empty())
    throw ValidationError("BandPresentation: empty presentation");
  auto pairs = nerve_.tuples(2);
  if (lambda_.size() != pairs.size())
    throw ValidationError("BandPresentation: lambda must cover exactly the "
                          "inhabited pairs");
  for (const auto& p : pairs) {
    auto it = lambda_.find({p[0], p[1]});
    if (it == lambda_.end())
      throw ValidationError("BandPresentation: missing lambda at " +
                            tuple_name(nerve_, p));
    if (static_cast<int>(it->second.size()) != components(p))
      throw ValidationError("BandPresentation: lambda at " + tuple_name(nerve_, p) +
                            " must have one map per component");
    for (const auto& m : it->second) {
      Homomorphism h = make_homomorphism(groups_[p[1]], groups_[p[0]], m);
      if (!h.is_bijective())
        throw ValidationError("BandPresentation: lambda at " + tuple_name(nerve_, p) +
                              " is not an isomorphism");
    }
  }
}

const Cover& BandPresentation::cover() const {
  if (!cover_) throw ValidationError("BandPresentation: no concrete cover");
  return *cover_;
}

int BandPresentation::components(const std::vector<int>& t) const {
  auto it = comps_.find(norm_tuple(t));
  if (it == comps_.end())
    throw ValidationError("BandPresentation: tuple not inhabited");
  return static_cast<int>(it->second.size());
}

int BandPresentation::parent_component(const std::vector<int>& fine,
                                       const std::vector<int>& coarse, int j) const {
  if (!cover_) return 0;
  std::uint64_t mask = comps_.at(norm_tuple(fine)).at(j);
  const auto& cc = comps_.at(norm_tuple(coarse));
  for (size_t k = 0; k < cc.size(); ++k)
    if ((mask & ~cc[k]) == 0) return static_cast<int>(k);
  throw InternalError("BandPresentation: component not contained in any parent");
}

BandPresentation::Value BandPresentation::unit_value(int alpha,
                                                     const std::vector<int>& t) const {
  return Value(components(t), groups_[alpha].unit());
}

BandPresentation::Value BandPresentation::mul(int alpha, const Value& x,
                                              const Value& y) const {
  Value out(x.size());
  for (size_t j = 0; j < x.size(); ++j) out[j] = groups_[alpha].mul(x[j], y[j]);
  return out;
}

BandPresentation::Value BandPresentation::inv(int alpha, const Value& x) const {
  Value out(x.size());
  for (size_t j = 0; j < x.size(); ++j) out[j] = groups_[alpha].inv(x[j]);
  return out;
}

bool BandPresentation::is_central(int alpha, const Value& x) const {
  const FiniteGroup& g = groups_[alpha];
  for (int e : x)
    for (int y = 0; y < g.order(); ++y)
      if (g.mul(e, y) != g.mul(y, e)) return false;
  return true;
}

BandPresentation::Value BandPresentation::restrict(int alpha,
                                                   const std::vector<int>& coarse,
                                                   const std::vector<int>& fine,
                                                   const Value& v) const {
  (void)alpha;
  Value out(components(fine));
  for (size_t j = 0; j < out.size(); ++j)
    out[j] = v.at(parent_component(fine, coarse, j));
  return out;
}

std::vector<int> BandPresentation::lambda_map(int a, int b, int comp) const {
  if (a == b) return identity_map(groups_[a].order());
  if (a < b) return lambda_.at({a, b}).at(comp);
  return inverse_map(lambda_.at({b, a}).at(comp));
}

BandPresentation::Value BandPresentation::apply_lambda(int a, int b,
                                                       const std::vector<int>& t,
                                                       const Value& v) const {
  if (a == b) return v;
  std::vector<int> pair = norm_tuple({a, b});
  Value out(components(t));
  for (size_t j = 0; j < out.size(); ++j)
    out[j] = lambda_map(a, b, parent_component(t, pair, static_cast<int>(j)))[v[j]];
  return out;
}

bool BandPresentation::same_coefficients(const BandPresentation& other) const {
  if (cover_mode() != other.cover_mode()) return false;
  if (nerve_.indices() != other.nerve_.indices()) return false;
  if (groups_.size() != other.groups_.size()) return false;
  for (size_t i = 0; i < groups_.size(); ++i)
    if (!(groups_[i] == other.groups_[i])) return false;
  if (comps_.size() != other.comps_.size()) return false;
  for (const auto& [t, cc] : comps_) {
    auto it = other.comps_.find(t);
    if (it == other.comps_.end() || it->second.size() != cc.size()) return false;
  }
  return true;
}

std::string BandPresentation::value_name(int alpha, const Value& v) const {
  std::ostringstream os;
  for (size_t j = 0; j < v.size(); ++j) {
    if (j) os << "|";
    os << groups_[alpha].element_name(v[j]);
  }
  if (v.empty()) os << "()";
  return os.str();
}

Cocycle2 trivial_cocycle2(const BandPresentation& band) {
  Cocycle2 c{band, {}};
  for (const auto& t : band.nerve().tuples(3)) c.g[t] = band.unit_value(t[0], t);
  return c;
}

namespace {

void check_cocycle2_shape(const Cocycle2& c) {
  const BandPresentation& b = c.band;
  auto triples = b.nerve().tuples(3);
  if (c.g.size() != triples.size())
    throw ValidationError("Cocycle2: g must cover exactly the inhabited triples");
  for (const auto& t : triples) {
    auto it = c.g.find(t);
    if (it == c.g.end())
      throw ValidationError("Cocycle2: missing g at " + tuple_name(b.nerve(), t));
    if (static_cast<int>(it->second.size()) != b.components(t))
      throw ValidationError("Cocycle2: g at " + tuple_name(b.nerve(), t) +
                            " must have one entry per component");
    for (int e : it->second)
      if (e < 0 || e >= b.group(t[0]).order())
        throw ValidationError("Cocycle2: g out of range at " +
                              tuple_name(b.nerve(), t));
  }
}

}  // namespace

CheckResult check_cocycle2(const Cocycle2& c) {
  const BandPresentation& b = c.band;
  check_cocycle2_shape(c);
  // (i) lambda_ab lambda_bc = (g_abc)_* lambda_ac, componentwise
  for (const auto& t : b.nerve().tuples(3)) {
    int a = t[0], bb = t[1], cc = t[2];
    const FiniteGroup& ka = b.group(a);
    for (int j = 0; j < b.components(t); ++j) {
      auto l_ab = b.lambda_map(a, bb, b.parent_component(t, {a, bb}, j));
      auto l_bc = b.lambda_map(bb, cc, b.parent_component(t, {bb, cc}, j));
      auto l_ac = b.lambda_map(a, cc, b.parent_component(t, {a, cc}, j));
      int g = c.g.at(t)[j];
      for (int x = 0; x < b.group(cc).order(); ++x)
        if (l_ab[l_bc[x]] != ka.conj(g, l_ac[x]))
          return CheckResult::fail("cocycle identity (i) fails at " +
                                   tuple_name(b.nerve(), t));
    }
  }
  // (ii) g_abc g_acd = lambda_ab(g_bcd) g_abd on quadruple overlaps
  for (const auto& q : b.nerve().tuples(4)) {
    int a = q[0], bb = q[1], cc = q[2], dd = q[3];
    auto r = [&](int lead, std::vector<int> t) {
      return b.restrict(lead, t, q, c.g.at(t));
    };
    auto lhs = b.mul(a, r(a, {a, bb, cc}), r(a, {a, cc, dd}));
    auto rhs = b.mul(a, b.apply_lambda(a, bb, q, r(bb, {bb, cc, dd})),
                     r(a, {a, bb, dd}));
    if (lhs != rhs)
      return CheckResult::fail("cocycle identity (ii) fails at " +
                               tuple_name(b.nerve(), q));
  }
  // (iii) normality holds by construction: only strictly increasing triples
  // are stored, repeated-index values are derived as the unit
  return CheckResult::pass();
}

BandPresentation::Value extended_g(const Cocycle2& c, int a, int b, int d,
                                   const std::vector<int>& t) {
  const BandPresentation& bp = c.band;
  if (a == b || b == d || a == d) return bp.unit_value(a, t);
  std::vector<int> s = norm_tuple({a, b, d});
  int x = s[0], y = s[1], z = s[2];
  BandPresentation::Value base = bp.restrict(x, s, t, c.g.at(s));
  if (a == x && b == y) return base;                                   // (x,y,z)
  if (a == x && b == z) return bp.inv(x, base);                        // (x,z,y)
  if (a == y && b == x) return bp.apply_lambda(y, x, t, bp.inv(x, base));  // (y,x,z)
  if (a == y && b == z) return bp.apply_lambda(y, x, t, base);         // (y,z,x)
  if (a == z && b == x) return bp.apply_lambda(z, x, t, base);         // (z,x,y)
  return bp.apply_lambda(z, x, t, bp.inv(x, base));                    // (z,y,x)
}

namespace {

// all K_alpha values over tuple t, canonical order (last component fastest)
std::vector<BandPresentation::Value> all_values(const BandPresentation& b, int alpha,
                                                const std::vector<int>& t) {
  int n = b.components(t), ord = b.group(alpha).order();
  std::vector<BandPresentation::Value> out;
  BandPresentation::Value v(n, 0);
  auto rec = [&](auto&& self, int j) -> void {
    if (j == n) {
      out.push_back(v);
      return;
    }
    for (int e = 0; e < ord; ++e) {
      v[j] = e;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return out;
}

bool witness_ok(const Cocycle2& c, const Cocycle2& d, const CocycleWitness& k) {
  const BandPresentation& b = c.band;
  for (const auto& t : b.nerve().tuples(3)) {
    int a = t[0], bb = t[1], cc = t[2];
    auto r = [&](int lead, int i1, int i2) {
      std::vector<int> p = {i1, i2};
      return b.restrict(lead, p, t, k.at({i1, i2}));
    };
    auto lhs = d.g.at(t);
    auto rhs = b.mul(a, b.mul(a, b.mul(a, r(a, a, bb),
                                       b.apply_lambda(a, bb, t, r(bb, bb, cc))),
                              c.g.at(t)),
                     b.inv(a, r(a, a, cc)));
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace

std::optional<CocycleWitness> cocycles2_equivalent(const Cocycle2& c, const Cocycle2& d,
                                                   long long budget) {
  const BandPresentation& b = c.band;
  if (!b.same_coefficients(d.band))
    throw ValidationError("cocycles2_equivalent: mismatched presentations");
  check_cocycle2_shape(c);
  check_cocycle2_shape(d);

  auto pairs = b.nerve().tuples(2);
  // per pair, the k values compatible with the lambda twist condition
  std::vector<std::vector<BandPresentation::Value>> cand(pairs.size());
  double log_work = 0;
  for (size_t p = 0; p < pairs.size(); ++p) {
    int a = pairs[p][0], bb = pairs[p][1];
    const FiniteGroup& ka = b.group(a);
    for (const auto& v : all_values(b, a, pairs[p])) {
      bool ok = true;
      for (int j = 0; j < b.components(pairs[p]) && ok; ++j) {
        auto lc = b.lambda_map(a, bb, j);
        auto ld = d.band.lambda_map(a, bb, j);
        for (int x = 0; x < b.group(bb).order() && ok; ++x)
          if (ld[x] != ka.conj(v[j], lc[x])) ok = false;
      }
      if (ok) cand[p].push_back(v);
    }
    if (cand[p].empty()) return std::nullopt;
    log_work += std::log(static_cast<double>(cand[p].size()));
  }
  if (log_work > std::log(static_cast<double>(std::max<long long>(1, budget))))
    throw BudgetError("cocycles2_equivalent: witness search exceeds budget");

  CocycleWitness k;
  auto rec = [&](auto&& self, size_t p) -> bool {
    if (p == pairs.size()) return witness_ok(c, d, k);
    for (const auto& v : cand[p]) {
      k[{pairs[p][0], pairs[p][1]}] = v;
      if (self(self, p + 1)) return true;
    }
    return false;
  };
  if (rec(rec, 0)) return k;
  return std::nullopt;
}

namespace {

// candidate g entries per (triple, component) satisfying identity (i)
std::vector<std::vector<std::vector<int>>> triple_candidates(
    const BandPresentation& b) {
  auto triples = b.nerve().tuples(3);
  std::vector<std::vector<std::vector<int>>> cand(triples.size());
  for (size_t ti = 0; ti < triples.size(); ++ti) {
    const auto& t = triples[ti];
    int a = t[0], bb = t[1], cc = t[2];
    const FiniteGroup& ka = b.group(a);
    cand[ti].resize(b.components(t));
    for (int j = 0; j < b.components(t); ++j) {
      auto l_ab = b.lambda_map(a, bb, b.parent_component(t, {a, bb}, j));
      auto l_bc = b.lambda_map(bb, cc, b.parent_component(t, {bb, cc}, j));
      auto l_ac = b.lambda_map(a, cc, b.parent_component(t, {a, cc}, j));
      for (int g = 0; g < ka.order(); ++g) {
        bool ok = true;
        for (int x = 0; x < b.group(cc).order() && ok; ++x)
          if (l_ab[l_bc[x]] != ka.conj(g, l_ac[x])) ok = false;
        if (ok) cand[ti][j].push_back(g);
      }
    }
  }
  return cand;
}

bool identity_two_holds(const Cocycle2& c) {
  const BandPresentation& b = c.band;
  for (const auto& q : b.nerve().tuples(4)) {
    int a = q[0], bb = q[1];
    auto r = [&](int lead, std::vector<int> t) {
      return b.restrict(lead, t, q, c.g.at(t));
    };
    auto lhs = b.mul(a, r(a, {a, bb, q[2]}), r(a, {a, q[2], q[3]}));
    auto rhs = b.mul(a, b.apply_lambda(a, bb, q, r(bb, {bb, q[2], q[3]})),
                     r(a, {a, bb, q[3]}));
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace

std::vector<Cocycle2> h2(const BandPresentation& band, long long budget, int threads) {
  if (threads < 1) throw ValidationError("h2: thread count must be positive");
  auto triples = band.nerve().tuples(3);
  auto cand = triple_candidates(band);

  // flatten the (triple, component) slots
  std::vector<std::pair<int, int>> slots;
  double log_work = 0;
  for (size_t ti = 0; ti < triples.size(); ++ti)
    for (int j = 0; j < band.components(triples[ti]); ++j) {
      if (cand[ti][j].empty()) return {};  // no cocycle with this presentation
      slots.push_back({static_cast<int>(ti), j});
      log_work += std::log(static_cast<double>(cand[ti][j].size()));
    }
  if (log_work > std::log(static_cast<double>(std::max<long long>(1, budget))))
    throw BudgetError("h2: cocycle enumeration exceeds budget");

  auto enumerate_range = [&](int first_lo, int first_hi) {
    std::vector<Cocycle2> found;
    Cocycle2 c{band, {}};
    for (const auto& t : triples)
      c.g[t] = BandPresentation::Value(band.components(t), 0);
    auto rec = [&](auto&& self, size_t s) -> void {
      if (s == slots.size()) {
        if (identity_two_holds(c)) found.push_back(c);
        return;
      }
      auto [ti, j] = slots[s];
      int lo = s == 0 ? first_lo : 0;
      int hi = s == 0 ? first_hi : static_cast<int>(cand[ti][j].size());
      for (int i = lo; i < hi; ++i) {
        c.g[triples[ti]][j] = cand[ti][j][i];
        self(self, s + 1);
      }
    };
    if (slots.empty()) {
      found.push_back(c);
    } else {
      rec(rec, 0);
    }
    return found;
  };

  std::vector<Cocycle2> cocycles;
  int first_n = slots.empty() ? 1 : static_cast<int>(cand[slots[0].first][slots[0].second].size());
  int workers = std::min(threads, first_n);
  if (workers <= 1 || slots.empty()) {
    cocycles = enumerate_range(0, first_n);
  } else {
    // deterministic: contiguous chunks of the first slot, merged in order
    std::vector<std::vector<Cocycle2>> parts(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      int lo = first_n * w / workers, hi = first_n * (w + 1) / workers;
      pool.emplace_back([&, w, lo, hi] { parts[w] = enumerate_range(lo, hi); });
    }
    for (auto& th : pool) th.join();
    for (auto& part : parts)
      for (auto& c : part) cocycles.push_back(std::move(c));
  }

  std::vector<Cocycle2> reps;
  for (const auto& c : cocycles) {
    bool known = false;
    for (const auto& r : reps)
      if (cocycles2_equivalent(r, c, budget)) {
        known = true;
        break;
      }
    if (!known) reps.push_back(c);
  }
  return reps;
}

int GerbeGroupoid::stalk_index(const std::vector<int>& tuple, int comp) const {
  auto key = std::make_pair(norm_tuple(tuple), comp);
  for (size_t i = 0; i < stalk_keys.size(); ++i)
    if (stalk_keys[i] == key) return static_cast<int>(i);
  throw ValidationError("GerbeGroupoid: no stalk for this tuple and component");
}

int GerbeGroupoid::arrow_of(int stalk, int pos_a, int pos_b, int k) const {
  const auto& s = stalk_keys[stalk].first;
  int m = static_cast<int>(s.size());
  int id = 0;
  for (int pa = 0; pa < m; ++pa)
    for (int pb = 0; pb < m; ++pb) {
      int block = source->band.group(s[pa]).order();
      if (pa == pos_a && pb == pos_b) return id + k;
      id += block;
    }
  throw ValidationError("GerbeGroupoid: arrow position out of range");
}

std::tuple<int, int, int> GerbeGroupoid::arrow_data(int stalk, int arrow) const {
  const auto& s = stalk_keys[stalk].first;
  int m = static_cast<int>(s.size());
  for (int pa = 0; pa < m; ++pa)
    for (int pb = 0; pb < m; ++pb) {
      int block = source->band.group(s[pa]).order();
      if (arrow < block) return {pa, pb, arrow};
      arrow -= block;
    }
  throw ValidationError("GerbeGroupoid: arrow index out of range");
}

GerbeGroupoid cocycle_to_groupoid(const Cocycle2& c, bool validate_input) {
  if (validate_input) {
    CheckResult r = check_cocycle2(c);
    if (!r.ok) throw ValidationError("cocycle_to_groupoid: " + r.diagnostic);
  } else {
    check_cocycle2_shape(c);
  }
  const BandPresentation& b = c.band;
  GerbeGroupoid gg;
  gg.source = &c;
  for (int k = 1; k <= b.nerve().depth(); ++k)
    for (const auto& s : b.nerve().tuples(k))
      for (int j = 0; j < b.components(s); ++j) {
        const int m = static_cast<int>(s.size());
        std::vector<std::string> onames, anames;
        std::vector<int> src, dst, units(m, -1);
        for (int i = 0; i < m; ++i) onames.push_back(b.nerve().indices()[s[i]]);
        for (int pa = 0; pa < m; ++pa)
          for (int pb = 0; pb < m; ++pb)
            for (int e = 0; e < b.group(s[pa]).order(); ++e) {
              anames.push_back(onames[pb] + "->" + onames[pa] + ":" +
                               b.group(s[pa]).element_name(e));
              src.push_back(pb);
              dst.push_back(pa);
            }
        gg.stalk_keys.push_back({s, j});
        int stalk = static_cast<int>(gg.stalk_keys.size()) - 1;
        for (int i = 0; i < m; ++i)
          units[i] = gg.arrow_of(stalk, i, i, b.group(s[i]).unit());
        std::map<std::pair<int, int>, int> comp;
        for (int pa = 0; pa < m; ++pa)
          for (int pb = 0; pb < m; ++pb)
            for (int pc = 0; pc < m; ++pc) {
              int a = s[pa], bb = s[pb], cc = s[pc];
              auto l_ab = b.lambda_map(
                  a, bb, a == bb ? 0 : b.parent_component(s, {a, bb}, j));
              int ghat = extended_g(c, a, bb, cc, s)[j];
              for (int e = 0; e < b.group(a).order(); ++e)
                for (int f = 0; f < b.group(bb).order(); ++f) {
                  int val = b.group(a).mul(b.group(a).mul(e, l_ab[f]), ghat);
                  comp[{gg.arrow_of(stalk, pa, pb, e),
                        gg.arrow_of(stalk, pb, pc, f)}] =
                      gg.arrow_of(stalk, pa, pc, val);
                }
            }
        gg.stalks.emplace_back(onames, anames, src, dst, units, std::move(comp));
      }
  return gg;
}

BandedGerbePresentation canonical_presentation(const BandPresentation& band) {
  BandedGerbePresentation p;
  for (const auto& t : band.nerve().tuples(2))
    p.f[{t[0], t[1]}] = band.unit_value(t[0], t);
  for (int a = 0; a < band.index_count(); ++a)
    p.theta.push_back(identity_map(band.group(a).order()));
  return p;
}

Cocycle2 groupoid_to_cocycle(const GerbeGroupoid& gg, const BandPresentation& band,
                             const BandedGerbePresentation& pres) {
  auto pairs = band.nerve().tuples(2);
  if (pres.f.size() != pairs.size() ||
      static_cast<int>(pres.theta.size()) != band.index_count())
    throw ValidationError("groupoid_to_cocycle: presentation shape mismatch");
  std::vector<Homomorphism> theta;
  for (int a = 0; a < band.index_count(); ++a) {
    theta.push_back(make_homomorphism(band.group(a), band.group(a), pres.theta[a]));
    if (!theta.back().is_bijective())
      throw ValidationError("groupoid_to_cocycle: theta is not an isomorphism");
  }

  // the theta/lambda square must commute strictly:
  // lambda_ab(theta_b(phi)) = theta_a(f_ab . lambda_ab(phi) . f_ab^-1),
  // with the conjugation computed inside the stalk groupoids
  for (const auto& p : pairs) {
    int a = p[0], bb = p[1];
    const auto& f = pres.f.at({a, bb});
    if (static_cast<int>(f.size()) != band.components(p))
      throw ValidationError("groupoid_to_cocycle: f shape mismatch at " +
                            tuple_name(band.nerve(), p));
    for (int j = 0; j < band.components(p); ++j) {
      int stalk = gg.stalk_index(p, j);
      const FiniteGroupoid& st = gg.stalks[stalk];
      int f_arrow = gg.arrow_of(stalk, 0, 1, f[j]);  // a_b -> a_a (a < b in p)
      auto l_ab = band.lambda_map(a, bb, j);
      for (int phi = 0; phi < band.group(bb).order(); ++phi) {
        int phi_arrow = gg.arrow_of(stalk, 1, 1, phi);
        int conj = st.compose(st.compose(f_arrow, phi_arrow), st.inv(f_arrow));
        auto [pa, pb, elem] = gg.arrow_data(stalk, conj);
        if (pa != 0 || pb != 0)
          throw InternalError("groupoid_to_cocycle: conjugation left Aut(a_a)");
        if (l_ab[theta[bb](phi)] != theta[a](elem))
          throw ValidationError(
              "groupoid_to_cocycle: theta/lambda square does not commute at " +
              tuple_name(band.nerve(), p) + "; re-choose f");
      }
    }
  }

  Cocycle2 out{band, {}};
  for (const auto& t : band.nerve().tuples(3)) {
    int a = t[0], bb = t[1], cc = t[2];
    BandPresentation::Value val(band.components(t));
    for (int j = 0; j < band.components(t); ++j) {
      int stalk = gg.stalk_index(t, j);
      const FiniteGroupoid& st = gg.stalks[stalk];
      auto arrow = [&](int i1, int i2) {
        std::vector<int> p = {i1, i2};
        int e = band.restrict(i1, p, t, pres.f.at({i1, i2}))[j];
        int p1 = static_cast<int>(std::find(t.begin(), t.end(), i1) - t.begin());
        int p2 = static_cast<int>(std::find(t.begin(), t.end(), i2) - t.begin());
        return gg.arrow_of(stalk, p1, p2, e);
      };
      int h = st.compose(st.compose(arrow(a, bb), arrow(bb, cc)),
                         st.inv(arrow(a, cc)));
      auto [pa, pb, elem] = gg.arrow_data(stalk, h);
      if (pa != 0 || pb != 0)
        throw InternalError("groupoid_to_cocycle: cocycle arrow is not a loop");
      val[j] = theta[a](elem);
    }
    out.g[t] = val;
  }
  CheckResult r = check_cocycle2(out);
  if (!r.ok) throw InternalError("groupoid_to_cocycle: extracted data is not a "
                                 "cocycle: " + r.diagnostic);
  return out;
}

Recoordinated recoordinate_cocycle(
    const Cocycle2& c, ChoiceChange change,
    const std::map<std::pair<int, int>, BandPresentation::Value>& pair_data,
    const std::vector<BandPresentation::Value>& index_data) {
  const BandPresentation& b = c.band;
  auto pairs = b.nerve().tuples(2);

  auto unit_witness = [&] {
    CocycleWitness w;
    for (const auto& p : pairs) w[{p[0], p[1]}] = b.unit_value(p[0], p);
    return w;
  };
  auto check_pair_data = [&] {
    if (pair_data.size() != pairs.size())
      throw ValidationError("recoordinate_cocycle: need data per inhabited pair");
    for (const auto& p : pairs) {
      auto it = pair_data.find({p[0], p[1]});
      if (it == pair_data.end() ||
          static_cast<int>(it->second.size()) != b.components(p))
        throw ValidationError("recoordinate_cocycle: data shape mismatch at " +
                              tuple_name(b.nerve(), p));
      for (int e : it->second)
        if (e < 0 || e >= b.group(p[0]).order())
          throw ValidationError("recoordinate_cocycle: element out of range");
    }
  };
  auto twisted_g = [&](const BandPresentation& new_band) {
    // g'_abc = k_ab . lambda_ab(k_bc) . g_abc . k_ac^-1 (lambda of the input)
    std::map<std::vector<int>, BandPresentation::Value> g;
    for (const auto& t : b.nerve().tuples(3)) {
      int a = t[0], bb = t[1], cc = t[2];
      auto r = [&](int lead, int i1, int i2) {
        std::vector<int> p = {i1, i2};
        (void)lead;
        return b.restrict(i1, p, t, pair_data.at({i1, i2}));
      };
      g[t] = b.mul(a, b.mul(a, b.mul(a, r(a, a, bb),
                                     b.apply_lambda(a, bb, t, r(bb, bb, cc))),
                            c.g.at(t)),
                   b.inv(a, r(a, a, cc)));
    }
    return Cocycle2{new_band, std::move(g)};
  };

  switch (change) {
    case ChoiceChange::kThetaChange:
    case ChoiceChange::kObjectChange: {
      if (static_cast<int>(index_data.size()) != b.index_count())
        throw ValidationError("recoordinate_cocycle: need data per index");
      for (int a = 0; a < b.index_count(); ++a)
        if (static_cast<int>(index_data[a].size()) !=
            b.components(std::vector<int>{a}))
          throw ValidationError("recoordinate_cocycle: index data shape mismatch");
      return {c, unit_witness()};
    }
    case ChoiceChange::kCentralTwist: {
      check_pair_data();
      for (const auto& [p, v] : pair_data)
        if (!b.is_central(p.first, v))
          throw ValidationError("recoordinate_cocycle: central twist with "
                                "non-central element");
      Recoordinated out{twisted_g(b), {}};
      out.witness = pair_data;
      return out;
    }
    case ChoiceChange::kLambdaTwist: {
      check_pair_data();
      std::map<std::pair<int, int>, std::vector<std::vector<int>>> new_lambda;
      for (const auto& p : pairs) {
        const auto& k = pair_data.at({p[0], p[1]});
        const FiniteGroup& ka = b.group(p[0]);
        std::vector<std::vector<int>> maps;
        for (int j = 0; j < b.components(p); ++j) {
          auto l = b.lambda_map(p[0], p[1], j);
          std::vector<int> m(l.size());
          for (size_t x = 0; x < l.size(); ++x)
            m[x] = ka.conj(k[j], l[x]);
          maps.push_back(std::move(m));
        }
        new_lambda[{p[0], p[1]}] = std::move(maps);
      }
      std::vector<FiniteGroup> groups;
      for (int a = 0; a < b.index_count(); ++a) groups.push_back(b.group(a));
      BandPresentation new_band =
          b.cover_mode()
              ? BandPresentation(b.cover(), std::move(groups), std::move(new_lambda))
              : BandPresentation(b.nerve(), std::move(groups), std::move(new_lambda));
      Recoordinated out{twisted_g(new_band), {}};
      out.witness = pair_data;
      return out;
    }
  }
  throw ValidationError("recoordinate_cocycle: unknown change");
}

AbelianReduction abelian_reduce(const Cocycle2& c) {
  const BandPresentation& b = c.band;
  check_cocycle2_shape(c);
  for (int a = 1; a < b.index_count(); ++a)
    if (!(b.group(a) == b.group(0)))
      throw ValidationError("abelian_reduce: coefficients must be one constant group");
  for (const auto& p : b.nerve().tuples(2))
    for (int j = 0; j < b.components(p); ++j)
      if (b.lambda_map(p[0], p[1], j) != identity_map(b.group(0).order()))
        throw ValidationError("abelian_reduce: lambda must be the identity");
  for (const auto& t : b.nerve().tuples(3))
    if (b.components(t) != 1)
      throw ValidationError("abelian_reduce: triple overlaps must be connected");

  Subgroup z = center(b.group(0));
  std::vector<int> into_center(b.group(0).order(), -1);
  for (size_t i = 0; i < z.inclusion.size(); ++i)
    into_center[z.inclusion[i]] = static_cast<int>(i);

  AbelianCochain coch{2, {}};
  for (const auto& t : b.nerve().tuples(3)) {
    int e = c.g.at(t)[0];
    if (into_center[e] < 0)
      throw ValidationError("abelian_reduce: non-central value at " +
                            tuple_name(b.nerve(), t) + " (identity (i) violated)");
    coch.values[t] = into_center[e];
  }
  if (!is_unit_cochain(cech_coboundary(b.nerve(), z.group, coch), z.group))
    throw ValidationError("abelian_reduce: abelian cocycle relation fails");
  return {std::move(z), std::move(coch)};
}

ObstructionResult band_obstruction(
    const BandPresentation& band,
    const std::map<std::vector<int>, BandPresentation::Value>& g, long long budget) {
  for (int a = 1; a < band.index_count(); ++a)
    if (!(band.group(a) == band.group(0)))
      throw ValidationError("band_obstruction: coefficients must be one constant "
                            "group");
  for (int k = 1; k <= band.nerve().depth(); ++k)
    for (const auto& t : band.nerve().tuples(k))
      if (band.components(t) != 1)
        throw ValidationError("band_obstruction: intersections must be connected");

  Subgroup z = center(band.group(0));
  std::vector<int> into_center(band.group(0).order(), -1);
  for (size_t i = 0; i < z.inclusion.size(); ++i)
    into_center[z.inclusion[i]] = static_cast<int>(i);
  // the untwisted center-valued complex needs lambda to fix the center
  for (const auto& p : band.nerve().tuples(2)) {
    auto l = band.lambda_map(p[0], p[1], 0);
    for (int e : z.inclusion)
      if (l[e] != e)
        throw ValidationError("band_obstruction: lambda must fix the center");
  }

  // the cochain must satisfy identity (i): lambda compatibility
  Cocycle2 c{band, g};
  check_cocycle2_shape(c);
  for (const auto& t : band.nerve().tuples(3)) {
    int a = t[0], bb = t[1], cc = t[2];
    const FiniteGroup& ka = band.group(a);
    auto l_ab = band.lambda_map(a, bb, 0);
    auto l_bc = band.lambda_map(bb, cc, 0);
    auto l_ac = band.lambda_map(a, cc, 0);
    int e = g.at(t)[0];
    for (int x = 0; x < band.group(cc).order(); ++x)
      if (l_ab[l_bc[x]] != ka.conj(e, l_ac[x]))
        throw ValidationError("band_obstruction: lambda compatibility fails at " +
                              tuple_name(band.nerve(), t));
  }

  const FiniteGroup& ka = band.group(0);
  ObstructionResult out{std::move(z), AbelianCochain{3, {}}, std::nullopt,
                        std::nullopt};
  for (const auto& q : band.nerve().tuples(4)) {
    int a = q[0], bb = q[1];
    auto e = [&](std::vector<int> t) { return g.at(t)[0]; };
    auto l_ab = band.lambda_map(a, bb, 0);
    int xi = ka.mul(
        ka.mul(e({a, bb, q[2]}), e({a, q[2], q[3]})),
        ka.mul(ka.inv(e({a, bb, q[3]})), ka.inv(l_ab[e({bb, q[2], q[3]})])));
    if (into_center[xi] < 0)
      throw ValidationError("band_obstruction: obstruction is not central at " +
                            tuple_name(band.nerve(), q) +
                            " (lambda compatibility was violated)");
    out.xi.values[q] = into_center[xi];
  }
  if (!is_unit_cochain(cech_coboundary(band.nerve(), out.center_of.group, out.xi),
                       out.center_of.group))
    throw InternalError("band_obstruction: obstruction cochain is not closed");

  out.zeta = solve_coboundary(band.nerve(), out.center_of.group, out.xi, budget);
  if (out.zeta) {
    std::map<std::vector<int>, BandPresentation::Value> h;
    for (const auto& t : band.nerve().tuples(3))
      h[t] = {ka.mul(out.center_of.inclusion[out.zeta->values.at(t)], g.at(t)[0])};
    Cocycle2 corrected{band, std::move(h)};
    CheckResult r = check_cocycle2(corrected);
    if (!r.ok)
      throw InternalError("band_obstruction: corrected cochain is not a cocycle: " +
                          r.diagnostic);
    out.corrected = std::move(corrected);
  }
  return out;
}

}  // namespace cech
