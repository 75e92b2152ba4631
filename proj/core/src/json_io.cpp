#include "cech/json_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace cech {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw ValidationError("json: " + what); }

const json& field(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) bad("missing field '" + key + "'");
  return *it;
}

// "(A,B)" or "(A,B,C)" -> label list
std::vector<std::string> split_key(const std::string& key) {
  std::string s = key;
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')')
    s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(part);
  return out;
}

int label_index(const std::vector<std::string>& labels, const std::string& name,
                const std::string& what) {
  auto it = std::find(labels.begin(), labels.end(), name);
  if (it == labels.end()) bad("unknown " + what + " label '" + name + "'");
  return static_cast<int>(it - labels.begin());
}

std::vector<int> key_to_tuple(const std::string& key,
                              const std::vector<std::string>& labels, size_t arity) {
  std::vector<std::string> parts = split_key(key);
  if (parts.size() != arity)
    bad("key '" + key + "' does not name " + std::to_string(arity) + " indices");
  std::vector<int> t;
  for (const auto& p : parts) t.push_back(label_index(labels, p, "index"));
  for (size_t i = 1; i < t.size(); ++i)
    if (t[i - 1] >= t[i]) bad("key '" + key + "' is not strictly increasing");
  return t;
}

int element_of(const json& j, const FiniteGroup& g) {
  if (j.is_number_integer()) {
    int e = j.get<int>();
    if (e < 0 || e >= g.order()) bad("element index out of range");
    return e;
  }
  if (j.is_string()) return g.element_index(j.get<std::string>());
  bad("expected a group element label or index");
}

std::vector<int> permutation_of(const json& j, const FiniteGroup& g) {
  if (!j.is_array() || static_cast<int>(j.size()) != g.order())
    bad("expected a permutation with one entry per group element");
  std::vector<int> out;
  for (const auto& e : j) out.push_back(element_of(e, g));
  return out;
}

std::string pair_key(const std::vector<std::string>& labels, int a, int b) {
  return "(" + labels[a] + "," + labels[b] + ")";
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad("parse error in '" + path + "': " + e.what());
  }
  return j;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open '" + path + "'");
  std::uint64_t h = 14695981039346656037ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a:" << std::hex;
  for (int i = 15; i >= 0; --i) os << "0123456789abcdef"[(h >> (4 * i)) & 0xf];
  return os.str();
}

FinitePoset poset_from_json(const json& j) {
  std::vector<std::string> points;
  for (const auto& p : field(j, "points")) {
    if (!p.is_string()) bad("space points must be strings");
    points.push_back(p.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> leq;
  for (const auto& r : field(j, "leq")) {
    if (!r.is_array() || r.size() != 2) bad("leq entries must be [x, y] pairs");
    leq.push_back({r[0].get<std::string>(), r[1].get<std::string>()});
  }
  return FinitePoset(std::move(points), std::move(leq));
}

json poset_to_json(const FinitePoset& x) {
  json j;
  j["points"] = json::array();
  for (int p = 0; p < x.size(); ++p) j["points"].push_back(x.point_name(p));
  j["leq"] = json::array();
  for (int p = 0; p < x.size(); ++p)
    for (int q = 0; q < x.size(); ++q)
      if (p != q && x.leq(p, q))
        j["leq"].push_back({x.point_name(p), x.point_name(q)});
  return j;
}

Cover cover_from_json(const json& j, const FinitePoset& x) {
  const json& opens = field(j, "opens");
  if (!opens.is_object() || opens.empty()) bad("cover needs a non-empty 'opens' map");
  std::vector<std::string> labels;
  std::vector<Open> members;
  Open target = x.empty_open();
  for (auto it = opens.begin(); it != opens.end(); ++it) {  // sorted by label
    std::uint64_t bits = 0;
    for (const auto& p : it.value())
      bits |= 1ull << x.point_index(p.get<std::string>());
    Open u{&x, bits};
    labels.push_back(it.key());
    members.push_back(u);
    target = unite(target, u);
  }
  return Cover(target, std::move(labels), std::move(members));
}

json cover_to_json(const Cover& c) {
  json opens = json::object();
  for (int a = 0; a < c.size(); ++a) {
    json pts = json::array();
    for (int p : c.members[a].points())
      pts.push_back(c.of.space->point_name(p));
    opens[c.labels[a]] = pts;
  }
  return json{{"opens", opens}};
}

AbstractNerve nerve_from_json(const json& j) {
  std::vector<std::string> indices;
  for (const auto& i : field(j, "indices")) indices.push_back(i.get<std::string>());
  std::vector<std::vector<int>> inhabited;
  for (size_t i = 0; i < indices.size(); ++i)
    inhabited.push_back({static_cast<int>(i)});
  auto read = [&](const char* key, size_t arity) {
    auto it = j.find(key);
    if (it == j.end()) return;
    for (const auto& t : *it) {
      std::vector<int> tuple;
      if (t.is_string()) {
        tuple = key_to_tuple(t.get<std::string>(), indices, arity);
      } else {
        for (const auto& e : t)
          tuple.push_back(e.is_string()
                              ? label_index(indices, e.get<std::string>(), "index")
                              : e.get<int>());
        if (tuple.size() != arity) bad(std::string(key) + ": wrong tuple size");
      }
      inhabited.push_back(std::move(tuple));
    }
  };
  read("inhabited_pairs", 2);
  read("inhabited_triples", 3);
  read("inhabited_quadruples", 4);
  return AbstractNerve(std::move(indices), std::move(inhabited), 4);
}

json nerve_to_json(const AbstractNerve& nv) {
  json j;
  j["indices"] = nv.indices();
  auto write = [&](const char* key, int k) {
    json arr = json::array();
    for (const auto& t : nv.tuples(k)) {
      json tj = json::array();
      for (int i : t) tj.push_back(nv.indices()[i]);
      arr.push_back(tj);
    }
    j[key] = arr;
  };
  write("inhabited_pairs", 2);
  write("inhabited_triples", 3);
  write("inhabited_quadruples", 4);
  return j;
}

FiniteGroup group_from_json(const json& j) {
  if (j.is_string()) return group_by_name(j.get<std::string>());
  std::vector<std::string> elements;
  for (const auto& e : field(j, "elements")) elements.push_back(e.get<std::string>());
  std::vector<std::vector<int>> table;
  for (const auto& row : field(j, "table")) {
    std::vector<int> r;
    for (const auto& e : row) r.push_back(e.get<int>());
    table.push_back(std::move(r));
  }
  return FiniteGroup(std::move(elements), std::move(table));
}

json group_to_json(const FiniteGroup& g) {
  return json{{"elements", g.elements()}, {"table", g.table()}};
}

namespace {

// shared shape loading for cocycle1 / band / cocycle2 documents
struct Context {
  std::shared_ptr<FinitePoset> space;  // null in nerve mode
  std::optional<Cover> cover;
  AbstractNerve nv;
  std::vector<std::string> labels;  // chart/index labels
};

Context load_context(const json& j) {
  if (j.contains("nerve")) {
    AbstractNerve nv = nerve_from_json(field(j, "nerve"));
    std::vector<std::string> labels = nv.indices();
    return {nullptr, std::nullopt, std::move(nv), std::move(labels)};
  }
  if (!j.contains("space"))
    bad("expected either a 'nerve' or a 'space' with a 'cover'");
  auto space = std::make_shared<FinitePoset>(poset_from_json(field(j, "space")));
  Cover cover = j.contains("cover") ? cover_from_json(field(j, "cover"), *space)
                                    : minimal_cover(space->whole());
  AbstractNerve nv = nerve(cover, std::min(4, std::max(1, cover.size())));
  std::vector<std::string> labels = cover.labels;
  return {std::move(space), std::move(cover), std::move(nv), std::move(labels)};
}

}  // namespace

LoadedCocycle1 cocycle1_from_json(const json& j) {
  Context ctx = load_context(j);
  FiniteGroup group = group_from_json(field(j, "group"));
  std::map<std::pair<int, int>, int> g;
  for (const auto& [key, val] : field(j, "g").items()) {
    std::vector<int> t = key_to_tuple(key, ctx.labels, 2);
    g[{t[0], t[1]}] = element_of(val, group);
  }
  LoadedCocycle1 out;
  if (ctx.space) {
    out.space = ctx.space;
    out.coeff = std::make_shared<GroupPresheaf>(
        constant_group_sheaf(*ctx.space, group));
    out.cocycle = std::make_shared<Cocycle1>(*ctx.cover, *out.coeff, std::move(g));
  } else {
    out.cocycle = std::make_shared<Cocycle1>(ctx.nv, std::move(group), std::move(g));
  }
  return out;
}

namespace {

std::pair<LoadedBand, Context> band_with_context(const json& j) {
  Context ctx = load_context(j);
  const json& kj = field(j, "K");
  std::vector<FiniteGroup> groups;
  if (kj.is_array() && !kj.is_string()) {
    for (const auto& e : kj) groups.push_back(group_from_json(e));
    if (static_cast<int>(groups.size()) != ctx.nv.index_count())
      bad("'K' must list one group per index");
  } else {
    groups.assign(ctx.nv.index_count(), group_from_json(kj));
  }

  std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda;
  for (const auto& [key, val] : field(j, "lambda").items()) {
    std::vector<int> t = key_to_tuple(key, ctx.labels, 2);
    std::vector<std::vector<int>> maps;
    bool per_component = val.is_array() && !val.empty() && val.front().is_array();
    if (per_component) {
      for (const auto& m : val) maps.push_back(permutation_of(m, groups[t[1]]));
    } else {
      maps.push_back(permutation_of(val, groups[t[1]]));
    }
    lambda[{t[0], t[1]}] = std::move(maps);
  }
  // in cover mode a single map is replicated across components
  if (ctx.cover) {
    for (auto& [p, maps] : lambda) {
      size_t nc = ctx.space->components(
          ctx.cover->intersection({p.first, p.second}).bits).size();
      if (maps.size() == 1 && nc > 1) maps.assign(nc, maps[0]);
    }
  }

  LoadedBand out;
  out.space = ctx.space;
  out.band = std::make_shared<BandPresentation>(
      ctx.cover ? BandPresentation(*ctx.cover, std::move(groups), std::move(lambda))
                : BandPresentation(ctx.nv, std::move(groups), std::move(lambda)));
  return {std::move(out), std::move(ctx)};
}

}  // namespace

LoadedBand band_from_json(const json& j) { return band_with_context(j).first; }

json band_to_json(const BandPresentation& band) {
  json j;
  if (band.cover_mode()) {
    j["space"] = poset_to_json(*band.cover().of.space);
    j["cover"] = cover_to_json(band.cover());
  } else {
    j["nerve"] = nerve_to_json(band.nerve());
  }
  bool all_same = true;
  for (int a = 1; a < band.index_count(); ++a)
    if (!(band.group(a) == band.group(0))) all_same = false;
  if (all_same) {
    j["K"] = group_to_json(band.group(0));
  } else {
    json ks = json::array();
    for (int a = 0; a < band.index_count(); ++a) ks.push_back(group_to_json(band.group(a)));
    j["K"] = ks;
  }
  const auto& labels =
      band.cover_mode() ? band.cover().labels : band.nerve().indices();
  json lj = json::object();
  for (const auto& p : band.nerve().tuples(2)) {
    json maps = json::array();
    for (int c = 0; c < band.components(p); ++c)
      maps.push_back(band.lambda_map(p[0], p[1], c));
    lj[pair_key(labels, p[0], p[1])] = maps;
  }
  j["lambda"] = lj;
  return j;
}

LoadedCocycle2 cocycle2_from_json(const json& j) {
  auto [lb, ctx] = band_with_context(j);
  std::map<std::vector<int>, BandPresentation::Value> g;
  for (const auto& [key, val] : field(j, "g").items()) {
    std::vector<int> t = key_to_tuple(key, ctx.labels, 3);
    const FiniteGroup& k = lb.band->group(t[0]);
    BandPresentation::Value v;
    if (val.is_array()) {
      for (const auto& e : val) v.push_back(element_of(e, k));
    } else {
      v.push_back(element_of(val, k));
    }
    if (static_cast<int>(v.size()) == 1 && lb.band->components(t) > 1)
      v.assign(lb.band->components(t), v[0]);
    g[t] = std::move(v);
  }
  LoadedCocycle2 out;
  out.space = lb.space;
  out.cocycle = std::make_shared<Cocycle2>(Cocycle2{*lb.band, std::move(g)});
  return out;
}

json cocycle2_to_json(const Cocycle2& c) {
  json j = band_to_json(c.band);
  const auto& labels =
      c.band.cover_mode() ? c.band.cover().labels : c.band.nerve().indices();
  json gj = json::object();
  for (const auto& [t, v] : c.g) {
    json entries = json::array();
    for (int e : v) entries.push_back(c.band.group(t[0]).element_name(e));
    gj["(" + labels[t[0]] + "," + labels[t[1]] + "," + labels[t[2]] + ")"] = entries;
  }
  j["g"] = gj;
  return j;
}

LoadedExtension extension_from_json(const json& j) {
  FiniteGroup l = group_from_json(field(j, "L"));
  FiniteGroup g = group_from_json(field(j, "G"));
  std::vector<int> jmap;
  for (const auto& e : field(j, "j")) jmap.push_back(element_of(e, g));

  auto base = std::make_shared<FinitePoset>(poset_from_json(field(j, "base")));
  FinitePoset total = poset_from_json(field(j, "total"));
  const json& pj = field(j, "projection");
  std::vector<int> proj(total.size(), -1);
  for (const auto& [tp, bp] : pj.items())
    proj[total.point_index(tp)] = base->point_index(bp.get<std::string>());
  for (int p = 0; p < total.size(); ++p)
    if (proj[p] < 0) bad("projection missing total point " + total.point_name(p));

  const json& aj = field(j, "action");
  std::vector<std::vector<int>> action;
  for (int e = 0; e < g.order(); ++e) {
    std::vector<int> perm(total.size());
    for (int p = 0; p < total.size(); ++p) perm[p] = p;
    auto it = aj.find(g.element_name(e));
    if (it != aj.end())
      for (const auto& [from, to] : it->items())
        perm[total.point_index(from)] = total.point_index(to.get<std::string>());
    action.push_back(std::move(perm));
  }

  LoadedExtension out;
  out.base = base;
  EtaleSpace m = make_etale_space(*base, std::move(total), std::move(proj));
  out.extension = std::make_shared<GroupoidExtension>(make_extension(
      std::move(l), std::move(g), std::move(jmap), std::move(m), std::move(action)));

  if (j.contains("charts")) {
    const json& cj = j["charts"];
    Cover cover = cover_from_json(field(cj, "cover"), *base);
    std::vector<std::vector<int>> sections(
        cover.size(), std::vector<int>(base->size(), -1));
    const json& sj = field(cj, "sections");
    for (int a = 0; a < cover.size(); ++a) {
      auto it = sj.find(cover.labels[a]);
      if (it == sj.end()) bad("charts: missing section for " + cover.labels[a]);
      for (const auto& [bp, tp] : it->items())
        sections[a][base->point_index(bp)] =
            out.extension->m.total.point_index(tp.get<std::string>());
    }
    std::map<std::pair<int, int>, std::vector<int>> arrows;
    for (const auto& [key, val] : field(cj, "arrows").items()) {
      std::vector<int> t = key_to_tuple(key, cover.labels, 2);
      std::vector<int> per_comp;
      for (const auto& e : val) per_comp.push_back(element_of(e, out.extension->g));
      arrows[{t[0], t[1]}] = std::move(per_comp);
    }
    out.charts = std::make_shared<ExtensionCharts>(
        ExtensionCharts{std::move(cover), std::move(sections), std::move(arrows)});
  }
  return out;
}

}  // namespace cech
