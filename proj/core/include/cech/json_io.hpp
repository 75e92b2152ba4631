#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "cech/extension.hpp"
#include "cech/torsor.hpp"

namespace cech {

// JSON (de)serialization for the document formats understood by the CLI.
//
//   space:    {"points": [...], "leq": [[x, y], ...]}
//   cover:    {"opens": {"U0": [points], ...}}            (over a given space)
//   nerve:    {"indices": [...], "inhabited_pairs": [[i, j], ...],
//              "inhabited_triples": [...], "inhabited_quadruples": [...]}
//   group:    {"elements": [...], "table": [[...]]} or a built-in name
//   cocycle1: {"nerve"| "space"+"cover", "group", "g": {"(A,B)": label}}
//   band:     {"nerve"| "space"+"cover", "K": group or [group, ...],
//              "lambda": {"(A,B)": permutation or [permutation, ...]}}
//   cocycle2: band fields plus {"g": {"(A,B,C)": label or [label, ...]}}
//   extension: {"L", "G", "j": [labels], "base", "total",
//               "projection": {total point: base point},
//               "action": {G element: {total point: total point}},
//               "charts": {"cover", "sections": {chart: {base: total}},
//                          "arrows": {"(U,V)": [labels per component]}}}
//
// Pair/triple keys use the index labels of the nerve or the cover in
// increasing index order. Values referencing group elements accept element
// labels or integer indices.

nlohmann::json load_json_file(const std::string& path);

// 64-bit FNV-1a digest of a file's bytes, as "fnv1a:" + 16 hex digits.
std::string file_digest(const std::string& path);

FinitePoset poset_from_json(const nlohmann::json& j);
nlohmann::json poset_to_json(const FinitePoset& x);

// The cover target is the union of the members.
Cover cover_from_json(const nlohmann::json& j, const FinitePoset& x);
nlohmann::json cover_to_json(const Cover& c);

AbstractNerve nerve_from_json(const nlohmann::json& j);
nlohmann::json nerve_to_json(const AbstractNerve& nv);

FiniteGroup group_from_json(const nlohmann::json& j);
nlohmann::json group_to_json(const FiniteGroup& g);

// Documents in cover mode reference a concrete space; the loaded space is
// returned alongside so the pointer-holding members stay valid.
struct LoadedCocycle1 {
  std::shared_ptr<FinitePoset> space;       // null in nerve mode
  std::shared_ptr<GroupPresheaf> coeff;     // null in nerve mode
  std::shared_ptr<Cocycle1> cocycle;
};
LoadedCocycle1 cocycle1_from_json(const nlohmann::json& j);

struct LoadedBand {
  std::shared_ptr<FinitePoset> space;       // null in nerve mode
  std::shared_ptr<BandPresentation> band;
};
LoadedBand band_from_json(const nlohmann::json& j);
nlohmann::json band_to_json(const BandPresentation& band);

struct LoadedCocycle2 {
  std::shared_ptr<FinitePoset> space;       // null in nerve mode
  std::shared_ptr<Cocycle2> cocycle;
};
LoadedCocycle2 cocycle2_from_json(const nlohmann::json& j);
nlohmann::json cocycle2_to_json(const Cocycle2& c);

struct LoadedExtension {
  std::shared_ptr<FinitePoset> base;
  std::shared_ptr<GroupoidExtension> extension;
  std::shared_ptr<ExtensionCharts> charts;  // null when absent
};
LoadedExtension extension_from_json(const nlohmann::json& j);

}  // namespace cech
