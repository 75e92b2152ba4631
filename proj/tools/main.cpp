// Command-line front end: parses JSON inputs, dispatches the library
// computations, and emits deterministic classification reports.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cech/descent.hpp"
#include "cech/json_io.hpp"

using namespace cech;
using nlohmann::json;

namespace {

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  long long budget = 0;
  std::vector<std::pair<std::string, std::string>> fields;  // ordered lines

  void add(const std::string& key, const std::string& value) {
    fields.push_back({key, value});
  }
  void add(const std::string& key, long long value) {
    fields.push_back({key, std::to_string(value)});
  }

  std::string text() const {
    std::ostringstream os;
    os << "command: " << command << "\n";
    for (const auto& [path, digest] : inputs)
      os << "input: " << path << " " << digest << "\n";
    os << "budget: " << budget << "\n";
    for (const auto& [k, v] : fields) os << k << ": " << v << "\n";
    return os.str();
  }

  std::string as_json() const {
    json j;
    j["command"] = command;
    j["inputs"] = json::array();
    for (const auto& [path, digest] : inputs)
      j["inputs"].push_back({{"path", path}, {"digest", digest}});
    j["budget"] = budget;
    json body = json::object();
    for (const auto& [k, v] : fields) body[k] = v;
    j["report"] = body;
    return j.dump(2) + "\n";
  }
};

long long default_budget() {
  if (const char* env = std::getenv("CECH_BUDGET")) {
    try {
      return std::stoll(env);
    } catch (const std::exception&) {
      throw ValidationError("CECH_BUDGET is not a number");
    }
  }
  return kDefaultBudget;
}

json tracked_load(Report& rep, const std::string& path) {
  rep.inputs.push_back({path, file_digest(path)});
  return load_json_file(path);
}

// band/cocycle2 documents may carry their nerve inline or get it from --nerve
json with_nerve(json doc, const json* nerve_doc) {
  if (nerve_doc && !doc.contains("nerve") && !doc.contains("space"))
    doc["nerve"] = *nerve_doc;
  return doc;
}

std::string cocycle1_line(const Cocycle1& c) {
  const auto& labels =
      c.cover_mode() ? c.cover().labels : c.nerve().indices();
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, e] : c.pairs()) {
    if (!first) os << " ";
    first = false;
    os << "(" << labels[p.first] << "," << labels[p.second]
       << ")=" << c.group_on(p.first, p.second).element_name(e);
  }
  if (first) os << "empty";
  return os.str();
}

std::string cocycle2_line(const Cocycle2& c) {
  const auto& labels =
      c.band.cover_mode() ? c.band.cover().labels : c.band.nerve().indices();
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, v] : c.g) {
    if (!first) os << " ";
    first = false;
    os << "(" << labels[t[0]] << "," << labels[t[1]] << "," << labels[t[2]]
       << ")=" << c.band.value_name(t[0], v);
  }
  if (first) os << "empty";
  return os.str();
}

std::string witness_line(const BandPresentation& band, const CocycleWitness& w) {
  const auto& labels =
      band.cover_mode() ? band.cover().labels : band.nerve().indices();
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, v] : w) {
    if (!first) os << " ";
    first = false;
    os << "(" << labels[p.first] << "," << labels[p.second]
       << ")=" << band.value_name(p.first, v);
  }
  if (first) os << "empty";
  return os.str();
}

std::string cochain_line(const AbelianCochain& c, const FiniteGroup& a,
                         const std::vector<std::string>& labels) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, e] : c.values) {
    if (!first) os << " ";
    first = false;
    os << "(";
    for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << labels[t[i]];
    os << ")=" << a.element_name(e);
  }
  if (first) os << "unit";
  return os.str();
}

void run_h1(Report& rep, const std::string& nerve_path,
            const std::string& space_path, const std::string& cover_path,
            const std::string& group_arg) {
  FiniteGroup group = group_arg.size() > 5 &&
                              group_arg.substr(group_arg.size() - 5) == ".json"
                          ? group_from_json(tracked_load(rep, group_arg))
                          : group_by_name(group_arg);
  if (!(group_arg.size() > 5 && group_arg.substr(group_arg.size() - 5) == ".json"))
    rep.inputs.push_back({"group", group_arg});

  std::vector<Cocycle1> classes;
  if (!nerve_path.empty()) {
    AbstractNerve nv = nerve_from_json(tracked_load(rep, nerve_path));
    classes = h1(nv, group, rep.budget);
    rep.add("classes", static_cast<long long>(classes.size()));
    for (size_t i = 0; i < classes.size(); ++i)
      rep.add("class " + std::to_string(i), cocycle1_line(classes[i]));
    return;
  }
  FinitePoset space = poset_from_json(tracked_load(rep, space_path));
  GroupPresheaf coeff = constant_group_sheaf(space, group);
  if (!cover_path.empty()) {
    Cover cover = cover_from_json(tracked_load(rep, cover_path), space);
    classes = h1(cover, coeff, rep.budget);
  } else {
    classes = h1_colim(coeff, rep.budget);
  }
  rep.add("classes", static_cast<long long>(classes.size()));
  for (size_t i = 0; i < classes.size(); ++i)
    rep.add("class " + std::to_string(i), cocycle1_line(classes[i]));
}

void run_h2(Report& rep, const std::string& nerve_path,
            const std::string& band_path, int threads) {
  json nerve_doc;
  const json* np = nullptr;
  if (!nerve_path.empty()) {
    nerve_doc = tracked_load(rep, nerve_path);
    np = &nerve_doc;
  }
  LoadedBand lb = band_from_json(with_nerve(tracked_load(rep, band_path), np));
  std::vector<Cocycle2> classes = h2(*lb.band, rep.budget, threads);
  rep.add("classes", static_cast<long long>(classes.size()));
  for (size_t i = 0; i < classes.size(); ++i)
    rep.add("class " + std::to_string(i), cocycle2_line(classes[i]));
}

void run_classify_torsors(Report& rep, const std::string& space_path,
                          const std::string& group_arg) {
  FinitePoset space = poset_from_json(tracked_load(rep, space_path));
  rep.inputs.push_back({"group", group_arg});
  FiniteGroup group = group_by_name(group_arg);
  GroupPresheaf coeff = constant_group_sheaf(space, group);
  std::vector<Cocycle1> classes = h1_colim(coeff, rep.budget);
  std::vector<Torsor> torsors;
  for (const auto& c : classes) torsors.push_back(cocycle_to_torsor(c));
  // independent check: the glued torsors are pairwise non-isomorphic
  for (size_t i = 0; i < torsors.size(); ++i)
    for (size_t j = i + 1; j < torsors.size(); ++j)
      if (torsor_isomorphism(torsors[i], torsors[j], rep.budget))
        throw InternalError("classify-torsors: inequivalent cocycles glued to "
                            "isomorphic torsors");
  rep.add("classes", static_cast<long long>(torsors.size()));
  for (size_t i = 0; i < torsors.size(); ++i) {
    CheckResult ok = check_torsor(torsors[i]);
    if (!ok.ok) throw InternalError("classify-torsors: " + ok.diagnostic);
    bool global = !global_sections(torsors[i]).empty();
    rep.add("class " + std::to_string(i),
            std::string(global ? "trivial (global section)" : "no global section"));
  }
}

void run_descent_check(Report& rep, const std::string& space_path,
                       const std::string& group_arg, const std::string& check) {
  FinitePoset space = poset_from_json(tracked_load(rep, space_path));
  rep.inputs.push_back({"group", group_arg});
  GroupoidPresheaf f =
      one_object_presheaf(constant_group_sheaf(space, group_by_name(group_arg)));
  if (check == "prestack" || check == "both")
    rep.add("prestack", std::string(is_prestack(f, rep.budget) ? "true" : "false"));
  if (check == "stack" || check == "both")
    rep.add("stack", std::string(is_stack(f, rep.budget) ? "true" : "false"));
}

void run_stackify(Report& rep, const std::string& space_path,
                  const std::string& group_arg) {
  FinitePoset space = poset_from_json(tracked_load(rep, space_path));
  rep.inputs.push_back({"group", group_arg});
  GroupoidPresheaf f =
      one_object_presheaf(constant_group_sheaf(space, group_by_name(group_arg)));
  Stackification st = stackify(f, rep.budget);
  int whole = st.result.open_index(space.whole());
  rep.add("global classes",
          static_cast<long long>(st.result.at(whole).iso_classes().size()));
  rep.add("stack", std::string(is_stack(st.result, rep.budget) ? "true" : "false"));
}

void run_obstruction(Report& rep, const std::string& nerve_path,
                     const std::string& cocycle_path) {
  json nerve_doc;
  const json* np = nullptr;
  if (!nerve_path.empty()) {
    nerve_doc = tracked_load(rep, nerve_path);
    np = &nerve_doc;
  }
  LoadedCocycle2 lc =
      cocycle2_from_json(with_nerve(tracked_load(rep, cocycle_path), np));
  const BandPresentation& band = lc.cocycle->band;
  ObstructionResult r = band_obstruction(band, lc.cocycle->g, rep.budget);
  const auto& labels =
      band.cover_mode() ? band.cover().labels : band.nerve().indices();
  rep.add("center order", static_cast<long long>(r.center_of.group.order()));
  rep.add("xi", cochain_line(r.xi, r.center_of.group, labels));
  rep.add("solvable", std::string(r.zeta ? "true" : "false"));
  if (r.zeta) {
    rep.add("zeta", cochain_line(*r.zeta, r.center_of.group, labels));
    rep.add("corrected", cocycle2_line(*r.corrected));
    rep.add("corrected valid",
            std::string(check_cocycle2(*r.corrected).ok ? "true" : "false"));
  }
}

void run_gerbe_roundtrip(Report& rep, const std::string& nerve_path,
                         const std::string& band_path, int threads) {
  json nerve_doc;
  const json* np = nullptr;
  if (!nerve_path.empty()) {
    nerve_doc = tracked_load(rep, nerve_path);
    np = &nerve_doc;
  }
  LoadedBand lb = band_from_json(with_nerve(tracked_load(rep, band_path), np));
  std::vector<Cocycle2> classes = h2(*lb.band, rep.budget, threads);
  rep.add("classes", static_cast<long long>(classes.size()));
  for (size_t i = 0; i < classes.size(); ++i) {
    GerbeGroupoid gg = cocycle_to_groupoid(classes[i]);
    Cocycle2 back =
        groupoid_to_cocycle(gg, *lb.band, canonical_presentation(*lb.band));
    std::string status;
    if (back.g == classes[i].g) {
      status = "exact";
    } else {
      auto w = cocycles2_equivalent(classes[i], back, rep.budget);
      if (!w) throw InternalError("gerbe-roundtrip: extraction left the class");
      status = "equivalent, witness " + witness_line(*lb.band, *w);
    }
    rep.add("class " + std::to_string(i) + " roundtrip", status);
  }
}

void run_extension_class(Report& rep, const std::string& ext_path, int threads) {
  LoadedExtension le = extension_from_json(tracked_load(rep, ext_path));
  if (!le.charts)
    throw ValidationError("extension-class: the extension document has no charts");
  auto [band, c] = extension_to_cocycle(*le.extension, *le.charts);
  rep.add("charts", static_cast<long long>(le.charts->cover.size()));
  rep.add("class", cocycle2_line(c));
  std::vector<Cocycle2> classes = h2(band, rep.budget, threads);
  rep.add("h2 classes", static_cast<long long>(classes.size()));
  int found = -1;
  for (size_t i = 0; i < classes.size() && found < 0; ++i)
    if (cocycles2_equivalent(classes[i], c, rep.budget)) found = static_cast<int>(i);
  if (found < 0) throw InternalError("extension-class: class not in enumeration");
  rep.add("class index", static_cast<long long>(found));
  bool trivial = cocycles2_equivalent(trivial_cocycle2(band), c, rep.budget)
                     .has_value();
  rep.add("trivial", std::string(trivial ? "true" : "false"));
}

void run_verify(Report& rep, const std::string& space_path,
                const std::string& nerve_path, const std::string& group_path,
                const std::string& cocycle1_path, const std::string& band_path,
                const std::string& cocycle2_path, const std::string& ext_path) {
  bool any = false;
  json nerve_doc;
  const json* np = nullptr;
  if (!space_path.empty()) {
    poset_from_json(tracked_load(rep, space_path));
    rep.add(space_path, std::string("valid space"));
    any = true;
  }
  if (!nerve_path.empty()) {
    nerve_doc = tracked_load(rep, nerve_path);
    nerve_from_json(nerve_doc);
    np = &nerve_doc;
    rep.add(nerve_path, std::string("valid nerve"));
    any = true;
  }
  if (!group_path.empty()) {
    group_from_json(tracked_load(rep, group_path));
    rep.add(group_path, std::string("valid group"));
    any = true;
  }
  if (!cocycle1_path.empty()) {
    cocycle1_from_json(with_nerve(tracked_load(rep, cocycle1_path), np));
    rep.add(cocycle1_path, std::string("valid 1-cocycle"));
    any = true;
  }
  if (!band_path.empty()) {
    band_from_json(with_nerve(tracked_load(rep, band_path), np));
    rep.add(band_path, std::string("valid band"));
    any = true;
  }
  if (!cocycle2_path.empty()) {
    LoadedCocycle2 lc =
        cocycle2_from_json(with_nerve(tracked_load(rep, cocycle2_path), np));
    CheckResult r = check_cocycle2(*lc.cocycle);
    if (!r.ok) throw ValidationError(cocycle2_path + ": " + r.diagnostic);
    rep.add(cocycle2_path, std::string("valid 2-cocycle"));
    any = true;
  }
  if (!ext_path.empty()) {
    extension_from_json(tracked_load(rep, ext_path));
    rep.add(ext_path, std::string("valid extension"));
    any = true;
  }
  if (!any) throw ValidationError("verify: nothing to verify");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Cech cohomology for sheaves, torsors, stacks and gerbes "
               "on finite spaces"};
  app.require_subcommand(1);

  long long budget = -1;
  std::string format = "text";
  int threads = 1;
  bool timing = false;
  app.add_option("--budget", budget, "Enumeration budget (default CECH_BUDGET or 10^7)");
  app.add_option("--format", format, "Report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--threads", threads, "Worker threads for class enumeration");
  app.add_flag("--timing", timing, "Append wall-clock timing (not deterministic)");

  std::string nerve_path, space_path, cover_path, group_arg, band_path;
  std::string cocycle1_path, cocycle2_path, ext_path, check = "both";

  CLI::App* h1c = app.add_subcommand("h1", "Classify 1-cocycles / torsors");
  h1c->add_option("--nerve", nerve_path, "Abstract nerve JSON");
  h1c->add_option("--space", space_path, "Finite space JSON");
  h1c->add_option("--cover", cover_path, "Cover JSON (default: minimal cover)");
  h1c->add_option("--group", group_arg, "Group name or JSON path")->required();

  CLI::App* h2c = app.add_subcommand("h2", "Classify 2-cocycles with band coefficients");
  h2c->add_option("--nerve", nerve_path, "Abstract nerve JSON");
  h2c->add_option("--band", band_path, "Band JSON")->required();

  CLI::App* ct = app.add_subcommand("classify-torsors",
                                    "Glue torsors from cocycle classes and re-check");
  ct->add_option("--space", space_path, "Finite space JSON")->required();
  ct->add_option("--group", group_arg, "Group name")->required();

  CLI::App* dc = app.add_subcommand("descent-check", "Prestack / stack checks");
  dc->add_option("--space", space_path, "Finite space JSON")->required();
  dc->add_option("--group", group_arg, "Constant one-object groupoid from a group")
      ->required();
  dc->add_option("--check", check, "prestack, stack or both")
      ->check(CLI::IsMember({"prestack", "stack", "both"}));

  CLI::App* sk = app.add_subcommand("stackify", "Associated stack of a constant groupoid");
  sk->add_option("--space", space_path, "Finite space JSON")->required();
  sk->add_option("--group", group_arg, "Group name")->required();

  CLI::App* ob = app.add_subcommand("obstruction",
                                    "Central obstruction of a lambda-compatible cochain");
  ob->add_option("--nerve", nerve_path, "Abstract nerve JSON");
  ob->add_option("--cocycle2", cocycle2_path, "Band + candidate cochain JSON")
      ->required();

  CLI::App* gr = app.add_subcommand("gerbe-roundtrip",
                                    "Cocycle -> stalk groupoids -> cocycle per class");
  gr->add_option("--nerve", nerve_path, "Abstract nerve JSON");
  gr->add_option("--band", band_path, "Band JSON")->required();

  CLI::App* ec = app.add_subcommand("extension-class",
                                    "Band and class of a groupoid extension");
  ec->add_option("--extension", ext_path, "Extension JSON")->required();

  CLI::App* vf = app.add_subcommand("verify", "Validate documents");
  vf->add_option("--space", space_path, "Finite space JSON");
  vf->add_option("--nerve", nerve_path, "Abstract nerve JSON");
  vf->add_option("--group", group_arg, "Group JSON path");
  vf->add_option("--cocycle", cocycle1_path, "1-cocycle JSON");
  vf->add_option("--band", band_path, "Band JSON");
  vf->add_option("--cocycle2", cocycle2_path, "2-cocycle JSON");
  vf->add_option("--extension", ext_path, "Extension JSON");

  // let --budget/--format/--threads/--timing appear after the subcommand too
  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  Report rep;
  auto start = std::chrono::steady_clock::now();
  try {
    rep.budget = budget >= 0 ? budget : default_budget();
    if (threads < 1) throw ValidationError("--threads must be positive");

    if (h1c->parsed()) {
      rep.command = "h1";
      if (nerve_path.empty() == space_path.empty())
        throw ValidationError("h1: pass exactly one of --nerve or --space");
      run_h1(rep, nerve_path, space_path, cover_path, group_arg);
    } else if (h2c->parsed()) {
      rep.command = "h2";
      run_h2(rep, nerve_path, band_path, threads);
    } else if (ct->parsed()) {
      rep.command = "classify-torsors";
      run_classify_torsors(rep, space_path, group_arg);
    } else if (dc->parsed()) {
      rep.command = "descent-check";
      run_descent_check(rep, space_path, group_arg, check);
    } else if (sk->parsed()) {
      rep.command = "stackify";
      run_stackify(rep, space_path, group_arg);
    } else if (ob->parsed()) {
      rep.command = "obstruction";
      run_obstruction(rep, nerve_path, cocycle2_path);
    } else if (gr->parsed()) {
      rep.command = "gerbe-roundtrip";
      run_gerbe_roundtrip(rep, nerve_path, band_path, threads);
    } else if (ec->parsed()) {
      rep.command = "extension-class";
      run_extension_class(rep, ext_path, threads);
    } else if (vf->parsed()) {
      rep.command = "verify";
      run_verify(rep, space_path, nerve_path, group_arg, cocycle1_path, band_path,
                 cocycle2_path, ext_path);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }

  if (timing) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    rep.add("timing ms", static_cast<long long>(ms));
  }
  std::cout << (format == "json" ? rep.as_json() : rep.text());
  return 0;
}
