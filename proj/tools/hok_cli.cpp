#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hok/birelational.hpp"
#include "hok/error.hpp"
#include "hok/formula.hpp"
#include "hok/general.hpp"
#include "hok/higher_order.hpp"
#include "hok/model_io.hpp"
#include "hok/search.hpp"
#include "hok/transform.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace hok;

// Signals a broken internal invariant; exits with status 2.
struct InternalBreach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model_path;
  std::vector<std::string> formulas;
  std::string gamma;
  std::string logic;
  std::string at;
  std::string as;
  std::string output;
  std::size_t max_worlds = 2;
  std::size_t max_atoms = 1;
  std::size_t max_submodels = 1;
  bool rooted = false;
  bool json = false;
  bool any_witness = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelFile load(const Options& o) {
  if (o.model_path.empty()) throw Error("--model is required");
  try {
    return parse_model_file(read_file(o.model_path));
  } catch (const SyntaxError& e) {
    throw Error(o.model_path + ": " + e.what());
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("cannot write '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

Formula single_formula(const Options& o) {
  if (o.formulas.size() != 1) throw Error("exactly one --formula is required");
  return parse(o.formulas.front());
}

std::vector<Formula> gamma_of(const Options& o) {
  std::vector<Formula> out;
  std::string_view rest = o.gamma;
  while (!rest.empty()) {
    auto cut = rest.find(';');
    std::string_view item = rest.substr(0, cut);
    if (item.find_first_not_of(" \t") != std::string_view::npos) out.push_back(parse(item));
    if (cut == std::string_view::npos) break;
    rest.remove_prefix(cut + 1);
  }
  return out;
}

enum class Kind { kSingle, kGeneral, kHigherOrder };

Kind kind_of(const ModelFile& f) {
  if (!f.nmodels.empty()) {
    if (!f.models.empty() || f.nmodels.size() != 1 || !f.succ.empty())
      throw ModelError("a higher-order file holds exactly one top-level nmodel block");
    return Kind::kHigherOrder;
  }
  if (f.models.size() == 1 && f.succ.empty() && !f.reference) return Kind::kSingle;
  return Kind::kGeneral;
}

const ModelBlock& single_block(const ModelFile& f) {
  if (kind_of(f) != Kind::kSingle) throw ModelError("expected a file with a single model block");
  return f.models.front();
}

Logic infer_logic(const ModelFile& f) {
  switch (kind_of(f)) {
    case Kind::kSingle:
      return f.models.front().has_r ? Logic::kIk : Logic::kProp;
    case Kind::kGeneral:
      return validate_homogeneous(to_general(f)) ? Logic::kHomogeneous : Logic::kPartial;
    case Kind::kHigherOrder:
      break;
  }
  throw ModelError("higher-order files take no --logic");
}

void print_verdicts(std::ostream& os, const Options& o, const std::vector<std::string>& labels, const PointSet& holds,
                    json& j) {
  std::optional<std::string> only = o.at.empty() ? std::nullopt : std::optional<std::string>(o.at);
  bool matched = false;
  json verdicts = json::array();
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (only && labels[p] != *only) continue;
    matched = true;
    if (o.json) verdicts.push_back({{"point", labels[p]}, {"holds", static_cast<bool>(holds[p])}});
    else os << labels[p] << ": " << (holds[p] ? "true" : "false") << '\n';
  }
  if (!matched) throw UnknownName("no evaluation point '" + o.at + "'");
  if (o.json) j["verdicts"] = verdicts;
}

int cmd_parse(const Options& o) {
  Output out(o.output);
  json arr = json::array();
  for (const auto& text : o.formulas) {
    Formula f = parse(text);
    if (o.json) {
      json a = json::array();
      for (const auto& p : atoms(f)) a.push_back(p);
      arr.push_back({{"formula", render(f)},
                     {"complexity", complexity(f)},
                     {"depth", depth(f)},
                     {"atoms", a},
                     {"modal_free", is_modal_free(f)}});
    } else {
      out.get() << render(f) << '\n';
    }
  }
  if (o.formulas.empty()) throw Error("--formula is required");
  if (o.json) out.get() << arr.dump(2) << '\n';
  return 0;
}

int cmd_check(const Options& o) {
  ModelFile file = load(o);
  Formula f = single_formula(o);
  std::vector<Formula> gamma = gamma_of(o);
  Output out(o.output);
  json j;
  j["formula"] = render(f);
  std::vector<std::string> labels;
  PointSet holds;

  if (kind_of(file) == Kind::kHigherOrder) {
    if (!o.logic.empty()) throw Error("higher-order files take no --logic");
    HigherOrderModel m = to_higher_order(file.nmodels.front());
    HigherOrderSemantics s(m);
    holds = entailment_extension(s, gamma, f);
    for (std::size_t i = 0; i < holds.size(); ++i) {
      auto names = s.leaf_names(i);
      std::string label;
      for (auto it = names.rbegin(); it != names.rend(); ++it) label += (label.empty() ? "" : ":") + *it;
      labels.push_back(label);
    }
    j["logic"] = "higher-order";
  } else {
    Logic logic = o.logic.empty() ? infer_logic(file) : parse_logic(o.logic);
    if (!o.as.empty()) {
      if (!o.logic.empty()) throw Error("--as and --logic are exclusive");
      if (kind_of(file) != Kind::kGeneral) throw Error("--as applies to general model files");
      if (o.as == "partial") logic = Logic::kPartial;
      else if (o.as == "homogeneous") logic = Logic::kHomogeneous;
      else throw Error("--as takes partial or homogeneous");
    }
    std::optional<AnyModel> model;
    if (logic == Logic::kProp || logic == Logic::kIk || logic == Logic::kMk) {
      const ModelBlock& b = single_block(file);
      if (logic == Logic::kProp) model.emplace(to_prop_model(b));
      else model.emplace(to_birelational(b));
    } else {
      GeneralModel g = to_general(file);
      if (logic == Logic::kPartial && file.reference) (void)PartialModel(g, file.reference);
      model.emplace(std::move(g));
    }
    Evaluation ev = evaluate_entailment(*model, logic, gamma, f);
    holds = ev.holds;
    for (const auto& [k, w] : ev.points) labels.push_back(k.empty() ? w : w + ":" + k);
    j["logic"] = to_string(logic);
  }
  print_verdicts(out.get(), o, labels, holds, j);
  if (o.json) out.get() << j.dump(2) << '\n';
  return 0;
}

json triples(const std::vector<WorldTriple>& ts) {
  json a = json::array();
  for (const auto& t : ts) a.push_back({t[0], t[1], t[2]});
  return a;
}

std::string show(const WorldTriple& t) { return "(" + t[0] + ", " + t[1] + ", " + t[2] + ")"; }

int cmd_frame_check(const Options& o) {
  ModelFile file = load(o);
  Output out(o.output);
  BirelationalStructure m = kind_of(file) == Kind::kSingle ? to_birelational(single_block(file))
                                                            : flatten(to_general(file)).model;
  json arr = json::array();
  for (const auto& rep : check_all_conditions(m)) {
    if (o.json) {
      arr.push_back({{"condition", to_string(rep.condition)},
                     {"holds", rep.holds},
                     {"unique", rep.unique},
                     {"violations", triples(rep.violations)},
                     {"nonunique", triples(rep.nonunique)}});
      continue;
    }
    auto& os = out.get();
    os << to_string(rep.condition) << ": " << (rep.holds ? "holds" : "fails");
    if (rep.holds) os << (rep.unique ? ", unique witnesses" : ", witnesses not unique");
    os << '\n';
    for (const auto& t : rep.violations) os << "  violation " << show(t) << '\n';
    for (const auto& t : rep.nonunique) os << "  nonunique " << show(t) << '\n';
  }
  if (o.json) out.get() << arr.dump(2) << '\n';
  return 0;
}

int cmd_classify(const Options& o) {
  ModelFile file = load(o);
  Output out(o.output);
  json j;
  if (kind_of(file) == Kind::kSingle) {
    BirelationalStructure m = to_birelational(single_block(file));
    ModelClass c = classify(m, o.any_witness ? Witnesses::kAny : Witnesses::kUnique);
    j["class"] = to_string(c);
    if (!o.json) out.get() << to_string(c) << '\n';
  } else if (kind_of(file) == Kind::kGeneral) {
    GeneralModel g = to_general(file);
    bool homogeneous = validate_homogeneous(g);
    std::optional<std::string> ref = file.reference;
    if (ref) (void)PartialModel(g, ref);
    else ref = validate_partial(g);
    std::string c = homogeneous ? "homogeneous" : (ref ? "partial" : "general");
    j["class"] = c;
    if (ref) j["reference"] = *ref;
    if (!o.json) out.get() << c << (ref && !homogeneous ? " (reference " + *ref + ")" : "") << '\n';
  } else {
    HigherOrderModel m = to_higher_order(file.nmodels.front());
    j["class"] = "level " + std::to_string(m.level());
    j["unirelational"] = is_unirelational(m);
    if (!o.json)
      out.get() << "level " << m.level() << (is_unirelational(m) ? ", unirelational" : ", multirelational") << '\n';
  }
  if (o.json) out.get() << j.dump(2) << '\n';
  return 0;
}

int cmd_flatten(const Options& o) {
  ModelFile file = load(o);
  if (kind_of(file) != Kind::kGeneral) throw ModelError("flatten needs a general model file");
  Flattened flat = flatten(to_general(file));
  Output out(o.output);
  write_birelational(out.get(), "flat", flat.model);
  return 0;
}

int cmd_equiv_report(const Options& o) {
  ModelFile file = load(o);
  if (kind_of(file) != Kind::kGeneral) throw ModelError("equiv-report needs a general model file");
  GeneralModel g = to_general(file);
  GeneralClass as;
  if (o.as.empty()) as = validate_homogeneous(g) ? GeneralClass::kHomogeneous : GeneralClass::kPartial;
  else if (o.as == "partial") as = GeneralClass::kPartial;
  else if (o.as == "homogeneous") as = GeneralClass::kHomogeneous;
  else throw Error("--as takes partial or homogeneous");
  if (o.formulas.empty()) throw Error("--formula is required");
  std::vector<Formula> fs;
  for (const auto& t : o.formulas) fs.push_back(parse(t));
  std::vector<std::vector<Formula>> gammas;
  if (!o.gamma.empty()) gammas.push_back(gamma_of(o));
  EquivalenceReport rep = equivalence_report(g, as, fs, gammas);
  Output out(o.output);
  std::string against = as == GeneralClass::kPartial ? "partial vs ik" : "homogeneous vs mk";
  if (o.json) {
    json d = json::array();
    for (const auto& x : rep.disagreements)
      d.push_back({{"submodel", x.submodel},
                   {"world", x.world},
                   {"formula", render(fs[x.formula_index])},
                   {"general", x.general_side},
                   {"flattened", x.flat_side}});
    out.get() << json{{"compared", against}, {"comparisons", rep.comparisons}, {"disagreements", d}}.dump(2)
              << '\n';
  } else {
    auto& os = out.get();
    os << "compared: " << against << "\ncomparisons: " << rep.comparisons
       << "\ndisagreements: " << rep.disagreements.size() << '\n';
    for (const auto& x : rep.disagreements)
      os << "  " << x.world << ":" << x.submodel << " " << render(fs[x.formula_index]) << " general="
         << x.general_side << " flattened=" << x.flat_side << '\n';
  }
  return 0;
}

SearchBounds bounds_of(const Options& o) {
  SearchBounds b;
  b.max_worlds = o.max_worlds;
  b.max_atoms = o.max_atoms;
  b.max_submodels = o.max_submodels;
  b.logic = o.logic.empty() ? Logic::kProp : parse_logic(o.logic);
  b.rooted = o.rooted;
  b.validate();
  return b;
}

int cmd_countermodel(const Options& o) {
  Formula f = single_formula(o);
  std::vector<Formula> gamma = gamma_of(o);
  SearchBounds b = bounds_of(o);
  SearchOutcome res = find_countermodel(f, gamma, b);
  if (res.found) {
    Evaluation ev = evaluate_entailment(*res.model, b.logic, gamma, f);
    std::size_t p = 0;
    while (p < ev.points.size() && ev.points[p] != *res.locus) ++p;
    if (p == ev.points.size() || !ev.refuted[p]) throw InternalBreach("countermodel does not re-fail on re-check");
  }
  Output out(o.output);
  std::string locus;
  if (res.locus) locus = res.locus->first.empty() ? res.locus->second : res.locus->second + ":" + res.locus->first;
  if (o.json) {
    json j{{"found", res.found}, {"models_examined", res.stats.models_examined},
           {"elapsed_seconds", res.stats.elapsed_seconds}};
    if (res.found) {
      j["locus"] = locus;
      j["model"] = *res.model_text;
    }
    out.get() << j.dump(2) << '\n';
  } else if (res.found) {
    out.get() << "countermodel found at " << locus << " after " << res.stats.models_examined << " models\n"
              << *res.model_text;
  } else {
    out.get() << "no countermodel found within bounds (" << res.stats.models_examined << " models examined)\n";
  }
  return 0;
}

int cmd_enumerate(const Options& o) {
  SearchBounds b = bounds_of(o);
  std::size_t count = 0;
  std::unique_ptr<Output> sink;
  if (!o.output.empty()) sink = std::make_unique<Output>(o.output);
  enumerate_models(b, [&](const AnyModel& m) {
    ++count;
    if (sink) sink->get() << "# model " << count << '\n' << to_text(m);
    return true;
  });
  if (o.json) std::cout << json{{"logic", to_string(b.logic)}, {"models", count}}.dump(2) << '\n';
  else std::cout << "models: " << count << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checker and countermodel search for intuitionistic modal logics"};
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* c) { c->add_option("--model", o.model_path, "Model file")->required(); };
  auto add_formula = [&](CLI::App* c) { c->add_option("--formula", o.formulas, "Formula (repeatable)"); };
  auto add_common = [&](CLI::App* c) {
    c->add_flag("--json", o.json, "Machine-readable output");
    c->add_option("-o", o.output, "Write output to a file");
  };
  auto add_bounds = [&](CLI::App* c) {
    c->add_option("--logic", o.logic, "prop, ik, mk, partial, homogeneous or classicalK");
    c->add_option("--max-worlds", o.max_worlds, "Worlds per frame (1-4)");
    c->add_option("--max-atoms", o.max_atoms, "Atoms");
    c->add_option("--max-submodels", o.max_submodels, "Submodels for general classes");
    c->add_flag("--rooted", o.rooted, "Only rooted frames (partial and homogeneous)");
  };

  auto* parse_cmd = app.add_subcommand("parse", "Parse and print formulas in canonical form");
  add_formula(parse_cmd);
  add_common(parse_cmd);

  auto* check = app.add_subcommand("check", "Evaluate a formula at every point of a model");
  add_model(check);
  add_formula(check);
  check->add_option("--gamma", o.gamma, "Hypotheses separated by ';'");
  check->add_option("--logic", o.logic, "prop, ik, mk, partial, homogeneous or classicalK");
  check->add_option("--at", o.at, "Single point: world[:submodel[:...]]");
  check->add_option("--as", o.as, "partial or homogeneous (general model files)");
  add_common(check);

  auto* frame_check = app.add_subcommand("frame-check", "Report the F1-F4 conditions");
  add_model(frame_check);
  add_common(frame_check);

  auto* classify_cmd = app.add_subcommand("classify", "Report the class of a model");
  add_model(classify_cmd);
  classify_cmd->add_flag("--any-witness", o.any_witness, "Do not require unique witnesses");
  add_common(classify_cmd);

  auto* flatten_cmd = app.add_subcommand("flatten", "Flatten a general model into a birelational one");
  add_model(flatten_cmd);
  add_common(flatten_cmd);

  auto* equiv = app.add_subcommand("equiv-report", "Compare a general model with its flattening");
  add_model(equiv);
  add_formula(equiv);
  equiv->add_option("--gamma", o.gamma, "Hypotheses separated by ';'");
  equiv->add_option("--as", o.as, "partial or homogeneous");
  add_common(equiv);

  auto* counter = app.add_subcommand("countermodel", "Search small models for a countermodel");
  add_formula(counter);
  counter->add_option("--gamma", o.gamma, "Hypotheses separated by ';'");
  add_bounds(counter);
  add_common(counter);

  auto* enumerate = app.add_subcommand("enumerate", "Count (and optionally write) all models within bounds");
  add_bounds(enumerate);
  add_common(enumerate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*parse_cmd) return cmd_parse(o);
    if (*check) return cmd_check(o);
    if (*frame_check) return cmd_frame_check(o);
    if (*classify_cmd) return cmd_classify(o);
    if (*flatten_cmd) return cmd_flatten(o);
    if (*equiv) return cmd_equiv_report(o);
    if (*counter) return cmd_countermodel(o);
    if (*enumerate) return cmd_enumerate(o);
  } catch (const InternalBreach& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
