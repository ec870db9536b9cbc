#pragma once

// Line-oriented model files.
//
//   model <Id>                 one propositional / birelational model
//     worlds <id>+
//     le <a> <b>               order generators, closed on load
//     r <a> <b>                modal relation, kept as given
//     val <w> : <atom>*
//   end
//   succ <K1> <K2>             accessibility between model blocks
//   reference <K>
//
//   nmodel <Id> level <n>      higher-order model; nests model/nmodel blocks
//     rel <name> [<a> <b>]
//     modal <name> [local|monotone]
//   end
//
// `#` starts a comment; blank lines are ignored.

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hok/birelational.hpp"
#include "hok/error.hpp"
#include "hok/general.hpp"
#include "hok/higher_order.hpp"
#include "hok/kripke.hpp"

namespace hok {

struct ModelBlock {
  std::string id;
  std::size_t line = 0;
  std::vector<std::string> worlds;
  std::vector<Frame::Edge> le;
  std::vector<Frame::Edge> r;
  bool has_r = false;
  Valuation val;
};

struct NModelBlock {
  std::string id;
  std::size_t line = 0;
  std::size_t level = 0;
  std::vector<ModelBlock> models;
  std::vector<NModelBlock> nmodels;
  std::map<std::string, std::vector<Frame::Edge>> relations;
  std::optional<std::string> modal;
  ModalRule modal_rule = ModalRule::kLocal;
};

struct ModelFile {
  std::vector<ModelBlock> models;
  std::vector<Frame::Edge> succ;
  std::optional<std::string> reference;
  std::vector<NModelBlock> nmodels;
};

namespace detail {

struct Word {
  std::string text;
  std::size_t column;
};

inline std::vector<Word> split_line(std::string_view line) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    out.push_back({std::string(line.substr(i, j - i)), i + 1});
    i = j;
  }
  return out;
}

class ModelFileParser {
 public:
  explicit ModelFileParser(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines_.push_back(split_line(text.substr(start, end - start)));
      start = end + 1;
    }
  }

  ModelFile run() {
    ModelFile out;
    while (next_nonblank()) {
      const auto& w = cur();
      const std::string& kw = w[0].text;
      if (kw == "model") {
        out.models.push_back(model_block());
      } else if (kw == "nmodel") {
        out.nmodels.push_back(nmodel_block());
      } else if (kw == "succ") {
        expect_args(3);
        out.succ.emplace_back(ident(1), ident(2));
        ++at_;
      } else if (kw == "reference") {
        expect_args(2);
        if (out.reference) fail("duplicate reference line", 0);
        out.reference = ident(1);
        ++at_;
      } else {
        fail("unexpected '" + kw + "' outside a model block", 0);
      }
    }
    if (out.models.empty() && out.nmodels.empty()) throw SyntaxError("no model block", 1, lines_.size());
    return out;
  }

 private:
  const std::vector<Word>& cur() const { return lines_[at_]; }
  std::size_t line_no() const { return at_ + 1; }

  [[noreturn]] void fail(const std::string& msg, std::size_t word) const {
    std::size_t col = at_ < lines_.size() && word < cur().size() ? cur()[word].column : 1;
    throw SyntaxError(msg, col, std::min(line_no(), lines_.size()));
  }

  bool next_nonblank() {
    while (at_ < lines_.size() && lines_[at_].empty()) ++at_;
    return at_ < lines_.size();
  }

  void expect_args(std::size_t n) const {
    if (cur().size() != n)
      fail("'" + cur()[0].text + "' expects " + std::to_string(n - 1) + " argument(s)", cur().size() > n ? n : 0);
  }

  std::string ident(std::size_t i) const {
    const std::string& s = cur()[i].text;
    if (!is_identifier(s)) fail("invalid name '" + s + "'", i);
    return s;
  }

  ModelBlock model_block() {
    ModelBlock b;
    expect_args(2);
    b.id = ident(1);
    b.line = line_no();
    ++at_;
    bool have_worlds = false;
    while (true) {
      if (!next_nonblank()) throw SyntaxError("model " + b.id + " is missing 'end'", 1, lines_.size());
      const std::string& kw = cur()[0].text;
      if (kw == "end") {
        expect_args(1);
        ++at_;
        break;
      }
      if (kw == "worlds") {
        if (have_worlds) fail("duplicate worlds line", 0);
        if (cur().size() < 2) fail("worlds needs at least one world", 0);
        for (std::size_t i = 1; i < cur().size(); ++i) b.worlds.push_back(ident(i));
        have_worlds = true;
      } else if (kw == "le" || kw == "r") {
        expect_args(3);
        (kw == "le" ? b.le : b.r).emplace_back(ident(1), ident(2));
        if (kw == "r") b.has_r = true;
      } else if (kw == "val") {
        if (cur().size() < 3 || cur()[2].text != ":") fail("expected 'val <world> : <atom>*'", 0);
        auto& atoms = b.val[ident(1)];
        for (std::size_t i = 3; i < cur().size(); ++i) {
          if (!is_atom_name(cur()[i].text)) fail("invalid atom '" + cur()[i].text + "'", i);
          atoms.insert(cur()[i].text);
        }
      } else {
        fail("unexpected '" + kw + "' in model block", 0);
      }
      ++at_;
    }
    if (!have_worlds) throw SyntaxError("model " + b.id + " has no worlds line", 1, b.line);
    return b;
  }

  NModelBlock nmodel_block() {
    NModelBlock b;
    if (cur().size() != 4 || cur()[2].text != "level") fail("expected 'nmodel <Id> level <n>'", 0);
    b.id = ident(1);
    b.line = line_no();
    try {
      b.level = std::stoul(cur()[3].text);
    } catch (const std::exception&) {
      fail("invalid level '" + cur()[3].text + "'", 3);
    }
    if (b.level == 0) fail("nmodel level must be at least 1", 3);
    ++at_;
    while (true) {
      if (!next_nonblank()) throw SyntaxError("nmodel " + b.id + " is missing 'end'", 1, lines_.size());
      const std::string& kw = cur()[0].text;
      if (kw == "end") {
        expect_args(1);
        ++at_;
        break;
      }
      if (kw == "model") {
        b.models.push_back(model_block());
        continue;
      }
      if (kw == "nmodel") {
        b.nmodels.push_back(nmodel_block());
        continue;
      }
      if (kw == "rel") {
        if (cur().size() != 2 && cur().size() != 4) fail("expected 'rel <name> [<a> <b>]'", 0);
        auto& edges = b.relations[ident(1)];
        if (cur().size() == 4) edges.emplace_back(ident(2), ident(3));
      } else if (kw == "modal") {
        if (cur().size() != 2 && cur().size() != 3) fail("expected 'modal <name> [local|monotone]'", 0);
        b.modal = ident(1);
        if (cur().size() == 3) {
          if (cur()[2].text == "local") b.modal_rule = ModalRule::kLocal;
          else if (cur()[2].text == "monotone") b.modal_rule = ModalRule::kMonotone;
          else fail("unknown modal rule '" + cur()[2].text + "'", 2);
        }
      } else {
        fail("unexpected '" + kw + "' in nmodel block", 0);
      }
      ++at_;
    }
    return b;
  }

  std::vector<std::vector<Word>> lines_;
  std::size_t at_ = 0;
};

}  // namespace detail

inline ModelFile parse_model_file(std::string_view text) { return detail::ModelFileParser(text).run(); }

inline PropModel to_prop_model(const ModelBlock& b) {
  if (b.has_r) throw ModelError("model " + b.id + " has r edges; a propositional model has none");
  return PropModel(Frame::build(b.worlds, b.le), b.val);
}

inline BirelationalStructure to_birelational(const ModelBlock& b) {
  return BirelationalStructure(PropModel(Frame::build(b.worlds, b.le), b.val), b.r);
}

inline GeneralModel to_general(const ModelFile& f) {
  std::map<std::string, PropModel> subs;
  for (const auto& b : f.models)
    if (!subs.emplace(b.id, to_prop_model(b)).second) throw ModelError("duplicate model '" + b.id + "'");
  if (subs.empty()) throw ModelError("no model blocks");
  return GeneralModel(std::move(subs), f.succ);
}

inline HigherOrderModel to_level0(const ModelBlock& b) {
  HigherOrderModel::Relations rel{{"le", b.le}};
  LevelPolicy pol{"le", {}, ModalRule::kLocal, LiftRule::kAllPoints};
  if (b.has_r) {
    rel["r"] = b.r;
    pol.modal_relation = "r";
    pol.modal_rule = ModalRule::kMonotone;
  }
  return HigherOrderModel::level0(b.worlds, rel, b.val, pol);
}

inline HigherOrderModel to_higher_order(const NModelBlock& b) {
  std::vector<std::pair<std::string, HigherOrderModel>> objects;
  for (const auto& m : b.models) objects.emplace_back(m.id, to_level0(m));
  for (const auto& n : b.nmodels) objects.emplace_back(n.id, to_higher_order(n));
  if (objects.empty()) throw ModelError("nmodel " + b.id + " has no objects");
  LevelPolicy pol;
  pol.modal_relation = b.modal;
  pol.modal_rule = b.modal_rule;
  if (!pol.modal_relation && b.relations.size() == 1) pol.modal_relation = b.relations.begin()->first;
  HigherOrderModel m = HigherOrderModel::level_n(std::move(objects), b.relations, pol);
  if (m.level() != b.level)
    throw ModelError("nmodel " + b.id + " declares level " + std::to_string(b.level) + " but its objects have level " +
                     std::to_string(m.level() - 1));
  return m;
}

// ---------------------------------------------------------------------------
// Writers. Order pairs are written as the full non-reflexive closed
// relation, so reading the output reproduces the frame exactly.

inline void write_model_block(std::ostream& os, std::string_view id, const PropModel& m,
                              const std::vector<Frame::Edge>* r = nullptr) {
  const Frame& f = m.frame();
  os << "model " << id << "\nworlds";
  for (const auto& w : f.worlds()) os << ' ' << w;
  os << '\n';
  for (const auto& [a, b] : f.strict_pairs()) os << "le " << a << ' ' << b << '\n';
  if (r)
    for (const auto& [a, b] : *r) os << "r " << a << ' ' << b << '\n';
  for (std::size_t w = 0; w < f.size(); ++w) {
    os << "val " << f.name(w) << " :";
    for (const auto& p : m.val(w)) os << ' ' << p;
    os << '\n';
  }
  os << "end\n";
}

inline void write_birelational(std::ostream& os, std::string_view id, const BirelationalStructure& m) {
  auto edges = m.r_edges();
  write_model_block(os, id, m.base(), &edges);
}

inline void write_general(std::ostream& os, const GeneralModel& g,
                          const std::optional<std::string>& reference = std::nullopt) {
  for (std::size_t k = 0; k < g.size(); ++k) write_model_block(os, g.id(k), g.submodel(k));
  for (const auto& [a, b] : g.succ_edges()) os << "succ " << a << ' ' << b << '\n';
  if (reference) os << "reference " << *reference << '\n';
}

inline void write_higher_order(std::ostream& os, std::string_view id, const HigherOrderModel& m) {
  if (m.level() == 0) throw ModelError("level-0 models are written as model blocks");
  os << "nmodel " << id << " level " << m.level() << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    const HigherOrderModel& o = m.object(i);
    if (o.level() > 0) {
      write_higher_order(os, m.name(i), o);
      continue;
    }
    os << "model " << m.name(i) << "\nworlds";
    for (const auto& w : o.names()) os << ' ' << w;
    os << '\n';
    for (const auto& rel : o.relation_names()) {
      const char* kw = rel == "le" ? "le" : (rel == "r" ? "r" : nullptr);
      if (!kw) throw ModelError("level-0 relation '" + rel + "' has no model-block syntax");
      for (const auto& [a, b] : o.relation_edges(rel))
        if (a != b || rel != "le") os << kw << ' ' << a << ' ' << b << '\n';
    }
    for (std::size_t w = 0; w < o.size(); ++w) {
      os << "val " << o.name(w) << " :";
      for (const auto& p : o.val(w)) os << ' ' << p;
      os << '\n';
    }
    os << "end\n";
  }
  for (const auto& rel : m.relation_names()) {
    auto edges = m.relation_edges(rel);
    if (edges.empty()) os << "rel " << rel << '\n';
    for (const auto& [a, b] : edges) os << "rel " << rel << ' ' << a << ' ' << b << '\n';
  }
  if (m.policy().modal_relation)
    os << "modal " << *m.policy().modal_relation << ' '
       << (m.policy().modal_rule == ModalRule::kLocal ? "local" : "monotone") << '\n';
  os << "end\n";
}

inline std::string to_text(const PropModel& m, std::string_view id = "M") {
  std::ostringstream os;
  write_model_block(os, id, m);
  return os.str();
}

inline std::string to_text(const BirelationalStructure& m, std::string_view id = "M") {
  std::ostringstream os;
  write_birelational(os, id, m);
  return os.str();
}

inline std::string to_text(const GeneralModel& g) {
  std::ostringstream os;
  write_general(os, g);
  return os.str();
}

}  // namespace hok
