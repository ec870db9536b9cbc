#pragma once

// Propositional (0-ary) Kripke frames and models with the intuitionistic
// forcing relation, plus the frame-level predicates used by the
// multi-model semantics: partial copies and upward restriction.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hok/error.hpp"
#include "hok/formula.hpp"
#include "hok/semantics.hpp"

namespace hok {

// World and model names: one token of letters, digits, `_`, `'`, `@` or `.`.
inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '\'' || c == '@' || c == '.';
    if (!ok) return false;
  }
  return true;
}

// Worlds are kept in lexicographic order; `le` is stored reflexively and
// transitively closed as one successor set per world.
class Frame {
 public:
  using Edge = std::pair<std::string, std::string>;

  // le = reflexive-transitive closure of the generators.
  static Frame build(std::vector<std::string> worlds, std::span<const Edge> le_generators = {}) {
    Frame f(std::move(worlds));
    for (const auto& [a, b] : le_generators) f.up_[f.index(a)].set(f.index(b));
    f.close();
    return f;
  }

  // Successor sets over the given world order; must already be a preorder.
  static Frame from_successors(std::vector<std::string> worlds, std::vector<PointSet> up) {
    std::vector<std::string> sorted = worlds;
    Frame f(std::move(sorted));
    for (std::size_t i = 0; i < worlds.size(); ++i) {
      std::size_t fi = f.index(worlds[i]);
      for (auto j = up[i].find_first(); j != PointSet::npos; j = up[i].find_next(j))
        f.up_[fi].set(f.index(worlds[j]));
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f.up_[i][i]) throw ModelError("order is not reflexive at " + f.worlds_[i]);
      for (auto j = f.up_[i].find_first(); j != PointSet::npos; j = f.up_[i].find_next(j))
        if (!f.up_[j].is_subset_of(f.up_[i])) throw ModelError("order is not transitive");
    }
    return f;
  }

  std::size_t size() const { return worlds_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::string& name(std::size_t i) const { return worlds_[i]; }

  std::optional<std::size_t> find(std::string_view w) const {
    auto it = std::lower_bound(worlds_.begin(), worlds_.end(), w);
    if (it == worlds_.end() || *it != w) return std::nullopt;
    return static_cast<std::size_t>(it - worlds_.begin());
  }
  bool contains(std::string_view w) const { return find(w).has_value(); }
  std::size_t index(std::string_view w) const {
    if (auto i = find(w)) return *i;
    throw UnknownName("unknown world '" + std::string(w) + "'");
  }

  bool le(std::size_t a, std::size_t b) const { return up_[a][b]; }
  bool le(std::string_view a, std::string_view b) const { return le(index(a), index(b)); }
  const PointSet& up(std::size_t a) const { return up_[a]; }
  const std::vector<PointSet>& successors() const { return up_; }

  // Number of ordered pairs in the closed relation.
  std::size_t pair_count() const {
    std::size_t n = 0;
    for (const auto& s : up_) n += s.count();
    return n;
  }

  // Non-reflexive pairs of the closed relation, in world order.
  std::vector<Edge> strict_pairs() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (auto j = up_[i].find_first(); j != PointSet::npos; j = up_[i].find_next(j))
        if (j != i) out.emplace_back(worlds_[i], worlds_[j]);
    return out;
  }

  // A world below every world, if any.
  std::optional<std::size_t> root() const {
    for (std::size_t i = 0; i < size(); ++i)
      if (up_[i].all()) return i;
    return std::nullopt;
  }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.worlds_ == b.worlds_ && a.up_ == b.up_;
  }

 private:
  explicit Frame(std::vector<std::string> worlds) : worlds_(std::move(worlds)) {
    if (worlds_.empty()) throw ModelError("a frame needs at least one world");
    for (const auto& w : worlds_)
      if (!is_identifier(w)) throw ModelError("invalid world name '" + w + "'");
    std::sort(worlds_.begin(), worlds_.end());
    if (auto dup = std::adjacent_find(worlds_.begin(), worlds_.end()); dup != worlds_.end())
      throw ModelError("duplicate world '" + *dup + "'");
    up_.assign(worlds_.size(), PointSet(worlds_.size()));
  }

  void close() {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) up_[i].set(i);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (up_[i][k]) up_[i] |= up_[k];
  }

  std::vector<std::string> worlds_;
  std::vector<PointSet> up_;
};

using Valuation = std::map<std::string, std::set<std::string>>;

// <W, <=, v> with v monotone along <=.
class PropModel {
 public:
  // Worlds missing from `val` get the empty set.
  PropModel(Frame frame, const Valuation& val) : frame_(std::move(frame)), val_(frame_.size()) {
    for (const auto& [w, ps] : val) {
      std::size_t i = frame_.index(w);
      for (const auto& p : ps)
        if (!is_atom_name(p)) throw ModelError("invalid atom name '" + p + "'");
      val_[i] = ps;
    }
    check_heredity();
  }

  const Frame& frame() const { return frame_; }
  const std::set<std::string>& val(std::size_t w) const { return val_[w]; }
  const std::set<std::string>& val(std::string_view w) const { return val_[frame_.index(w)]; }

  Valuation valuation() const {
    Valuation out;
    for (std::size_t i = 0; i < frame_.size(); ++i) out[frame_.name(i)] = val_[i];
    return out;
  }

  PointSet atom_set(const std::string& p) const {
    PointSet s(frame_.size());
    for (std::size_t i = 0; i < val_.size(); ++i)
      if (val_[i].contains(p)) s.set(i);
    return s;
  }

  std::set<std::string> atoms() const {
    std::set<std::string> out;
    for (const auto& s : val_) out.insert(s.begin(), s.end());
    return out;
  }

  friend bool operator==(const PropModel& a, const PropModel& b) {
    return a.frame_ == b.frame_ && a.val_ == b.val_;
  }

 private:
  void check_heredity() const {
    for (std::size_t i = 0; i < frame_.size(); ++i)
      for (std::size_t j = 0; j < frame_.size(); ++j) {
        if (i == j || !frame_.le(i, j)) continue;
        for (const auto& p : val_[i])
          if (!val_[j].contains(p)) throw HeredityError(frame_.name(i), frame_.name(j), p);
      }
  }

  Frame frame_;
  std::vector<std::set<std::string>> val_;
};

// Intuitionistic forcing on a propositional model. Modal formulas have no
// clause here and are rejected.
class PropSemantics : public OrderedPointAlgebra {
 public:
  static constexpr bool kModal = false;

  explicit PropSemantics(const PropModel& m) : OrderedPointAlgebra(m.frame().successors()), model_(&m) {}

  PointSet atom(const std::string& p) const { return model_->atom_set(p); }
  PointSet box(const PointSet&) const { throw SemanticsError("no clause for [] in propositional semantics"); }
  PointSet diamond(const PointSet&) const {
    throw SemanticsError("no clause for <> in propositional semantics");
  }

 private:
  const PropModel* model_;
};

inline bool forces(const PropModel& m, std::string_view w, const Formula& f) {
  std::size_t i = m.frame().index(w);
  return extension(PropSemantics(m), f)[i];
}

inline bool entails(const PropModel& m, std::string_view w, std::span<const Formula> gamma, const Formula& f) {
  std::size_t i = m.frame().index(w);
  return entailment_extension(PropSemantics(m), gamma, f)[i];
}

inline bool model_valid(const PropModel& m, std::span<const Formula> gamma, const Formula& f) {
  return entailment_extension(PropSemantics(m), gamma, f).all();
}

// Candidate is at least a partial copy of the reference: its worlds are
// reference worlds, closed upward under the reference order, and ordered
// exactly as in the reference.
inline bool is_partial_copy(const Frame& candidate, const Frame& reference) {
  std::vector<std::size_t> in_ref;
  for (const auto& w : candidate.worlds()) {
    auto i = reference.find(w);
    if (!i) return false;
    in_ref.push_back(*i);
  }
  for (std::size_t a = 0; a < candidate.size(); ++a) {
    const PointSet& up = reference.up(in_ref[a]);
    for (auto j = up.find_first(); j != PointSet::npos; j = up.find_next(j))
      if (!candidate.contains(reference.name(j))) return false;
    for (std::size_t b = 0; b < candidate.size(); ++b)
      if (reference.le(in_ref[a], in_ref[b]) != candidate.le(a, b)) return false;
  }
  return true;
}

// The worlds above j, with the order restricted to them.
inline Frame upward_restrict(const Frame& frame, std::string_view j) {
  std::size_t root = frame.index(j);
  const PointSet& keep = frame.up(root);
  std::vector<std::string> worlds;
  std::vector<std::size_t> old;
  for (auto i = keep.find_first(); i != PointSet::npos; i = keep.find_next(i)) {
    worlds.push_back(frame.name(i));
    old.push_back(i);
  }
  std::vector<PointSet> up(old.size(), PointSet(old.size()));
  for (std::size_t a = 0; a < old.size(); ++a)
    for (std::size_t b = 0; b < old.size(); ++b)
      if (frame.le(old[a], old[b])) up[a].set(b);
  return Frame::from_successors(std::move(worlds), std::move(up));
}

// The submodel living on upward_restrict(frame, j).
inline PropModel upward_restrict(const PropModel& m, std::string_view j) {
  Frame f = upward_restrict(m.frame(), j);
  Valuation val;
  for (const auto& w : f.worlds()) val[w] = m.val(w);
  return PropModel(std::move(f), val);
}

}  // namespace hok
