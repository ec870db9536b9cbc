#pragma once

// n-ary Kripke models. A level-0 model is a set of worlds carrying named
// relations and an atom valuation; a level-n model is a set of named
// level-(n-1) models carrying named relations. Truth is two-valued and is
// computed per leaf address (one object selector per level, ending at a
// world) under each level's policy:
//
//  * the level-0 order relation drives -> (classical when absent);
//  * [] and <> are read at the outermost level on the address whose policy
//    names a modal relation. The local rule replaces that level's selector
//    by an accessible object and keeps the rest of the address (by name);
//    the monotone rule first moves the world up the level-0 order.
//  * an object is true iff it is true at every leaf below it.
//
// Only levels 0 and 1 correspond to known semantics (Kripke, birelational
// IK/MK, homogeneous and partial models); deeper levels use the same rules
// as an exploratory default.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hok/birelational.hpp"
#include "hok/error.hpp"
#include "hok/general.hpp"
#include "hok/kripke.hpp"
#include "hok/semantics.hpp"

namespace hok {

enum class ModalRule { kLocal, kMonotone };
enum class LiftRule { kAllPoints };

struct LevelPolicy {
  std::optional<std::string> order_relation;
  std::optional<std::string> modal_relation;
  ModalRule modal_rule = ModalRule::kLocal;
  LiftRule lift_rule = LiftRule::kAllPoints;
};

class HigherOrderModel {
 public:
  using Edge = std::pair<std::string, std::string>;
  using Relations = std::map<std::string, std::vector<Edge>>;

  // The order relation named by the policy is closed reflexively and
  // transitively; other relations are kept as given.
  static HigherOrderModel level0(std::vector<std::string> worlds, const Relations& relations,
                                 const Valuation& val, LevelPolicy policy) {
    HigherOrderModel m;
    m.level_ = 0;
    m.policy_ = std::move(policy);
    m.names_ = std::move(worlds);
    m.check_names();
    m.load_relations(relations);
    m.val_.assign(m.names_.size(), {});
    for (const auto& [w, ps] : val) {
      std::size_t i = m.index(w);
      for (const auto& p : ps)
        if (!is_atom_name(p)) throw ModelError("invalid atom name '" + p + "'");
      m.val_[i] = ps;
    }
    if (m.policy_.order_relation) {
      auto& order = m.relations_.at(*m.policy_.order_relation);
      for (std::size_t i = 0; i < order.size(); ++i) order[i].set(i);
      for (std::size_t k = 0; k < order.size(); ++k)
        for (std::size_t i = 0; i < order.size(); ++i)
          if (order[i][k]) order[i] |= order[k];
      for (std::size_t i = 0; i < order.size(); ++i)
        for (auto j = order[i].find_first(); j != PointSet::npos; j = order[i].find_next(j))
          for (const auto& p : m.val_[i])
            if (!m.val_[j].contains(p)) throw HeredityError(m.names_[i], m.names_[j], p);
    }
    return m;
  }

  static HigherOrderModel level_n(std::vector<std::pair<std::string, HigherOrderModel>> objects,
                                  const Relations& relations, LevelPolicy policy) {
    HigherOrderModel m;
    if (objects.empty()) throw ModelError("a higher-order model needs at least one object");
    m.level_ = objects.front().second.level() + 1;
    m.policy_ = std::move(policy);
    for (auto& [name, obj] : objects) {
      if (obj.level() + 1 != m.level_)
        throw ModelError("object '" + name + "' has level " + std::to_string(obj.level()) + ", expected " +
                         std::to_string(m.level_ - 1));
      m.names_.push_back(name);
      m.objects_.push_back(std::move(obj));
    }
    m.check_names();
    if (m.policy_.order_relation) throw ModelError("order relations belong to level 0");
    m.load_relations(relations);
    return m;
  }

  std::size_t level() const { return level_; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const LevelPolicy& policy() const { return policy_; }

  std::optional<std::size_t> find(std::string_view n) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == n) return i;
    return std::nullopt;
  }
  std::size_t index(std::string_view n) const {
    if (auto i = find(n)) return *i;
    throw UnknownName("unknown " + std::string(level_ == 0 ? "world" : "object") + " '" + std::string(n) + "'");
  }

  const HigherOrderModel& object(std::size_t i) const { return objects_.at(i); }
  const std::set<std::string>& val(std::size_t w) const { return val_.at(w); }

  std::vector<std::string> relation_names() const {
    std::vector<std::string> out;
    for (const auto& [n, _] : relations_) out.push_back(n);
    return out;
  }
  const std::vector<PointSet>& relation(const std::string& n) const {
    auto it = relations_.find(n);
    if (it == relations_.end()) throw UnknownName("unknown relation '" + n + "'");
    return it->second;
  }
  std::vector<Edge> relation_edges(const std::string& n) const {
    std::vector<Edge> out;
    const auto& rel = relation(n);
    for (std::size_t i = 0; i < rel.size(); ++i)
      for (auto j = rel[i].find_first(); j != PointSet::npos; j = rel[i].find_next(j))
        out.emplace_back(names_[i], names_[j]);
    return out;
  }

 private:
  HigherOrderModel() = default;

  void check_names() const {
    if (names_.empty()) throw ModelError("a model needs at least one object");
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (!is_identifier(n)) throw ModelError("invalid name '" + n + "'");
      if (!seen.insert(n).second) throw ModelError("duplicate name '" + n + "'");
    }
  }

  void load_relations(const Relations& relations) {
    if (relations.empty()) throw ModelError("a model needs a non-empty set of relations");
    for (const auto& [rel, edges] : relations) {
      auto& m = relations_[rel];
      m.assign(names_.size(), PointSet(names_.size()));
      for (const auto& [a, b] : edges) {
        auto i = find(a);
        auto j = find(b);
        if (!i || !j) throw ModelError("relation " + rel + " has dangling endpoint '" + (i ? b : a) + "'");
        m[*i].set(*j);
      }
    }
    for (const auto& named : {policy_.order_relation, policy_.modal_relation})
      if (named && !relations_.contains(*named))
        throw ModelError("policy names undeclared relation '" + *named + "'");
  }

  std::size_t level_ = 0;
  std::vector<std::string> names_;
  std::vector<HigherOrderModel> objects_;
  std::map<std::string, std::vector<PointSet>> relations_;
  std::vector<std::set<std::string>> val_;
  LevelPolicy policy_;
};

inline bool is_unirelational(const HigherOrderModel& m) {
  if (m.relation_names().size() != 1) return false;
  for (std::size_t i = 0; m.level() > 0 && i < m.size(); ++i)
    if (!is_unirelational(m.object(i))) return false;
  return true;
}

// Relation sets are finite by construction.
inline bool is_finitely_relational(const HigherOrderModel& m) {
  for (std::size_t i = 0; m.level() > 0 && i < m.size(); ++i)
    if (!is_finitely_relational(m.object(i))) return false;
  return true;
}

// Truth sets over the leaf addresses of a higher-order model.
class HigherOrderSemantics : public OrderedPointAlgebra {
 public:
  static constexpr bool kModal = true;
  using Address = std::vector<std::size_t>;

  explicit HigherOrderSemantics(const HigherOrderModel& m) : model_(&m) {
    Address prefix;
    collect(m, prefix);
    for (std::size_t i = 0; i < leaves_.size(); ++i) leaf_index_.emplace(leaves_[i], i);
    const std::size_t n = leaves_.size();
    successors_.assign(n, PointSet(n));
    box_reach_.assign(n, PointSet(n));
    diamond_reach_.assign(n, PointSet(n));
    has_modal_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) build_leaf(i);
  }

  std::size_t leaf_count() const { return leaves_.size(); }
  const Address& leaf(std::size_t i) const { return leaves_[i]; }

  // Top-down names: object selectors, then the world.
  std::vector<std::string> leaf_names(std::size_t i) const {
    std::vector<std::string> out;
    const HigherOrderModel* cur = model_;
    for (std::size_t sel : leaves_[i]) {
      out.push_back(cur->name(sel));
      if (cur->level() > 0) cur = &cur->object(sel);
    }
    return out;
  }

  std::size_t leaf_index(const std::vector<std::string>& path) const {
    if (path.size() != model_->level() + 1)
      throw UnknownName("path needs " + std::to_string(model_->level() + 1) + " selectors");
    if (auto a = resolve(path, 0, *model_)) return leaf_index_.at(*a);
    throw UnknownName("path does not address a world");
  }

  // Leaves below an object prefix (shorter than a full path).
  PointSet leaves_under(const std::vector<std::string>& prefix) const {
    if (prefix.size() > model_->level()) throw UnknownName("object prefix is too long");
    const HigherOrderModel* cur = model_;
    Address a;
    for (const auto& n : prefix) {
      std::size_t i = cur->index(n);
      a.push_back(i);
      cur = &cur->object(i);
    }
    PointSet out(leaves_.size());
    for (std::size_t i = 0; i < leaves_.size(); ++i)
      if (std::equal(a.begin(), a.end(), leaves_[i].begin())) out.set(i);
    return out;
  }

  PointSet atom(const std::string& p) const {
    PointSet out(leaves_.size());
    for (std::size_t i = 0; i < leaves_.size(); ++i)
      if (leaf_model(i).val(leaves_[i].back()).contains(p)) out.set(i);
    return out;
  }
  PointSet box(const PointSet& a) const {
    require_modal();
    return box_over(box_reach_, a);
  }
  PointSet diamond(const PointSet& a) const {
    require_modal();
    return diamond_over(diamond_reach_, a);
  }

 private:
  void collect(const HigherOrderModel& m, Address& prefix) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      prefix.push_back(i);
      if (m.level() == 0) leaves_.push_back(prefix);
      else collect(m.object(i), prefix);
      prefix.pop_back();
    }
  }

  // Address of `names[from..]` inside m, if m declares them.
  static std::optional<Address> resolve(const std::vector<std::string>& names, std::size_t from,
                                        const HigherOrderModel& m) {
    Address out;
    const HigherOrderModel* cur = &m;
    for (std::size_t i = from; i < names.size(); ++i) {
      auto j = cur->find(names[i]);
      if (!j) return std::nullopt;
      out.push_back(*j);
      if (cur->level() > 0) cur = &cur->object(*j);
      else if (i + 1 != names.size()) return std::nullopt;
    }
    return out;
  }

  // Models along the address: chain[0] is the root, chain.back() the level-0 model.
  std::vector<const HigherOrderModel*> chain(const Address& a) const {
    std::vector<const HigherOrderModel*> out{model_};
    for (std::size_t d = 0; d + 1 < a.size(); ++d) out.push_back(&out.back()->object(a[d]));
    return out;
  }

  const HigherOrderModel& leaf_model(std::size_t i) const { return *chain(leaves_[i]).back(); }

  void build_leaf(std::size_t i) {
    const Address& a = leaves_[i];
    auto models = chain(a);
    const HigherOrderModel& base = *models.back();
    const std::size_t w = a.back();

    // Order successors: same prefix, world moved up the level-0 order.
    std::vector<std::size_t> ups;
    if (base.policy().order_relation) {
      const PointSet& up = base.relation(*base.policy().order_relation)[w];
      for (auto v = up.find_first(); v != PointSet::npos; v = up.find_next(v)) ups.push_back(v);
    } else {
      ups.push_back(w);
    }
    for (std::size_t v : ups) {
      Address b = a;
      b.back() = v;
      successors_[i].set(leaf_index_.at(b));
    }

    // Outermost model on the address with a modal relation.
    for (std::size_t d = 0; d < models.size(); ++d) {
      const HigherOrderModel& owner = *models[d];
      if (!owner.policy().modal_relation) continue;
      has_modal_[i] = true;
      const auto& rel = owner.relation(*owner.policy().modal_relation);
      auto names = leaf_names(i);
      auto reach_from = [&](const std::vector<std::string>& start, PointSet& into) {
        std::size_t sel = owner.index(start[d]);
        for (auto j = rel[sel].find_first(); j != PointSet::npos; j = rel[sel].find_next(j)) {
          std::vector<std::string> moved = start;
          moved[d] = owner.name(j);
          std::optional<Address> suffix;
          if (owner.level() == 0) suffix = Address{};
          else suffix = resolve(moved, d + 1, owner.object(j));
          if (!suffix) continue;
          Address b(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(d));
          b.push_back(j);
          b.insert(b.end(), suffix->begin(), suffix->end());
          into.set(leaf_index_.at(b));
        }
      };
      reach_from(names, diamond_reach_[i]);
      if (owner.policy().modal_rule == ModalRule::kLocal) {
        box_reach_[i] = diamond_reach_[i];
      } else {
        for (std::size_t v : ups) {
          auto moved = names;
          moved.back() = base.name(v);
          reach_from(moved, box_reach_[i]);
        }
      }
      break;
    }
  }

  void require_modal() const {
    for (bool b : has_modal_)
      if (!b) throw SemanticsError("policy gap: no level interprets [] and <> at every address");
  }

  const HigherOrderModel* model_;
  std::vector<Address> leaves_;
  std::map<Address, std::size_t> leaf_index_;
  std::vector<PointSet> box_reach_;
  std::vector<PointSet> diamond_reach_;
  std::vector<bool> has_modal_;
};

// Truth of f at the world addressed by `path` (object selectors top-down,
// ending at a world).
inline bool evaluate(const HigherOrderModel& m, const std::vector<std::string>& path, const Formula& f) {
  HigherOrderSemantics s(m);
  std::size_t i = s.leaf_index(path);
  return extension(s, f)[i];
}

// Truth of f at an object: every leaf below the prefix forces f. The empty
// prefix is the whole model.
inline bool evaluate_object(const HigherOrderModel& m, const std::vector<std::string>& prefix, const Formula& f) {
  HigherOrderSemantics s(m);
  PointSet under = s.leaves_under(prefix);
  return under.is_subset_of(extension(s, f));
}

inline HigherOrderModel wrap(const PropModel& m) {
  HigherOrderModel::Relations rel{{"le", m.frame().strict_pairs()}};
  return HigherOrderModel::level0(m.frame().worlds(), rel, m.valuation(), LevelPolicy{"le", {}, {}, {}});
}

// kMonotone reproduces IK forcing, kLocal MK forcing.
inline HigherOrderModel wrap(const BirelationalStructure& m, ModalRule rule) {
  HigherOrderModel::Relations rel{{"le", m.frame().strict_pairs()}, {"r", m.r_edges()}};
  return HigherOrderModel::level0(m.frame().worlds(), rel, m.base().valuation(),
                                  LevelPolicy{"le", "r", rule, LiftRule::kAllPoints});
}

// Level-1 model over the submodels of h, with > as its single relation read
// by the local (MK) rule.
inline HigherOrderModel lift(const HomogeneousModel& h) {
  const GeneralModel& g = h.general();
  std::vector<std::pair<std::string, HigherOrderModel>> objects;
  for (std::size_t k = 0; k < g.size(); ++k) objects.emplace_back(g.id(k), wrap(g.submodel(k)));
  HigherOrderModel::Relations rel{{"succ", g.succ_edges()}};
  return HigherOrderModel::level_n(std::move(objects), rel,
                                   LevelPolicy{{}, "succ", ModalRule::kLocal, LiftRule::kAllPoints});
}

}  // namespace hok
