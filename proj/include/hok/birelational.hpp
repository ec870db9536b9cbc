#pragma once

// Birelational structures <W, <=, R, v>, the interaction conditions F1-F4
// between <= and R, the model classes they define, and the IK and MK
// forcing relations.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hok/error.hpp"
#include "hok/kripke.hpp"
#include "hok/semantics.hpp"

namespace hok {

// R is an arbitrary relation: no closure is applied to it.
class BirelationalStructure {
 public:
  using Edge = Frame::Edge;

  BirelationalStructure(PropModel base, std::span<const Edge> r)
      : base_(std::move(base)),
        r_succ_(base_.frame().size(), PointSet(base_.frame().size())),
        r_pred_(r_succ_),
        down_(r_succ_) {
    const Frame& f = base_.frame();
    for (const auto& [a, b] : r) {
      auto i = f.find(a);
      auto j = f.find(b);
      if (!i || !j)
        throw ModelError("relation r has dangling endpoint '" + (i ? b : a) + "'");
      r_succ_[*i].set(*j);
      r_pred_[*j].set(*i);
    }
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        if (f.le(i, j)) down_[j].set(i);
  }

  const PropModel& base() const { return base_; }
  const Frame& frame() const { return base_.frame(); }
  std::size_t size() const { return frame().size(); }

  bool r(std::size_t a, std::size_t b) const { return r_succ_[a][b]; }
  bool r(std::string_view a, std::string_view b) const { return r(frame().index(a), frame().index(b)); }
  const std::vector<PointSet>& r_successors() const { return r_succ_; }
  const std::vector<PointSet>& r_predecessors() const { return r_pred_; }
  // down[j] = worlds below j.
  const std::vector<PointSet>& order_predecessors() const { return down_; }

  std::vector<Edge> r_edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (auto j = r_succ_[i].find_first(); j != PointSet::npos; j = r_succ_[i].find_next(j))
        out.emplace_back(frame().name(i), frame().name(j));
    return out;
  }

  std::size_t r_edge_count() const {
    std::size_t n = 0;
    for (const auto& s : r_succ_) n += s.count();
    return n;
  }

  friend bool operator==(const BirelationalStructure& a, const BirelationalStructure& b) {
    return a.base_ == b.base_ && a.r_succ_ == b.r_succ_;
  }

 private:
  PropModel base_;
  std::vector<PointSet> r_succ_;
  std::vector<PointSet> r_pred_;
  std::vector<PointSet> down_;
};

enum class Condition { kF1, kF2, kF3, kF4 };

inline constexpr std::array<Condition, 4> kAllConditions = {Condition::kF1, Condition::kF2, Condition::kF3,
                                                            Condition::kF4};

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::kF1:
      return "F1";
    case Condition::kF2:
      return "F2";
    case Condition::kF3:
      return "F3";
    case Condition::kF4:
      return "F4";
  }
  return "?";
}

using WorldTriple = std::array<std::string, 3>;

// Triples record the antecedent worlds in the order they appear in the
// condition:
//   F1 (w, w', j)   w <= w', w R j       needs j'  with j <= j', w' R j'
//   F2 (w, j, j')   w R j,  j <= j'      needs w'  with w <= w', w' R j'
//   F3 (w, w', j')  w <= w', w' R j'     needs j   with w R j,  j <= j'
//   F4 (j, j', w')  j <= j', w' R j'     needs w   with w R j,  w <= w'
struct ConditionReport {
  Condition condition = Condition::kF1;
  bool holds = true;
  bool unique = true;
  std::vector<WorldTriple> violations;
  std::vector<WorldTriple> nonunique;
};

inline ConditionReport check_condition(const BirelationalStructure& m, Condition c) {
  const Frame& f = m.frame();
  const auto& up = f.successors();
  const auto& down = m.order_predecessors();
  const auto& rs = m.r_successors();
  const auto& rp = m.r_predecessors();
  const std::size_t n = f.size();

  ConditionReport rep;
  rep.condition = c;
  auto record = [&](std::size_t witnesses, std::size_t a, std::size_t b, std::size_t d) {
    if (witnesses == 0) rep.violations.push_back({f.name(a), f.name(b), f.name(d)});
    else if (witnesses > 1) rep.nonunique.push_back({f.name(a), f.name(b), f.name(d)});
  };

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      switch (c) {
        case Condition::kF1:  // a = w, b = w', d = j
          if (!f.le(a, b)) break;
          for (auto d = rs[a].find_first(); d != PointSet::npos; d = rs[a].find_next(d))
            record((up[d] & rs[b]).count(), a, b, d);
          break;
        case Condition::kF2:  // a = w, b = j, d = j'
          if (!m.r(a, b)) break;
          for (auto d = up[b].find_first(); d != PointSet::npos; d = up[b].find_next(d))
            record((up[a] & rp[d]).count(), a, b, d);
          break;
        case Condition::kF3:  // a = w, b = w', d = j'
          if (!f.le(a, b)) break;
          for (auto d = rs[b].find_first(); d != PointSet::npos; d = rs[b].find_next(d))
            record((rs[a] & down[d]).count(), a, b, d);
          break;
        case Condition::kF4:  // a = j, b = j', d = w'
          if (!f.le(a, b)) break;
          for (auto d = rp[b].find_first(); d != PointSet::npos; d = rp[b].find_next(d))
            record((rp[a] & down[d]).count(), a, b, d);
          break;
      }
    }
  }
  rep.holds = rep.violations.empty();
  rep.unique = rep.holds && rep.nonunique.empty();
  return rep;
}

inline std::vector<ConditionReport> check_all_conditions(const BirelationalStructure& m) {
  std::vector<ConditionReport> out;
  for (Condition c : kAllConditions) out.push_back(check_condition(m, c));
  return out;
}

// Ordered: each class includes the conditions of the one before it.
enum class ModelClass { kNone, kBirelational, kStrong, kExcessive };

inline std::string to_string(ModelClass c) {
  switch (c) {
    case ModelClass::kNone:
      return "none";
    case ModelClass::kBirelational:
      return "birelational";
    case ModelClass::kStrong:
      return "strong";
    case ModelClass::kExcessive:
      return "excessive";
  }
  return "?";
}

// Whether the witnesses demanded by F1-F4 must be unique (the default) or
// merely exist.
enum class Witnesses { kUnique, kAny };

inline ModelClass classify(const BirelationalStructure& m, Witnesses w = Witnesses::kUnique) {
  auto ok = [&](Condition c) {
    ConditionReport rep = check_condition(m, c);
    return w == Witnesses::kUnique ? rep.unique : rep.holds;
  };
  if (!ok(Condition::kF1) || !ok(Condition::kF2)) return ModelClass::kNone;
  if (!ok(Condition::kF3)) return ModelClass::kBirelational;
  if (!ok(Condition::kF4)) return ModelClass::kStrong;
  return ModelClass::kExcessive;
}

// IK: [] quantifies over R-successors of every <=-successor.
class IkSemantics : public OrderedPointAlgebra {
 public:
  static constexpr bool kModal = true;

  explicit IkSemantics(const BirelationalStructure& m, Witnesses w = Witnesses::kUnique)
      : OrderedPointAlgebra(m.frame().successors()), model_(&m), box_reach_(m.size(), PointSet(m.size())) {
    if (classify(m, w) < ModelClass::kBirelational)
      throw SemanticsError("IK forcing needs a birelational model (F1 and F2" +
                           std::string(w == Witnesses::kUnique ? " with unique witnesses)" : ")"));
    const auto& up = m.frame().successors();
    for (std::size_t i = 0; i < m.size(); ++i)
      for (auto j = up[i].find_first(); j != PointSet::npos; j = up[i].find_next(j))
        box_reach_[i] |= m.r_successors()[j];
  }

  PointSet atom(const std::string& p) const { return model_->base().atom_set(p); }
  PointSet box(const PointSet& a) const { return box_over(box_reach_, a); }
  PointSet diamond(const PointSet& a) const { return diamond_over(model_->r_successors(), a); }

 private:
  const BirelationalStructure* model_;
  std::vector<PointSet> box_reach_;
};

// MK: [] quantifies over R-successors only. Defined for strong models.
class MkSemantics : public OrderedPointAlgebra {
 public:
  static constexpr bool kModal = true;

  explicit MkSemantics(const BirelationalStructure& m, Witnesses w = Witnesses::kUnique)
      : OrderedPointAlgebra(m.frame().successors()), model_(&m) {
    if (classify(m, w) < ModelClass::kStrong)
      throw SemanticsError("MK forcing needs a strong model (F1, F2 and F3" +
                           std::string(w == Witnesses::kUnique ? " with unique witnesses)" : ")"));
  }

  PointSet atom(const std::string& p) const { return model_->base().atom_set(p); }
  PointSet box(const PointSet& a) const { return box_over(model_->r_successors(), a); }
  PointSet diamond(const PointSet& a) const { return diamond_over(model_->r_successors(), a); }

 private:
  const BirelationalStructure* model_;
};

inline bool forces_ik(const BirelationalStructure& m, std::string_view w, const Formula& f,
                      Witnesses policy = Witnesses::kUnique) {
  std::size_t i = m.frame().index(w);
  return extension(IkSemantics(m, policy), f)[i];
}

inline bool forces_mk(const BirelationalStructure& m, std::string_view w, const Formula& f,
                      Witnesses policy = Witnesses::kUnique) {
  std::size_t i = m.frame().index(w);
  return extension(MkSemantics(m, policy), f)[i];
}

inline bool entails_ik(const BirelationalStructure& m, std::string_view w, std::span<const Formula> gamma,
                       const Formula& f, Witnesses policy = Witnesses::kUnique) {
  std::size_t i = m.frame().index(w);
  return entailment_extension(IkSemantics(m, policy), gamma, f)[i];
}

inline bool entails_mk(const BirelationalStructure& m, std::string_view w, std::span<const Formula> gamma,
                       const Formula& f, Witnesses policy = Witnesses::kUnique) {
  std::size_t i = m.frame().index(w);
  return entailment_extension(MkSemantics(m, policy), gamma, f)[i];
}

inline bool valid_ik(const BirelationalStructure& m, std::span<const Formula> gamma, const Formula& f,
                     Witnesses policy = Witnesses::kUnique) {
  return entailment_extension(IkSemantics(m, policy), gamma, f).all();
}

inline bool valid_mk(const BirelationalStructure& m, std::span<const Formula> gamma, const Formula& f,
                     Witnesses policy = Witnesses::kUnique) {
  return entailment_extension(MkSemantics(m, policy), gamma, f).all();
}

}  // namespace hok
