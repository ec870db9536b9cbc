#pragma once

// General models: a family of propositional Kripke models with a modal
// accessibility relation between the models themselves. Partial models
// require every member to be a partial copy of one reference member;
// homogeneous models require all members to share one frame.

#include <concepts>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hok/error.hpp"
#include "hok/kripke.hpp"
#include "hok/semantics.hpp"

namespace hok {

class GeneralModel {
 public:
  using Edge = Frame::Edge;

  GeneralModel(std::map<std::string, PropModel> submodels, std::span<const Edge> succ)
      : submodels_(std::move(submodels)) {
    if (submodels_.empty()) throw ModelError("a general model needs at least one submodel");
    for (const auto& [id, m] : submodels_) {
      if (!is_identifier(id)) throw ModelError("invalid model name '" + id + "'");
      ids_.push_back(id);
      models_.push_back(&m);
    }
    succ_.assign(ids_.size(), PointSet(ids_.size()));
    for (const auto& [a, b] : succ) {
      auto i = find(a);
      auto j = find(b);
      if (!i || !j) throw ModelError("succ refers to undeclared model '" + (i ? b : a) + "'");
      succ_[*i].set(*j);
    }
  }

  GeneralModel(const GeneralModel& o) : GeneralModel(o.submodels_, o.succ_edges()) {}
  GeneralModel(GeneralModel&&) = default;
  GeneralModel& operator=(const GeneralModel& o) {
    if (this != &o) *this = GeneralModel(o);
    return *this;
  }
  GeneralModel& operator=(GeneralModel&&) = default;

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(std::size_t k) const { return ids_[k]; }
  const std::map<std::string, PropModel>& submodels() const { return submodels_; }
  const PropModel& submodel(std::size_t k) const { return *models_[k]; }
  const PropModel& submodel(std::string_view id) const { return *models_[index(id)]; }

  std::optional<std::size_t> find(std::string_view id) const {
    for (std::size_t k = 0; k < ids_.size(); ++k)
      if (ids_[k] == id) return k;
    return std::nullopt;
  }
  std::size_t index(std::string_view id) const {
    if (auto k = find(id)) return *k;
    throw UnknownName("unknown submodel '" + std::string(id) + "'");
  }

  bool succ(std::size_t a, std::size_t b) const { return succ_[a][b]; }
  const std::vector<PointSet>& succ_successors() const { return succ_; }

  std::vector<Edge> succ_edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (auto j = succ_[i].find_first(); j != PointSet::npos; j = succ_[i].find_next(j))
        out.emplace_back(ids_[i], ids_[j]);
    return out;
  }

  std::size_t world_count() const {
    std::size_t n = 0;
    for (const auto* m : models_) n += m->frame().size();
    return n;
  }

  friend bool operator==(const GeneralModel& a, const GeneralModel& b) {
    return a.submodels_ == b.submodels_ && a.succ_ == b.succ_;
  }

 private:
  std::map<std::string, PropModel> submodels_;
  std::vector<std::string> ids_;
  std::vector<const PropModel*> models_;
  std::vector<PointSet> succ_;
};

// A submodel against which every submodel is a partial copy; the
// lexicographically first one when several qualify.
inline std::optional<std::string> validate_partial(const GeneralModel& g) {
  for (std::size_t r = 0; r < g.size(); ++r) {
    const Frame& ref = g.submodel(r).frame();
    bool ok = true;
    for (std::size_t k = 0; k < g.size() && ok; ++k) ok = is_partial_copy(g.submodel(k).frame(), ref);
    if (ok) return g.id(r);
  }
  return std::nullopt;
}

inline bool validate_homogeneous(const GeneralModel& g) {
  for (std::size_t k = 1; k < g.size(); ++k)
    if (!(g.submodel(k).frame() == g.submodel(0).frame())) return false;
  return true;
}

class PartialModel {
 public:
  // Validates against `reference` if given, otherwise picks one.
  explicit PartialModel(GeneralModel g, std::optional<std::string> reference = std::nullopt)
      : model_(std::move(g)) {
    if (reference) {
      const Frame& ref = model_.submodel(*reference).frame();
      for (std::size_t k = 0; k < model_.size(); ++k)
        if (!is_partial_copy(model_.submodel(k).frame(), ref))
          throw ModelError("submodel " + model_.id(k) + " is not a partial copy of reference " + *reference);
      reference_ = *reference;
    } else if (auto r = validate_partial(model_)) {
      reference_ = *r;
    } else {
      throw ModelError("no submodel can serve as reference: the family is not partially homogeneous");
    }
  }

  const GeneralModel& general() const { return model_; }
  const std::string& reference() const { return reference_; }
  const Frame& reference_frame() const { return model_.submodel(reference_).frame(); }

 private:
  GeneralModel model_;
  std::string reference_;
};

class HomogeneousModel {
 public:
  explicit HomogeneousModel(GeneralModel g) : model_(std::move(g)) {
    if (!validate_homogeneous(model_)) throw ModelError("submodels do not share one frame");
  }

  const GeneralModel& general() const { return model_; }
  const Frame& frame() const { return model_.submodel(0).frame(); }

  // Every homogeneous model is partial, with any member as reference.
  PartialModel as_partial() const { return PartialModel(model_, model_.id(0)); }

 private:
  GeneralModel model_;
};

// Evaluation points of a general model: pairs (submodel, world), ordered by
// submodel then world.
class GeneralPoints {
 public:
  explicit GeneralPoints(const GeneralModel& g) : model_(&g) {
    std::size_t at = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      offset_.push_back(at);
      at += g.submodel(k).frame().size();
    }
    offset_.push_back(at);
  }

  std::size_t size() const { return offset_.back(); }
  std::size_t offset(std::size_t k) const { return offset_[k]; }
  std::size_t index(std::size_t k, std::size_t w) const { return offset_[k] + w; }
  std::size_t index(std::string_view k, std::string_view w) const {
    std::size_t ki = model_->index(k);
    return index(ki, model_->submodel(ki).frame().index(w));
  }
  // (submodel id, world name) of a point.
  std::pair<std::string, std::string> name(std::size_t p) const {
    std::size_t k = 0;
    while (offset_[k + 1] <= p) ++k;
    return {model_->id(k), model_->submodel(k).frame().name(p - offset_[k])};
  }

  // Successors along each submodel's own order.
  std::vector<PointSet> order_successors() const {
    std::vector<PointSet> out(size(), PointSet(size()));
    for (std::size_t k = 0; k < model_->size(); ++k) {
      const Frame& f = model_->submodel(k).frame();
      for (std::size_t w = 0; w < f.size(); ++w)
        for (std::size_t v = 0; v < f.size(); ++v)
          if (f.le(w, v)) out[index(k, w)].set(index(k, v));
    }
    return out;
  }

  PointSet atom(const std::string& p) const {
    PointSet s(size());
    for (std::size_t k = 0; k < model_->size(); ++k) {
      PointSet local = model_->submodel(k).atom_set(p);
      for (auto w = local.find_first(); w != PointSet::npos; w = local.find_next(w)) s.set(index(k, w));
    }
    return s;
  }

 private:
  const GeneralModel* model_;
  std::vector<std::size_t> offset_;
};

// Forcing on partial models.
//   [] A at (K, w): every (K', w') with K > K', w' in K' and w <= w' forces A,
//                   with <= read in the reference model.
//   <> A at (K, w): some K > K' with w in K' has A at (K', w).
class PartialSemantics : public OrderedPointAlgebra {
 public:
  static constexpr bool kModal = true;

  explicit PartialSemantics(const PartialModel& m) : points_(m.general()) {
    const GeneralModel& g = m.general();
    const Frame& ref = m.reference_frame();
    successors_ = points_.order_successors();
    box_reach_.assign(points_.size(), PointSet(points_.size()));
    diamond_reach_ = box_reach_;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Frame& fk = g.submodel(k).frame();
      for (std::size_t w = 0; w < fk.size(); ++w) {
        std::size_t from = points_.index(k, w);
        std::size_t w_ref = ref.index(fk.name(w));
        for (std::size_t k2 = 0; k2 < g.size(); ++k2) {
          if (!g.succ(k, k2)) continue;
          const Frame& fk2 = g.submodel(k2).frame();
          if (auto same = fk2.find(fk.name(w))) diamond_reach_[from].set(points_.index(k2, *same));
          for (std::size_t v = 0; v < fk2.size(); ++v)
            if (ref.le(w_ref, ref.index(fk2.name(v)))) box_reach_[from].set(points_.index(k2, v));
        }
      }
    }
  }

  const GeneralPoints& points() const { return points_; }

  PointSet atom(const std::string& p) const { return points_.atom(p); }
  PointSet box(const PointSet& a) const { return box_over(box_reach_, a); }
  PointSet diamond(const PointSet& a) const { return diamond_over(diamond_reach_, a); }

 private:
  GeneralPoints points_;
  std::vector<PointSet> box_reach_;
  std::vector<PointSet> diamond_reach_;
};

// Forcing on homogeneous models: both modalities look at the same world in
// every accessible submodel.
class HomogeneousSemantics : public OrderedPointAlgebra {
 public:
  static constexpr bool kModal = true;

  explicit HomogeneousSemantics(const HomogeneousModel& h) : points_(h.general()) {
    const GeneralModel& g = h.general();
    successors_ = points_.order_successors();
    reach_.assign(points_.size(), PointSet(points_.size()));
    const std::size_t n = h.frame().size();
    for (std::size_t k = 0; k < g.size(); ++k)
      for (std::size_t k2 = 0; k2 < g.size(); ++k2)
        if (g.succ(k, k2))
          for (std::size_t w = 0; w < n; ++w) reach_[points_.index(k, w)].set(points_.index(k2, w));
  }

  const GeneralPoints& points() const { return points_; }

  PointSet atom(const std::string& p) const { return points_.atom(p); }
  PointSet box(const PointSet& a) const { return box_over(reach_, a); }
  PointSet diamond(const PointSet& a) const { return diamond_over(reach_, a); }

 private:
  GeneralPoints points_;
  std::vector<PointSet> reach_;
};

inline bool forces_partial(const PartialModel& m, std::string_view k, std::string_view w, const Formula& f) {
  PartialSemantics s(m);
  return extension(s, f)[s.points().index(k, w)];
}

inline bool forces_homogeneous(const HomogeneousModel& h, std::string_view k, std::string_view w,
                               const Formula& f) {
  HomogeneousSemantics s(h);
  return extension(s, f)[s.points().index(k, w)];
}

inline bool entails_partial(const PartialModel& m, std::string_view k, std::string_view w,
                            std::span<const Formula> gamma, const Formula& f) {
  PartialSemantics s(m);
  return entailment_extension(s, gamma, f)[s.points().index(k, w)];
}

inline bool entails_homogeneous(const HomogeneousModel& h, std::string_view k, std::string_view w,
                                std::span<const Formula> gamma, const Formula& f) {
  HomogeneousSemantics s(h);
  return entailment_extension(s, gamma, f)[s.points().index(k, w)];
}

namespace detail {

template <class S>
bool valid_in_submodel(const S& s, const GeneralModel& g, std::string_view k, std::span<const Formula> gamma,
                       const Formula& f) {
  std::size_t ki = g.index(k);
  PointSet ext = entailment_extension(s, gamma, f);
  std::size_t n = g.submodel(ki).frame().size();
  for (std::size_t w = 0; w < n; ++w)
    if (!ext[s.points().index(ki, w)]) return false;
  return true;
}

}  // namespace detail

inline bool valid_at_submodel(const PartialModel& m, std::string_view k, std::span<const Formula> gamma,
                              const Formula& f) {
  return detail::valid_in_submodel(PartialSemantics(m), m.general(), k, gamma, f);
}

inline bool valid_at_submodel(const HomogeneousModel& h, std::string_view k, std::span<const Formula> gamma,
                              const Formula& f) {
  return detail::valid_in_submodel(HomogeneousSemantics(h), h.general(), k, gamma, f);
}

inline bool valid_in_model(const PartialModel& m, std::span<const Formula> gamma, const Formula& f) {
  return entailment_extension(PartialSemantics(m), gamma, f).all();
}

inline bool valid_in_model(const HomogeneousModel& h, std::span<const Formula> gamma, const Formula& f) {
  return entailment_extension(HomogeneousSemantics(h), gamma, f).all();
}

// ---------------------------------------------------------------------------
// Modal clauses over an arbitrary base logic. A base model supplies its
// evaluation points, atoms and implication; the MK clauses for [] and <>
// are layered on top and read the accessibility relation between models.

template <class B>
concept BaseModel = requires(const B& b, const B& other, const PointSet& x, const std::string& p) {
  { b.point_count() } -> std::convertible_to<std::size_t>;
  { b.same_carrier(other) } -> std::convertible_to<bool>;
  { b.atom(p) } -> std::same_as<PointSet>;
  { b.implies(x, x) } -> std::same_as<PointSet>;
};

// A classical valuation seen as a one-point model.
class ClassicalBase {
 public:
  explicit ClassicalBase(std::set<std::string> true_atoms) : true_atoms_(std::move(true_atoms)) {}

  std::size_t point_count() const { return 1; }
  bool same_carrier(const ClassicalBase&) const { return true; }
  PointSet atom(const std::string& p) const { return PointSet(1, true_atoms_.contains(p) ? 1 : 0); }
  PointSet implies(const PointSet& a, const PointSet& b) const { return ~a | b; }

 private:
  std::set<std::string> true_atoms_;
};

class IntuitionisticBase {
 public:
  explicit IntuitionisticBase(const PropModel& m) : model_(&m), algebra_(m) {}

  std::size_t point_count() const { return model_->frame().size(); }
  bool same_carrier(const IntuitionisticBase& o) const { return model_->frame() == o.model_->frame(); }
  PointSet atom(const std::string& p) const { return model_->atom_set(p); }
  PointSet implies(const PointSet& a, const PointSet& b) const { return algebra_.implies(a, b); }

 private:
  const PropModel* model_;
  PropSemantics algebra_;
};

template <BaseModel B>
class ModularMkSemantics {
 public:
  using value_type = PointSet;
  using Edge = std::pair<std::size_t, std::size_t>;
  static constexpr bool kModal = true;

  ModularMkSemantics(std::span<const B> family, std::span<const Edge> succ)
      : family_(family.begin(), family.end()) {
    if (family_.empty()) throw ModelError("empty model family");
    for (const B& b : family_)
      if (!b.same_carrier(family_.front())) throw ModelError("carrier mismatch between family members");
    n_ = family_.front().point_count();
    reach_.assign(size(), PointSet(size()));
    for (const auto& [a, b] : succ) {
      if (a >= family_.size() || b >= family_.size()) throw ModelError("succ index out of range");
      for (std::size_t w = 0; w < n_; ++w) reach_[a * n_ + w].set(b * n_ + w);
    }
  }

  std::size_t size() const { return family_.size() * n_; }
  std::size_t index(std::size_t k, std::size_t w) const { return k * n_ + w; }

  PointSet bottom() const { return PointSet(size()); }
  PointSet conj(const PointSet& a, const PointSet& b) const { return a & b; }
  PointSet disj(const PointSet& a, const PointSet& b) const { return a | b; }
  PointSet atom(const std::string& p) const {
    PointSet out(size());
    for (std::size_t k = 0; k < family_.size(); ++k) put(out, k, family_[k].atom(p));
    return out;
  }
  PointSet implies(const PointSet& a, const PointSet& b) const {
    PointSet out(size());
    for (std::size_t k = 0; k < family_.size(); ++k) put(out, k, family_[k].implies(slice(a, k), slice(b, k)));
    return out;
  }
  PointSet box(const PointSet& a) const { return box_over(reach_, a); }
  PointSet diamond(const PointSet& a) const { return diamond_over(reach_, a); }

 private:
  PointSet slice(const PointSet& s, std::size_t k) const {
    PointSet out(n_);
    for (std::size_t w = 0; w < n_; ++w) out[w] = s[k * n_ + w];
    return out;
  }
  void put(PointSet& s, std::size_t k, const PointSet& local) const {
    for (std::size_t w = 0; w < n_; ++w) s[k * n_ + w] = local[w];
  }

  std::vector<B> family_;
  std::size_t n_ = 0;
  std::vector<PointSet> reach_;
};

template <BaseModel B>
bool modular_mk_evaluate(std::span<const B> family, std::span<const std::pair<std::size_t, std::size_t>> succ,
                         std::size_t k, std::size_t w, const Formula& f) {
  ModularMkSemantics<B> s(family, succ);
  if (k >= family.size() || w >= family.front().point_count())
    throw UnknownName("evaluation point out of range");
  return extension(s, f)[s.index(k, w)];
}

}  // namespace hok
