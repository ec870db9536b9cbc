#pragma once

// Seeded generators for formulas and models, and pointwise evaluators
// written straight from the forcing clauses. The oracles do not use the
// library's point-set semantics.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hok/birelational.hpp"
#include "hok/formula.hpp"
#include "hok/general.hpp"
#include "hok/kripke.hpp"
#include "hok/search.hpp"
#include "hok/semantics.hpp"
#include "hok/transform.hpp"

namespace hok::testing {

using Rng = std::mt19937_64;

// Random formula with nesting depth at most `max_depth`.
inline Formula random_formula(Rng& rng, std::size_t max_depth, const std::vector<std::string>& atoms,
                              bool modal = true) {
  std::uniform_int_distribution<int> leaf(0, static_cast<int>(atoms.size()));
  if (max_depth == 0 || std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    int i = leaf(rng);
    return i == static_cast<int>(atoms.size()) ? Formula::bottom() : Formula::atom(atoms[i]);
  }
  int op = std::uniform_int_distribution<int>(0, modal ? 6 : 4)(rng);
  auto sub = [&] { return random_formula(rng, max_depth - 1, atoms, modal); };
  switch (op) {
    case 0:
      return Formula::conj(sub(), sub());
    case 1:
      return Formula::disj(sub(), sub());
    case 2:
      return Formula::implies(sub(), sub());
    case 3:
      return Formula::negation(sub());
    case 4:
      return Formula::implies(sub(), Formula::implies(Formula::bottom(), Formula::bottom()));
    case 5:
      return Formula::box(sub());
    default:
      return Formula::diamond(sub());
  }
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Hereditary valuation drawn uniformly per atom from the up-sets.
inline Valuation random_valuation(Rng& rng, const std::vector<std::string>& worlds, const std::vector<PointSet>& up,
                                  const std::vector<std::string>& atoms) {
  auto choices = up_sets(up);
  Valuation val;
  for (const auto& w : worlds) val[w];
  for (const auto& p : atoms) {
    const PointSet& s = pick(rng, choices);
    for (std::size_t w = 0; w < worlds.size(); ++w)
      if (s[w]) val[worlds[w]].insert(p);
  }
  return val;
}

inline std::vector<Frame::Edge> random_succ(Rng& rng, std::size_t m, double density = 0.4) {
  std::bernoulli_distribution coin(density);
  std::vector<Frame::Edge> out;
  auto ids = canonical_submodels(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (coin(rng)) out.emplace_back(ids[a], ids[b]);
  return out;
}

// Random partial (or homogeneous) general model: K1 carries a random
// preorder on up to max_worlds worlds; for partial models every other
// submodel lives on a random nonempty up-closed subset of it.
inline GeneralModel random_general(Rng& rng, GeneralClass cls, std::size_t max_submodels, std::size_t max_worlds,
                                   const std::vector<std::string>& atoms,
                                   const std::vector<Frame::Edge>* succ = nullptr) {
  std::size_t n = uniform(rng, 1, max_worlds);
  std::size_t m = uniform(rng, 1, max_submodels);
  auto worlds = canonical_worlds(n);
  const auto& up = pick(rng, preorders(n));
  std::vector<PointSet> carriers;
  for (const auto& s : up_sets(up))
    if (s.any()) carriers.push_back(s);
  auto ids = canonical_submodels(m);
  std::map<std::string, PropModel> subs;
  for (std::size_t k = 0; k < m; ++k) {
    PointSet keep = (k == 0 || cls == GeneralClass::kHomogeneous) ? full_set(n) : pick(rng, carriers);
    std::vector<std::string> names;
    std::vector<std::size_t> idx;
    for (auto w = keep.find_first(); w != PointSet::npos; w = keep.find_next(w)) {
      names.push_back(worlds[w]);
      idx.push_back(w);
    }
    std::vector<PointSet> sub_up(idx.size(), PointSet(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        if (up[idx[a]][idx[b]]) sub_up[a].set(b);
    subs.emplace(ids[k], PropModel(Frame::from_successors(names, sub_up), random_valuation(rng, names, sub_up, atoms)));
  }
  std::vector<Frame::Edge> edges = succ ? *succ : random_succ(rng, m);
  std::vector<Frame::Edge> kept;
  for (const auto& e : edges)
    if (subs.contains(e.first) && subs.contains(e.second)) kept.push_back(e);
  return GeneralModel(std::move(subs), kept);
}

// ---------------------------------------------------------------------------
// Pointwise oracles.

// Pointwise intuitionistic forcing on a propositional model.
inline bool oracle_forces(const PropModel& m, std::size_t w, const Formula& f) {
  const Frame& fr = m.frame();
  switch (f.kind()) {
    case Connective::kAtom:
      return m.val(w).contains(f.name());
    case Connective::kBottom:
      return false;
    case Connective::kAnd:
      return oracle_forces(m, w, f.left()) && oracle_forces(m, w, f.right());
    case Connective::kOr:
      return oracle_forces(m, w, f.left()) || oracle_forces(m, w, f.right());
    case Connective::kImplies:
      for (std::size_t v = 0; v < fr.size(); ++v)
        if (fr.le(w, v) && oracle_forces(m, v, f.left()) && !oracle_forces(m, v, f.right())) return false;
      return true;
    default:
      throw SemanticsError("modal formula in a propositional model");
  }
}

// IK (mk = false) or MK (mk = true) forcing on a birelational model.
inline bool oracle_birelational(const BirelationalStructure& m, std::size_t w, const Formula& f, bool mk) {
  const Frame& fr = m.frame();
  const std::size_t n = fr.size();
  auto sub = [&](std::size_t v, const Formula& g) { return oracle_birelational(m, v, g, mk); };
  switch (f.kind()) {
    case Connective::kAtom:
      return m.base().val(w).contains(f.name());
    case Connective::kBottom:
      return false;
    case Connective::kAnd:
      return sub(w, f.left()) && sub(w, f.right());
    case Connective::kOr:
      return sub(w, f.left()) || sub(w, f.right());
    case Connective::kImplies:
      for (std::size_t v = 0; v < n; ++v)
        if (fr.le(w, v) && sub(v, f.left()) && !sub(v, f.right())) return false;
      return true;
    case Connective::kBox:
      for (std::size_t v = 0; v < n; ++v) {
        if (mk ? v != w : !fr.le(w, v)) continue;
        for (std::size_t u = 0; u < n; ++u)
          if (m.r(v, u) && !sub(u, f.inner())) return false;
      }
      return true;
    case Connective::kDiamond:
      for (std::size_t u = 0; u < n; ++u)
        if (m.r(w, u) && sub(u, f.inner())) return true;
      return false;
  }
  return false;
}

// Partial (homogeneous = false) or homogeneous forcing at (k, world name).
inline bool oracle_general(const GeneralModel& g, const Frame& reference, std::size_t k, const std::string& w,
                           const Formula& f, bool homogeneous) {
  const PropModel& K = g.submodel(k);
  const Frame& fr = K.frame();
  auto sub = [&](std::size_t k2, const std::string& v, const Formula& h) {
    return oracle_general(g, reference, k2, v, h, homogeneous);
  };
  switch (f.kind()) {
    case Connective::kAtom:
      return K.val(w).contains(f.name());
    case Connective::kBottom:
      return false;
    case Connective::kAnd:
      return sub(k, w, f.left()) && sub(k, w, f.right());
    case Connective::kOr:
      return sub(k, w, f.left()) || sub(k, w, f.right());
    case Connective::kImplies:
      for (const auto& v : fr.worlds())
        if (fr.le(w, v) && sub(k, v, f.left()) && !sub(k, v, f.right())) return false;
      return true;
    case Connective::kBox:
      for (std::size_t k2 = 0; k2 < g.size(); ++k2) {
        if (!g.succ(k, k2)) continue;
        const Frame& f2 = g.submodel(k2).frame();
        if (homogeneous) {
          if (!sub(k2, w, f.inner())) return false;
          continue;
        }
        for (const auto& v : f2.worlds())
          if (reference.le(w, v) && !sub(k2, v, f.inner())) return false;
      }
      return true;
    case Connective::kDiamond:
      for (std::size_t k2 = 0; k2 < g.size(); ++k2)
        if (g.succ(k, k2) && g.submodel(k2).frame().contains(w) && sub(k2, w, f.inner())) return true;
      return false;
  }
  return false;
}

// Classical modal logic K over a list of valuations and an accessibility
// relation given as a matrix.
struct ClassicalKModel {
  std::vector<std::set<std::string>> val;
  std::vector<std::vector<bool>> acc;
};

inline bool oracle_classical_k(const ClassicalKModel& m, std::size_t i, const Formula& f) {
  auto sub = [&](std::size_t j, const Formula& g) { return oracle_classical_k(m, j, g); };
  switch (f.kind()) {
    case Connective::kAtom:
      return m.val[i].contains(f.name());
    case Connective::kBottom:
      return false;
    case Connective::kAnd:
      return sub(i, f.left()) && sub(i, f.right());
    case Connective::kOr:
      return sub(i, f.left()) || sub(i, f.right());
    case Connective::kImplies:
      return !sub(i, f.left()) || sub(i, f.right());
    case Connective::kBox:
      for (std::size_t j = 0; j < m.val.size(); ++j)
        if (m.acc[i][j] && !sub(j, f.inner())) return false;
      return true;
    case Connective::kDiamond:
      for (std::size_t j = 0; j < m.val.size(); ++j)
        if (m.acc[i][j] && sub(j, f.inner())) return true;
      return false;
  }
  return false;
}

// Reads a singleton-frame homogeneous model as a classical K model.
inline ClassicalKModel as_classical_k(const GeneralModel& g) {
  ClassicalKModel out;
  for (std::size_t k = 0; k < g.size(); ++k) out.val.push_back(g.submodel(k).val(0));
  out.acc.assign(g.size(), std::vector<bool>(g.size(), false));
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) out.acc[a][b] = g.succ(a, b);
  return out;
}

// Makes `base` reflexive and/or transitive over m submodels K1..Km.
inline std::vector<Frame::Edge> close_succ(std::vector<Frame::Edge> base, std::size_t m, bool reflexive,
                                           bool transitive) {
  auto ids = canonical_submodels(m);
  std::vector<std::vector<bool>> rel(m, std::vector<bool>(m, false));
  auto at = [&](const std::string& s) { return static_cast<std::size_t>(std::stoul(s.substr(1)) - 1); };
  for (const auto& [a, b] : base) rel[at(a)][at(b)] = true;
  if (reflexive)
    for (std::size_t i = 0; i < m; ++i) rel[i][i] = true;
  if (transitive)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (rel[i][k] && rel[k][j]) rel[i][j] = true;
  std::vector<Frame::Edge> out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (rel[i][j]) out.emplace_back(ids[i], ids[j]);
  return out;
}

// Three-world frame: w <= w', w' R w''.
inline BirelationalStructure three_world_model(const Valuation& val = {}) {
  std::vector<Frame::Edge> le{{"w", "w'"}};
  std::vector<Frame::Edge> r{{"w'", "w''"}};
  return BirelationalStructure(PropModel(Frame::build({"w", "w'", "w''"}, le), val), r);
}

inline Frame chain(const std::vector<std::string>& worlds) {
  std::vector<Frame::Edge> le;
  for (std::size_t i = 0; i + 1 < worlds.size(); ++i) le.emplace_back(worlds[i], worlds[i + 1]);
  return Frame::build(worlds, le);
}

// The workday timelines: K and K' on m <= a <= e, K'' on a <= e.
inline std::map<std::string, PropModel> timeline_submodels(bool with_late_start = true) {
  std::map<std::string, PropModel> subs;
  subs.emplace("K", PropModel(chain({"m", "a", "e"}), {{"e", {"p"}}}));
  subs.emplace("K'", PropModel(chain({"m", "a", "e"}), {{"m", {"p"}}, {"a", {"p"}}, {"e", {"p", "q"}}}));
  if (with_late_start) subs.emplace("K''", PropModel(chain({"a", "e"}), {{"a", {"p"}}, {"e", {"p", "q"}}}));
  return subs;
}

inline GeneralModel timeline(const std::vector<Frame::Edge>& succ, bool with_late_start = true) {
  return GeneralModel(timeline_submodels(with_late_start), succ);
}

}  // namespace hok::testing
