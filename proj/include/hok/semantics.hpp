#pragma once

// Every forcing relation in this library is compositional: the set of points
// forcing a compound formula is a function of the point sets of its parts.
// A semantics therefore only has to supply one operation per connective on
// its value type (usually a PointSet). `extension` folds a formula through
// those operations; `sweep_formulas` enumerates every formula up to a given
// nesting depth by closing the atom denotations under the operations,
// deduplicating by value.

#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "hok/formula.hpp"

namespace hok {

using PointSet = boost::dynamic_bitset<>;

inline PointSet full_set(std::size_t n) {
  PointSet s(n);
  s.set();
  return s;
}

inline PointSet singleton_set(std::size_t n, std::size_t i) {
  PointSet s(n);
  s.set(i);
  return s;
}

// True iff s is closed upward along `successors` (successors[i] = points above i).
inline bool is_up_closed(const PointSet& s, const std::vector<PointSet>& successors) {
  for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i))
    if (!successors[i].is_subset_of(s)) return false;
  return true;
}

template <class S>
concept Semantics = requires(const S& s, const typename S::value_type& a,
                             const typename S::value_type& b, const std::string& atom) {
  { s.bottom() } -> std::same_as<typename S::value_type>;
  { s.atom(atom) } -> std::same_as<typename S::value_type>;
  { s.conj(a, b) } -> std::same_as<typename S::value_type>;
  { s.disj(a, b) } -> std::same_as<typename S::value_type>;
  { s.implies(a, b) } -> std::same_as<typename S::value_type>;
  { s.box(a) } -> std::same_as<typename S::value_type>;
  { s.diamond(a) } -> std::same_as<typename S::value_type>;
  { S::kModal } -> std::convertible_to<bool>;
};

template <Semantics S>
typename S::value_type extension(const S& s, const Formula& f) {
  switch (f.kind()) {
    case Connective::kAtom:
      return s.atom(f.name());
    case Connective::kBottom:
      return s.bottom();
    case Connective::kAnd:
      return s.conj(extension(s, f.left()), extension(s, f.right()));
    case Connective::kOr:
      return s.disj(extension(s, f.left()), extension(s, f.right()));
    case Connective::kImplies:
      return s.implies(extension(s, f.left()), extension(s, f.right()));
    case Connective::kBox:
      return s.box(extension(s, f.inner()));
    case Connective::kDiamond:
      return s.diamond(extension(s, f.inner()));
  }
  return s.bottom();
}

// Points at which gamma entails f: for empty gamma the extension of f,
// otherwise every order-successor forcing all of gamma forces f.
template <Semantics S>
typename S::value_type entailment_extension(const S& s, std::span<const Formula> gamma,
                                            const Formula& f) {
  if (gamma.empty()) return extension(s, f);
  auto premises = extension(s, gamma.front());
  for (const Formula& g : gamma.subspan(1)) premises = s.conj(premises, extension(s, g));
  return s.implies(premises, extension(s, f));
}

// Point-set algebra shared by every semantics whose implication quantifies
// over a preorder: conjunction and disjunction are pointwise, and A -> B
// holds at w iff no successor of w is in A but not in B.
class OrderedPointAlgebra {
 public:
  using value_type = PointSet;

  std::size_t point_count() const { return successors_.size(); }
  const std::vector<PointSet>& order_successors() const { return successors_; }

  PointSet bottom() const { return PointSet(point_count()); }
  PointSet conj(const PointSet& a, const PointSet& b) const { return a & b; }
  PointSet disj(const PointSet& a, const PointSet& b) const { return a | b; }
  PointSet implies(const PointSet& a, const PointSet& b) const {
    PointSet bad = a - b;
    PointSet out(point_count());
    if (bad.none()) {
      out.set();
      return out;
    }
    for (std::size_t w = 0; w < point_count(); ++w)
      if (!successors_[w].intersects(bad)) out.set(w);
    return out;
  }

 protected:
  OrderedPointAlgebra() = default;
  explicit OrderedPointAlgebra(std::vector<PointSet> successors) : successors_(std::move(successors)) {}

  std::vector<PointSet> successors_;
};

// Box over a precomputed reach relation: w is in box(A) iff everything
// reachable from w is in A. Diamond: something reachable is in A.
inline PointSet box_over(const std::vector<PointSet>& reach, const PointSet& a) {
  PointSet out(reach.size());
  for (std::size_t w = 0; w < reach.size(); ++w)
    if (reach[w].is_subset_of(a)) out.set(w);
  return out;
}

inline PointSet diamond_over(const std::vector<PointSet>& reach, const PointSet& a) {
  PointSet out(reach.size());
  for (std::size_t w = 0; w < reach.size(); ++w)
    if (reach[w].intersects(a)) out.set(w);
  return out;
}

// Evaluates two semantics side by side; the value is the pair of their
// values. Used to compare evaluators over one formula sweep.
template <Semantics A, Semantics B>
class PairedSemantics {
 public:
  using value_type = std::pair<typename A::value_type, typename B::value_type>;
  static constexpr bool kModal = A::kModal && B::kModal;

  PairedSemantics(const A& a, const B& b) : a_(a), b_(b) {}

  value_type bottom() const { return {a_.bottom(), b_.bottom()}; }
  value_type atom(const std::string& p) const { return {a_.atom(p), b_.atom(p)}; }
  value_type conj(const value_type& x, const value_type& y) const {
    return {a_.conj(x.first, y.first), b_.conj(x.second, y.second)};
  }
  value_type disj(const value_type& x, const value_type& y) const {
    return {a_.disj(x.first, y.first), b_.disj(x.second, y.second)};
  }
  value_type implies(const value_type& x, const value_type& y) const {
    return {a_.implies(x.first, y.first), b_.implies(x.second, y.second)};
  }
  value_type box(const value_type& x) const { return {a_.box(x.first), b_.box(x.second)}; }
  value_type diamond(const value_type& x) const { return {a_.diamond(x.first), b_.diamond(x.second)}; }

 private:
  const A& a_;
  const B& b_;
};

struct SweepResult {
  // Distinct values seen at depth < max plus all values checked at max depth.
  std::size_t values_checked = 0;
  std::optional<Formula> counterexample;
};

// Checks `ok` on the value of every formula built from `atom_names` and _|_
// with connective nesting depth <= max_depth. Formulas with equal values are
// interchangeable under every connective, so each depth level is kept as a
// set of distinct values with one witness formula each; the last level is
// generated and checked without being stored. Modal connectives are included
// when the semantics defines them. Stops at the first failing value and
// returns a witness formula for it.
template <Semantics S, class Pred>
SweepResult sweep_formulas(const S& s, std::span<const std::string> atom_names,
                           std::size_t max_depth, Pred&& ok) {
  using V = typename S::value_type;
  SweepResult result;
  std::map<V, Formula> known;
  std::vector<std::pair<V, Formula>> level;

  auto admit = [&](V v, Formula f) -> bool {
    ++result.values_checked;
    if (!ok(v)) {
      result.counterexample = std::move(f);
      return false;
    }
    return true;
  };

  auto add = [&](V v, const Formula& f) -> bool {
    if (known.contains(v)) return true;
    if (!admit(v, f)) return false;
    known.emplace(v, f);
    level.emplace_back(std::move(v), f);
    return true;
  };

  if (!add(s.bottom(), Formula::bottom())) return result;
  for (const std::string& p : atom_names)
    if (!add(s.atom(p), Formula::atom(p))) return result;

  for (std::size_t d = 1; d <= max_depth; ++d) {
    // Snapshot of all values of depth < d.
    std::vector<std::pair<V, Formula>> prev(known.begin(), known.end());
    bool last = d == max_depth;
    auto emit = [&](V v, auto make_formula) -> bool {
      if (last) {
        if (known.contains(v)) return true;
        ++result.values_checked;
        if (!ok(v)) {
          result.counterexample = make_formula();
          return false;
        }
        return true;
      }
      return add(std::move(v), make_formula());
    };
    for (const auto& [va, fa] : prev) {
      if constexpr (S::kModal) {
        if (!emit(s.box(va), [&] { return Formula::box(fa); })) return result;
        if (!emit(s.diamond(va), [&] { return Formula::diamond(fa); })) return result;
      }
      for (const auto& [vb, fb] : prev) {
        if (!emit(s.conj(va, vb), [&] { return Formula::conj(fa, fb); })) return result;
        if (!emit(s.disj(va, vb), [&] { return Formula::disj(fa, fb); })) return result;
        if (!emit(s.implies(va, vb), [&] { return Formula::implies(fa, fb); })) return result;
      }
    }
  }
  return result;
}

}  // namespace hok
