#pragma once

// Bounded enumeration of small models and countermodel search over them.
// Models use canonical labels: worlds w1..wn, atoms p1..pk, submodels K1..Km.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hok/birelational.hpp"
#include "hok/error.hpp"
#include "hok/formula.hpp"
#include "hok/general.hpp"
#include "hok/kripke.hpp"
#include "hok/model_io.hpp"
#include "hok/semantics.hpp"

namespace hok {

enum class Logic { kProp, kIk, kMk, kPartial, kHomogeneous, kClassicalK };

inline std::string to_string(Logic l) {
  switch (l) {
    case Logic::kProp:
      return "prop";
    case Logic::kIk:
      return "ik";
    case Logic::kMk:
      return "mk";
    case Logic::kPartial:
      return "partial";
    case Logic::kHomogeneous:
      return "homogeneous";
    case Logic::kClassicalK:
      return "classicalK";
  }
  return "?";
}

inline Logic parse_logic(std::string_view s) {
  for (Logic l : {Logic::kProp, Logic::kIk, Logic::kMk, Logic::kPartial, Logic::kHomogeneous, Logic::kClassicalK})
    if (to_string(l) == s) return l;
  throw Error("unknown logic '" + std::string(s) + "'");
}

inline constexpr std::size_t kMaxEnumeratedWorlds = 4;

struct SearchBounds {
  std::size_t max_worlds = 1;
  std::size_t max_atoms = 1;
  std::size_t max_submodels = 1;
  Logic logic = Logic::kProp;
  // Partial and homogeneous classes only: every submodel frame has a least world.
  bool rooted = false;

  void validate() const {
    if (max_worlds == 0 || max_atoms == 0 || max_submodels == 0) throw Error("search bounds must be at least 1");
    if (max_worlds > kMaxEnumeratedWorlds)
      throw Error("enumeration supports at most " + std::to_string(kMaxEnumeratedWorlds) + " worlds");
  }
};

using AnyModel = std::variant<PropModel, BirelationalStructure, GeneralModel>;

inline std::string to_text(const AnyModel& m) {
  return std::visit([](const auto& x) { return to_text(x); }, m);
}

// Canonical names.
inline std::vector<std::string> canonical_worlds(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

inline std::vector<std::string> canonical_atoms(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

inline std::vector<std::string> canonical_submodels(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= m; ++i) out.push_back("K" + std::to_string(i));
  return out;
}

// All preorders on n labeled points as successor sets, in increasing order
// of their adjacency bitmask. Sizes 1, 4, 29, 355 for n = 1..4.
inline const std::vector<std::vector<PointSet>>& preorders(std::size_t n) {
  if (n == 0 || n > kMaxEnumeratedWorlds) throw Error("preorders are tabulated for 1 to 4 points");
  static const std::vector<std::vector<std::vector<PointSet>>> table = [] {
    std::vector<std::vector<std::vector<PointSet>>> t(kMaxEnumeratedWorlds + 1);
    for (std::size_t size = 1; size <= kMaxEnumeratedWorlds; ++size) {
      std::vector<std::pair<std::size_t, std::size_t>> off;
      for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = 0; b < size; ++b)
          if (a != b) off.emplace_back(a, b);
      for (std::uint32_t mask = 0; mask < (1u << off.size()); ++mask) {
        std::vector<PointSet> up(size, PointSet(size));
        for (std::size_t a = 0; a < size; ++a) up[a].set(a);
        for (std::size_t e = 0; e < off.size(); ++e)
          if (mask & (1u << e)) up[off[e].first].set(off[e].second);
        bool transitive = true;
        for (std::size_t a = 0; a < size && transitive; ++a)
          for (auto b = up[a].find_first(); b != PointSet::npos && transitive; b = up[a].find_next(b))
            transitive = up[b].is_subset_of(up[a]);
        if (transitive) t[size].push_back(std::move(up));
      }
    }
    return t;
  }();
  return table[n];
}

// Up-closed subsets of a preorder given by successor sets, in increasing
// bitmask order.
inline std::vector<PointSet> up_sets(const std::vector<PointSet>& up) {
  const std::size_t n = up.size();
  std::vector<PointSet> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    PointSet s(n, mask);
    if (is_up_closed(s, up)) out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

// Calls `fn` with each combination: one index < radix[i] per position.
// Stops when fn returns false; returns false in that case.
template <class Fn>
bool for_each_tuple(const std::vector<std::size_t>& radix, Fn&& fn) {
  for (std::size_t r : radix)
    if (r == 0) return true;
  std::vector<std::size_t> digits(radix.size(), 0);
  while (true) {
    if (!fn(digits)) return false;
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (++digits[i] < radix[i]) break;
      digits[i] = 0;
      if (i == 0) return true;
    }
    if (digits.empty()) return true;
  }
}

inline bool is_rooted(const std::vector<PointSet>& up) {
  for (const auto& s : up)
    if (s.all()) return true;
  return false;
}

// Calls fn(valuation) for every hereditary valuation of `atoms` on the given
// worlds and preorder.
template <class Fn>
bool for_each_valuation(const std::vector<std::string>& worlds, const std::vector<PointSet>& up,
                        const std::vector<std::string>& atoms, Fn&& fn) {
  std::vector<PointSet> choices = up_sets(up);
  std::vector<std::size_t> radix(atoms.size(), choices.size());
  return for_each_tuple(radix, [&](const std::vector<std::size_t>& pick) {
    Valuation val;
    for (const auto& w : worlds) val[w];
    for (std::size_t a = 0; a < atoms.size(); ++a)
      for (std::size_t w = 0; w < worlds.size(); ++w)
        if (choices[pick[a]][w]) val[worlds[w]].insert(atoms[a]);
    return fn(val);
  });
}

// Subsets of `total` elements, as bitmasks in increasing order.
template <class Fn>
bool for_each_subset(std::size_t total, Fn&& fn) {
  if (total >= 32) throw Error("relation space too large to enumerate");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask)
    if (!fn(mask)) return false;
  return true;
}

template <class Fn>
bool enumerate_single(const SearchBounds& b, const std::vector<std::string>& atoms, Fn& fn) {
  for (std::size_t n = 1; n <= b.max_worlds; ++n) {
    auto worlds = canonical_worlds(n);
    for (const auto& up : preorders(n)) {
      Frame frame = Frame::from_successors(worlds, up);
      if (b.logic == Logic::kProp) {
        if (!for_each_valuation(worlds, up, atoms,
                                [&](const Valuation& v) { return fn(AnyModel(PropModel(frame, v))); }))
          return false;
        continue;
      }
      const ModelClass need = b.logic == Logic::kIk ? ModelClass::kBirelational : ModelClass::kStrong;
      bool go = for_each_subset(n * n, [&](std::uint64_t mask) {
        std::vector<Frame::Edge> r;
        for (std::size_t e = 0; e < n * n; ++e)
          if (mask & (std::uint64_t{1} << e)) r.emplace_back(worlds[e / n], worlds[e % n]);
        BirelationalStructure shape(PropModel(frame, {}), r);
        if (classify(shape) < need) return true;
        return for_each_valuation(worlds, up, atoms, [&](const Valuation& v) {
          return fn(AnyModel(BirelationalStructure(PropModel(frame, v), r)));
        });
      });
      if (!go) return false;
    }
  }
  return true;
}

// Each submodel frame is given as a world subset (bitmask over the
// reference frame). Enumerates valuations per submodel and succ relations.
template <class Fn>
bool enumerate_family(const std::vector<std::string>& worlds, const std::vector<PointSet>& up,
                      const std::vector<std::uint32_t>& carriers, const std::vector<std::string>& atoms, Fn& fn) {
  const std::size_t m = carriers.size();
  const auto ids = canonical_submodels(m);
  std::vector<Frame> frames;
  std::vector<std::vector<std::string>> sub_worlds;
  std::vector<std::vector<PointSet>> sub_up;
  for (std::uint32_t c : carriers) {
    std::vector<std::size_t> keep;
    for (std::size_t w = 0; w < worlds.size(); ++w)
      if (c & (1u << w)) keep.push_back(w);
    std::vector<std::string> names;
    std::vector<PointSet> u(keep.size(), PointSet(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) {
      names.push_back(worlds[keep[a]]);
      for (std::size_t b2 = 0; b2 < keep.size(); ++b2)
        if (up[keep[a]][keep[b2]]) u[a].set(b2);
    }
    frames.push_back(Frame::from_successors(names, u));
    sub_worlds.push_back(std::move(names));
    sub_up.push_back(std::move(u));
  }
  // Valuation choices per submodel.
  std::vector<std::vector<Valuation>> vals(m);
  for (std::size_t k = 0; k < m; ++k)
    for_each_valuation(sub_worlds[k], sub_up[k], atoms, [&](const Valuation& v) {
      vals[k].push_back(v);
      return true;
    });
  std::vector<std::size_t> radix;
  for (const auto& v : vals) radix.push_back(v.size());
  return for_each_tuple(radix, [&](const std::vector<std::size_t>& pick) {
    std::map<std::string, PropModel> subs;
    for (std::size_t k = 0; k < m; ++k) subs.emplace(ids[k], PropModel(frames[k], vals[k][pick[k]]));
    return for_each_subset(m * m, [&](std::uint64_t mask) {
      std::vector<Frame::Edge> succ;
      for (std::size_t e = 0; e < m * m; ++e)
        if (mask & (std::uint64_t{1} << e)) succ.emplace_back(ids[e / m], ids[e % m]);
      return fn(AnyModel(GeneralModel(subs, succ)));
    });
  });
}

template <class Fn>
bool enumerate_general(const SearchBounds& b, const std::vector<std::string>& atoms, Fn& fn) {
  const bool singleton = b.logic == Logic::kClassicalK;
  const std::size_t max_n = singleton ? 1 : b.max_worlds;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto worlds = canonical_worlds(n);
    const std::uint32_t full = (1u << n) - 1;
    for (const auto& up : preorders(n)) {
      if (b.rooted && !is_rooted(up)) continue;
      // Carriers available to K2..Km.
      std::vector<std::uint32_t> options;
      if (b.logic == Logic::kPartial) {
        for (const auto& s : up_sets(up)) {
          if (s.none()) continue;
          if (b.rooted) {
            bool has_root = false;
            for (auto w = s.find_first(); w != PointSet::npos && !has_root; w = s.find_next(w))
              has_root = s.is_subset_of(up[w]);
            if (!has_root) continue;
          }
          options.push_back(static_cast<std::uint32_t>(s.to_ulong()));
        }
      } else {
        options.push_back(full);
      }
      for (std::size_t m = 1; m <= b.max_submodels; ++m) {
        std::vector<std::size_t> radix(m - 1, options.size());
        bool go = for_each_tuple(radix, [&](const std::vector<std::size_t>& pick) {
          std::vector<std::uint32_t> carriers{full};
          for (std::size_t i : pick) carriers.push_back(options[i]);
          return enumerate_family(worlds, up, carriers, atoms, fn);
        });
        if (!go) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

// Streams every model of the class within the bounds, in a fixed order.
// `fn` returns false to stop early; the return value is false in that case.
// Partial models use K1 as the reference: it carries the whole frame and
// every other submodel lives on a nonempty up-closed subset of it.
inline bool enumerate_models(const SearchBounds& b, const std::vector<std::string>& atoms,
                             const std::function<bool(const AnyModel&)>& fn) {
  b.validate();
  auto call = [&](AnyModel m) { return fn(m); };
  switch (b.logic) {
    case Logic::kProp:
    case Logic::kIk:
    case Logic::kMk:
      return detail::enumerate_single(b, atoms, call);
    case Logic::kPartial:
    case Logic::kHomogeneous:
    case Logic::kClassicalK:
      return detail::enumerate_general(b, atoms, call);
  }
  return true;
}

inline bool enumerate_models(const SearchBounds& b, const std::function<bool(const AnyModel&)>& fn) {
  return enumerate_models(b, canonical_atoms(b.max_atoms), fn);
}

// Entailment extension of gamma => f on a model under the logic, together
// with a name (submodel, world) for each point. The submodel part is empty
// for single-model logics.
struct Evaluation {
  PointSet holds;
  // Points where every member of gamma holds and f fails.
  PointSet refuted;
  std::vector<std::pair<std::string, std::string>> points;
};

inline Evaluation evaluate_entailment(const AnyModel& any, Logic logic, std::span<const Formula> gamma,
                                      const Formula& f) {
  Evaluation out;
  auto refute = [&](const auto& sem) {
    PointSet lhs = ~sem.bottom();
    for (const auto& g : gamma) lhs &= extension(sem, g);
    out.holds = entailment_extension(sem, gamma, f);
    out.refuted = lhs - extension(sem, f);
  };
  auto single = [&](const Frame& frame, const auto& sem) {
    refute(sem);
    for (const auto& w : frame.worlds()) out.points.emplace_back("", w);
  };
  auto general = [&](const auto& sem) {
    refute(sem);
    for (std::size_t p = 0; p < sem.points().size(); ++p) out.points.push_back(sem.points().name(p));
  };
  switch (logic) {
    case Logic::kProp: {
      const auto* m = std::get_if<PropModel>(&any);
      if (!m) throw SemanticsError("prop logic needs a model without r edges");
      single(m->frame(), PropSemantics(*m));
      break;
    }
    case Logic::kIk:
    case Logic::kMk: {
      if (const auto* p = std::get_if<PropModel>(&any)) {
        BirelationalStructure m(*p, {});
        return evaluate_entailment(AnyModel(m), logic, gamma, f);
      }
      const auto* m = std::get_if<BirelationalStructure>(&any);
      if (!m) throw SemanticsError(to_string(logic) + " needs a single birelational model");
      if (logic == Logic::kIk) single(m->frame(), IkSemantics(*m));
      else single(m->frame(), MkSemantics(*m));
      break;
    }
    case Logic::kPartial: {
      const auto* g = std::get_if<GeneralModel>(&any);
      if (!g) throw SemanticsError("partial logic needs a general model");
      PartialModel pm(*g);
      general(PartialSemantics(pm));
      break;
    }
    case Logic::kHomogeneous:
    case Logic::kClassicalK: {
      const auto* g = std::get_if<GeneralModel>(&any);
      if (!g) throw SemanticsError(to_string(logic) + " logic needs a general model");
      HomogeneousModel hm(*g);
      if (logic == Logic::kClassicalK && hm.frame().size() != 1)
        throw SemanticsError("classicalK needs singleton frames");
      general(HomogeneousSemantics(hm));
      break;
    }
  }
  return out;
}

struct SearchStats {
  std::size_t models_examined = 0;
  double elapsed_seconds = 0;
};

struct SearchOutcome {
  bool found = false;
  std::optional<AnyModel> model;
  std::optional<std::string> model_text;
  // (submodel, world); submodel is empty for single-model logics.
  std::optional<std::pair<std::string, std::string>> locus;
  SearchStats stats;
};

// Vocabulary used by the search: the atoms of gamma and f in sorted order,
// at most max_atoms of them. Atoms beyond the cap are false everywhere.
inline std::vector<std::string> search_atoms(std::span<const Formula> gamma, const Formula& f,
                                             std::size_t max_atoms) {
  std::set<std::string> all = atoms(f);
  for (const auto& g : gamma) {
    auto more = atoms(g);
    all.insert(more.begin(), more.end());
  }
  std::vector<std::string> out(all.begin(), all.end());
  if (out.size() > max_atoms) out.resize(max_atoms);
  return out;
}

// First enumerated model with a point where gamma holds and f fails.
inline SearchOutcome find_countermodel(const Formula& f, std::span<const Formula> gamma, const SearchBounds& b) {
  if (b.logic == Logic::kProp) {
    if (!is_modal_free(f)) throw SemanticsError("prop logic has no modal connectives");
    for (const auto& g : gamma)
      if (!is_modal_free(g)) throw SemanticsError("prop logic has no modal connectives");
  }
  auto start = std::chrono::steady_clock::now();
  SearchOutcome out;
  enumerate_models(b, search_atoms(gamma, f, b.max_atoms), [&](const AnyModel& m) {
    ++out.stats.models_examined;
    Evaluation ev = evaluate_entailment(m, b.logic, gamma, f);
    if (ev.refuted.none()) return true;
    std::size_t p = ev.refuted.find_first();
    out.found = true;
    out.model = m;
    out.model_text = to_text(m);
    out.locus = ev.points[p];
    return false;
  });
  out.stats.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace hok
