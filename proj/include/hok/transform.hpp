#pragma once

// Flattening a general model into one birelational structure: each pair
// <w, K> becomes a world, <= stays inside each submodel and K > K' becomes
// R between the copies of the same world.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hok/birelational.hpp"
#include "hok/error.hpp"
#include "hok/general.hpp"

namespace hok {

struct FlatWorld {
  std::string world;
  std::string submodel;

  friend auto operator<=>(const FlatWorld&, const FlatWorld&) = default;
};

// World name of <w, K> in the flattened structure.
inline std::string flat_name(std::string_view world, std::string_view submodel) {
  return std::string(world) + "@" + std::string(submodel);
}

struct Flattened {
  BirelationalStructure model;
  // Indexed like model.frame().worlds().
  std::vector<FlatWorld> origin;

  std::size_t index(std::string_view world, std::string_view submodel) const {
    return model.frame().index(flat_name(world, submodel));
  }
};

inline Flattened flatten(const GeneralModel& g) {
  std::vector<std::string> names;
  std::map<std::string, FlatWorld> origin;
  std::vector<Frame::Edge> le;
  std::vector<Frame::Edge> r;
  Valuation val;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const PropModel& m = g.submodel(k);
    const Frame& f = m.frame();
    for (std::size_t w = 0; w < f.size(); ++w) {
      std::string n = flat_name(f.name(w), g.id(k));
      if (!origin.emplace(n, FlatWorld{f.name(w), g.id(k)}).second)
        throw ModelError("flattened world name '" + n + "' is ambiguous");
      names.push_back(n);
      val[n] = m.val(w);
      for (std::size_t v = 0; v < f.size(); ++v)
        if (v != w && f.le(w, v)) le.emplace_back(n, flat_name(f.name(v), g.id(k)));
    }
    for (std::size_t k2 = 0; k2 < g.size(); ++k2) {
      if (!g.succ(k, k2)) continue;
      const Frame& f2 = g.submodel(k2).frame();
      for (const auto& w : f.worlds())
        if (f2.contains(w)) r.emplace_back(flat_name(w, g.id(k)), flat_name(w, g.id(k2)));
    }
  }
  Frame frame = Frame::build(std::move(names), le);
  Flattened out{BirelationalStructure(PropModel(frame, val), r), {}};
  for (const auto& w : out.model.frame().worlds()) out.origin.push_back(origin.at(w));
  return out;
}

// F1-F4 reports for flatten(g). For partial inputs F1 and F2 hold with unique
// witnesses; for homogeneous inputs all four do.
inline std::vector<ConditionReport> verify_flatten_class(const GeneralModel& g) {
  return check_all_conditions(flatten(g).model);
}

enum class GeneralClass { kPartial, kHomogeneous };

struct Disagreement {
  std::string submodel;
  std::string world;
  std::size_t gamma_index = 0;
  std::size_t formula_index = 0;
  bool general_side = false;
  bool flat_side = false;
};

struct EquivalenceReport {
  GeneralClass compared_as = GeneralClass::kPartial;
  std::size_t comparisons = 0;
  std::vector<Disagreement> disagreements;
};

// Compares entailment on g (partial semantics against IK on the flattening,
// or homogeneous semantics against MK) at every (submodel, world), for every
// gamma and formula. An empty `gammas` list means the single empty gamma.
inline EquivalenceReport equivalence_report(const GeneralModel& g, GeneralClass as,
                                            std::span<const Formula> formulas,
                                            std::span<const std::vector<Formula>> gammas = {}) {
  EquivalenceReport rep;
  rep.compared_as = as;
  Flattened flat = flatten(g);
  const std::vector<Formula> no_gamma;
  std::vector<std::span<const Formula>> gamma_list;
  if (gammas.empty()) gamma_list.emplace_back(no_gamma);
  for (const auto& gm : gammas) gamma_list.emplace_back(gm);

  auto compare = [&](const auto& general_sem, const auto& flat_sem) {
    const GeneralPoints& pts = general_sem.points();
    for (std::size_t gi = 0; gi < gamma_list.size(); ++gi) {
      for (std::size_t fi = 0; fi < formulas.size(); ++fi) {
        PointSet lhs = entailment_extension(general_sem, gamma_list[gi], formulas[fi]);
        PointSet rhs = entailment_extension(flat_sem, gamma_list[gi], formulas[fi]);
        for (std::size_t p = 0; p < pts.size(); ++p) {
          auto [k, w] = pts.name(p);
          bool a = lhs[p];
          bool b = rhs[flat.index(w, k)];
          ++rep.comparisons;
          if (a != b) rep.disagreements.push_back({k, w, gi, fi, a, b});
        }
      }
    }
  };

  if (as == GeneralClass::kPartial) {
    PartialModel pm(g);
    compare(PartialSemantics(pm), IkSemantics(flat.model));
  } else {
    HomogeneousModel hm(g);
    compare(HomogeneousSemantics(hm), MkSemantics(flat.model));
  }
  return rep;
}

}  // namespace hok
