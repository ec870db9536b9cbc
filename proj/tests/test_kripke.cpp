#include <gtest/gtest.h>

#include "hok/error.hpp"
#include "hok/kripke.hpp"
#include "hok/search.hpp"
#include "support.hpp"

namespace hok {
namespace {

using testing::chain;

PropModel two_chain(const Valuation& val) { return PropModel(chain({"w", "w'"}), val); }

TEST(BuildFrame, SingletonIsReflexive) {
  Frame f = Frame::build({"w"});
  EXPECT_EQ(f.pair_count(), 1u);
  EXPECT_TRUE(f.le("w", "w"));
}

TEST(BuildFrame, ChainClosure) {
  Frame f = chain({"m", "a", "e"});
  EXPECT_EQ(f.pair_count(), 6u);
  EXPECT_TRUE(f.le("m", "e"));
  EXPECT_FALSE(f.le("e", "m"));
  EXPECT_EQ(f.strict_pairs(), (std::vector<Frame::Edge>{{"a", "e"}, {"m", "a"}, {"m", "e"}}));
}

TEST(BuildFrame, SymmetricGeneratorsCloseToTotal) {
  std::vector<Frame::Edge> le{{"w", "w'"}, {"w'", "w"}};
  EXPECT_EQ(Frame::build({"w", "w'"}, le).pair_count(), 4u);
}

TEST(BuildFrame, Errors) {
  EXPECT_THROW(Frame::build({}), ModelError);
  std::vector<Frame::Edge> dangling{{"w", "x"}};
  EXPECT_THROW(Frame::build({"w"}, dangling), Error);
  EXPECT_THROW(Frame::build({"w", "w"}), ModelError);
  EXPECT_THROW(Frame::build({"bad name"}), ModelError);
  std::vector<PointSet> not_reflexive{PointSet(1)};
  EXPECT_THROW(Frame::from_successors({"w"}, not_reflexive), ModelError);
}

TEST(BuildPropModel, Heredity) {
  EXPECT_NO_THROW(two_chain({{"w'", {"p"}}}));
  try {
    two_chain({{"w", {"p"}}});
    FAIL();
  } catch (const HeredityError& e) {
    EXPECT_EQ(e.lower(), "w");
    EXPECT_EQ(e.upper(), "w'");
    EXPECT_EQ(e.atom(), "p");
  }
  EXPECT_NO_THROW(PropModel(chain({"m", "a", "e"}), {{"m", {"p"}}, {"a", {"p"}}, {"e", {"p", "q"}}}));
}

TEST(BuildPropModel, MissingWorldsDefaultToEmpty) {
  PropModel m(chain({"m", "a"}), {});
  EXPECT_TRUE(m.val("m").empty());
  EXPECT_THROW(PropModel(chain({"m"}), {{"x", {"p"}}}), Error);
  EXPECT_THROW(PropModel(chain({"m"}), {{"m", {"Bad"}}}), ModelError);
}

TEST(Forces, Examples) {
  PropModel single(Frame::build({"w"}), {{"w", {"p"}}});
  EXPECT_TRUE(forces(single, "w", parse("p")));
  PropModel m = two_chain({{"w'", {"p"}}});
  EXPECT_FALSE(forces(m, "w", parse("p|~p")));
  EXPECT_TRUE(forces(m, "w'", parse("p|~p")));
  EXPECT_FALSE(forces(m, "w", parse("~p")));
  EXPECT_TRUE(forces(m, "w", parse("~~p")));
  EXPECT_THROW(forces(m, "nowhere", parse("p")), UnknownName);
  EXPECT_THROW(forces(m, "w", parse("[]p")), SemanticsError);
}

TEST(Entails, Examples) {
  PropModel m = two_chain({{"w'", {"p"}}});
  std::vector<Formula> mp{parse("p -> q"), parse("p")};
  for (const auto& w : m.frame().worlds()) EXPECT_TRUE(entails(m, w, mp, parse("q")));
  PropModel single(Frame::build({"w"}), {{"w", {"p"}}});
  EXPECT_TRUE(entails(single, "w", {}, parse("p")));
  std::vector<Formula> gp{parse("p")};
  EXPECT_FALSE(entails(m, "w", gp, parse("q")));
}

TEST(ModelValid, Examples) {
  PropModel m = two_chain({{"w'", {"p"}}});
  EXPECT_TRUE(model_valid(m, {}, parse("p -> p")));
  EXPECT_FALSE(model_valid(m, {}, parse("p | ~p")));
  EXPECT_TRUE(model_valid(m, {}, parse("_|_ -> _|_")));
}

TEST(PartialCopy, Examples) {
  Frame k = chain({"m", "a", "e"});
  EXPECT_TRUE(is_partial_copy(k, k));
  EXPECT_TRUE(is_partial_copy(chain({"a", "e"}), k));
  EXPECT_FALSE(is_partial_copy(Frame::build({"m"}), k));
  EXPECT_FALSE(is_partial_copy(Frame::build({"a", "e"}), k));
  EXPECT_FALSE(is_partial_copy(chain({"a", "x"}), k));
}

TEST(UpwardRestrict, Examples) {
  Frame k = chain({"m", "a", "e"});
  Frame r = upward_restrict(k, "a");
  EXPECT_EQ(r, chain({"a", "e"}));
  EXPECT_EQ(upward_restrict(k, "e"), Frame::build({"e"}));
  EXPECT_EQ(upward_restrict(k, "m"), k);
  EXPECT_THROW(upward_restrict(k, "x"), UnknownName);
  PropModel m(k, {{"a", {"p"}}, {"e", {"p"}}});
  EXPECT_EQ(upward_restrict(m, "a").val("a"), (std::set<std::string>{"p"}));
}

TEST(KripkeProperties, UpwardRestrictIsAlwaysAPartialCopy) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& up : preorders(n)) {
      Frame f = Frame::from_successors(canonical_worlds(n), up);
      for (const auto& w : f.worlds()) ASSERT_TRUE(is_partial_copy(upward_restrict(f, w), f));
    }
}

TEST(KripkeProperties, BottomFalseAndEmptyGammaIsForcing) {
  testing::Rng rng(11);
  std::vector<std::string> atoms{"p", "q"};
  SearchBounds b{3, 2, 1, Logic::kProp};
  std::size_t models = 0;
  enumerate_models(b, [&](const AnyModel& any) {
    const auto& m = std::get<PropModel>(any);
    ++models;
    Formula f = testing::random_formula(rng, 4, atoms, false);
    for (const auto& w : m.frame().worlds()) {
      EXPECT_FALSE(forces(m, w, Formula::bottom()));
      EXPECT_EQ(entails(m, w, {}, f), forces(m, w, f));
    }
    return true;
  });
  EXPECT_GT(models, 100u);
}

TEST(KripkeProperties, BitsetForcingMatchesPointwiseOracle) {
  testing::Rng rng(5);
  std::vector<std::string> atoms{"p", "q"};
  SearchBounds b{3, 2, 1, Logic::kProp};
  enumerate_models(b, [&](const AnyModel& any) {
    const auto& m = std::get<PropModel>(any);
    for (int i = 0; i < 4; ++i) {
      Formula f = testing::random_formula(rng, 4, atoms, false);
      PointSet ext = extension(PropSemantics(m), f);
      for (std::size_t w = 0; w < m.frame().size(); ++w)
        if (ext[w] != testing::oracle_forces(m, w, f)) {
          ADD_FAILURE() << render(f) << " at " << m.frame().name(w) << "\n" << to_text(m);
          return false;
        }
    }
    return true;
  });
}

TEST(KripkeProperties, MonotonicityOnAllModelsUpToFourWorlds) {
  SearchBounds b{4, 1, 1, Logic::kProp};
  std::vector<std::string> atoms{"p1"};
  enumerate_models(b, [&](const AnyModel& any) {
    const auto& m = std::get<PropModel>(any);
    PropSemantics s(m);
    auto res = sweep_formulas(s, atoms, 3, [&](const PointSet& v) { return is_up_closed(v, m.frame().successors()); });
    if (res.counterexample) ADD_FAILURE() << render(*res.counterexample) << "\n" << to_text(m);
    return !res.counterexample;
  });
}

}  // namespace
}  // namespace hok
