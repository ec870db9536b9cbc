#include <gtest/gtest.h>

#include <sstream>

#include "hok/error.hpp"
#include "hok/higher_order.hpp"
#include "hok/model_io.hpp"
#include "support.hpp"

namespace hok {
namespace {

using Relations = HigherOrderModel::Relations;

HigherOrderModel lifted_timeline() {
  std::vector<Frame::Edge> succ{{"K", "K'"}, {"K'", "K'"}};
  return lift(HomogeneousModel(testing::timeline(succ, false)));
}

TEST(Unirelational, Examples) {
  PropModel m(testing::chain({"a", "b"}), {});
  EXPECT_TRUE(is_unirelational(wrap(m)));
  EXPECT_FALSE(is_unirelational(wrap(testing::three_world_model(), ModalRule::kMonotone)));
  EXPECT_TRUE(is_unirelational(lifted_timeline()));
  Relations two{{"succ", {}}, {"other", {}}};
  std::vector<std::pair<std::string, HigherOrderModel>> objects{{"A", wrap(m)}};
  auto wide = HigherOrderModel::level_n(objects, two, LevelPolicy{{}, "succ", {}, {}});
  EXPECT_FALSE(is_unirelational(wide));
  EXPECT_TRUE(is_finitely_relational(wide));
  EXPECT_TRUE(is_finitely_relational(wrap(testing::three_world_model(), ModalRule::kLocal)));
}

TEST(HigherOrderModel, Errors) {
  EXPECT_THROW(HigherOrderModel::level0({"w"}, {}, {}, {}), ModelError);
  Relations dangling{{"le", {{"w", "x"}}}};
  EXPECT_THROW(HigherOrderModel::level0({"w"}, dangling, {}, LevelPolicy{"le", {}, {}, {}}), ModelError);
  Relations le{{"le", {{"a", "b"}}}};
  EXPECT_THROW(HigherOrderModel::level0({"a", "b"}, le, {{"a", {"p"}}}, LevelPolicy{"le", {}, {}, {}}),
               HeredityError);
  EXPECT_THROW(HigherOrderModel::level0({"a", "b"}, le, {}, LevelPolicy{"le", "r", {}, {}}), ModelError);
  PropModel m(Frame::build({"w"}), {});
  std::vector<std::pair<std::string, HigherOrderModel>> mixed{{"A", wrap(m)}, {"B", lifted_timeline()}};
  EXPECT_THROW(HigherOrderModel::level_n(mixed, Relations{{"s", {}}}, {}), ModelError);
}

TEST(Evaluate, LiftedTimeline) {
  HigherOrderModel t = lifted_timeline();
  EXPECT_EQ(t.level(), 1u);
  EXPECT_TRUE(evaluate(t, {"K", "m"}, parse("<>p")));
  EXPECT_FALSE(evaluate(t, {"K", "m"}, parse("p")));
  EXPECT_TRUE(evaluate(t, {"K'", "a"}, parse("[]p")));
  EXPECT_TRUE(evaluate_object(t, {"K"}, parse("<>p")));
  EXPECT_FALSE(evaluate_object(t, {"K"}, parse("p")));
  EXPECT_TRUE(evaluate_object(t, {}, parse("[]p")));
  EXPECT_THROW(evaluate(t, {"K"}, parse("p")), UnknownName);
  EXPECT_THROW(evaluate(t, {"J", "m"}, parse("p")), UnknownName);
}

TEST(Evaluate, PolicyGap) {
  std::vector<std::pair<std::string, HigherOrderModel>> objects{{"A", wrap(PropModel(Frame::build({"w"}), {}))}};
  auto plain = HigherOrderModel::level_n(objects, Relations{{"s", {{"A", "A"}}}}, {});
  EXPECT_TRUE(evaluate(plain, {"A", "w"}, parse("p -> p")));
  EXPECT_THROW(evaluate(plain, {"A", "w"}, parse("[]p")), SemanticsError);
}

TEST(Evaluate, LevelTwoUsesTheOutermostModalRelation) {
  HigherOrderModel inner = lifted_timeline();
  HigherOrderModel other = lift(HomogeneousModel(testing::timeline({}, false)));
  std::vector<std::pair<std::string, HigherOrderModel>> objects{{"X", inner}, {"Y", other}};
  auto top = HigherOrderModel::level_n(objects, Relations{{"next", {{"X", "Y"}}}}, LevelPolicy{{}, "next", {}, {}});
  EXPECT_EQ(top.level(), 2u);
  // At X the level-2 relation moves to Y with the same submodel and world.
  EXPECT_TRUE(evaluate(top, {"X", "K'", "m"}, parse("<>p")));
  EXPECT_FALSE(evaluate(top, {"X", "K", "m"}, parse("<>p")));
  EXPECT_TRUE(evaluate(top, {"Y", "K", "m"}, parse("[]_|_")));
}

TEST(HigherOrderProperties, WrapMatchesPropositionalForcing) {
  testing::Rng rng(131);
  std::vector<std::string> atoms{"p1"};
  SearchBounds b{3, 1, 1, Logic::kProp};
  enumerate_models(b, [&](const AnyModel& any) {
    const auto& m = std::get<PropModel>(any);
    HigherOrderModel h = wrap(m);
    for (int i = 0; i < 3; ++i) {
      Formula f = testing::random_formula(rng, 3, atoms, false);
      for (const auto& w : m.frame().worlds())
        if (evaluate(h, {w}, f) != forces(m, w, f)) {
          ADD_FAILURE() << render(f) << " at " << w << "\n" << to_text(m);
          return false;
        }
    }
    return true;
  });
}

TEST(HigherOrderProperties, WrapMatchesBirelationalForcing) {
  std::vector<std::string> atoms{"p1"};
  SearchBounds b{3, 1, 1, Logic::kMk};
  enumerate_models(b, [&](const AnyModel& any) {
    const auto& m = std::get<BirelationalStructure>(any);
    HigherOrderModel ik_wrap = wrap(m, ModalRule::kMonotone);
    HigherOrderModel mk_wrap = wrap(m, ModalRule::kLocal);
    HigherOrderSemantics hik(ik_wrap);
    HigherOrderSemantics hmk(mk_wrap);
    IkSemantics ik(m);
    MkSemantics mk(m);
    PairedSemantics a(hik, ik);
    PairedSemantics b2(hmk, mk);
    auto same = [](const auto& v) { return v.first == v.second; };
    auto ra = sweep_formulas(a, atoms, 2, same);
    auto rb = sweep_formulas(b2, atoms, 2, same);
    if (ra.counterexample) ADD_FAILURE() << "ik " << render(*ra.counterexample) << "\n" << to_text(m);
    if (rb.counterexample) ADD_FAILURE() << "mk " << render(*rb.counterexample) << "\n" << to_text(m);
    return !ra.counterexample && !rb.counterexample;
  });
}

TEST(HigherOrderProperties, LiftMatchesHomogeneousForcing) {
  testing::Rng rng(137);
  std::vector<std::string> atoms{"p", "q"};
  for (int trial = 0; trial < 100; ++trial) {
    GeneralModel g = testing::random_general(rng, GeneralClass::kHomogeneous, 3, 4, atoms);
    HomogeneousModel h(g);
    HigherOrderModel l = lift(h);
    HigherOrderSemantics hs(l);
    HomogeneousSemantics direct(h);
    ASSERT_EQ(hs.leaf_count(), direct.points().size());
    for (std::size_t i = 0; i < hs.leaf_count(); ++i) {
      auto names = hs.leaf_names(i);
      ASSERT_EQ(direct.points().index(names[0], names[1]), i);
    }
    PairedSemantics both(hs, direct);
    auto res = sweep_formulas(both, atoms, 2, [](const auto& v) { return v.first == v.second; });
    ASSERT_FALSE(res.counterexample) << render(*res.counterexample) << "\n" << to_text(g);
  }
}

TEST(HigherOrderProperties, ReflexiveSuccValidatesT) {
  testing::Rng rng(139);
  std::vector<std::string> atoms{"p"};
  for (int trial = 0; trial < 40; ++trial) {
    auto succ = testing::close_succ(testing::random_succ(rng, 3), 3, true, false);
    GeneralModel g = testing::random_general(rng, GeneralClass::kHomogeneous, 3, 3, atoms, &succ);
    HigherOrderModel l = lift(HomogeneousModel(g));
    for (int i = 0; i < 5; ++i) {
      Formula a = testing::random_formula(rng, 2, atoms);
      ASSERT_TRUE(evaluate_object(l, {}, Formula::implies(Formula::box(a), a))) << render(a) << "\n" << to_text(g);
    }
  }
}

TEST(ModelIo, HigherOrderBlock) {
  const char* text = R"(# lifted pair
nmodel T level 1
  model K
  worlds m a
  le m a
  val a : p
  end
  model K'
  worlds m a
  le m a
  val m : p
  val a : p
  end
  rel succ K K'
  modal succ local
end
)";
  ModelFile f = parse_model_file(text);
  ASSERT_EQ(f.nmodels.size(), 1u);
  HigherOrderModel t = to_higher_order(f.nmodels[0]);
  EXPECT_EQ(t.level(), 1u);
  EXPECT_EQ(t.relation_edges("succ"), (std::vector<Frame::Edge>{{"K", "K'"}}));
  EXPECT_TRUE(evaluate(t, {"K", "m"}, parse("<>p")));
  EXPECT_FALSE(evaluate(t, {"K'", "m"}, parse("<>p")));
  std::ostringstream out;
  write_higher_order(out, "T", t);
  HigherOrderModel again = to_higher_order(parse_model_file(out.str()).nmodels.at(0));
  EXPECT_EQ(again.names(), t.names());
  EXPECT_EQ(again.relation_edges("succ"), t.relation_edges("succ"));
  EXPECT_TRUE(evaluate(again, {"K", "m"}, parse("<>p")));
}

TEST(ModelIo, HigherOrderLevelMismatch) {
  const char* text = "nmodel T level 2\n model K\n worlds w\n end\n rel s K K\nend\n";
  EXPECT_THROW(to_higher_order(parse_model_file(text).nmodels.at(0)), ModelError);
}

}  // namespace
}  // namespace hok
