#include <gtest/gtest.h>

#include <random>

#include "figures.hpp"

using namespace nwn;

TEST(CNuPN, Fig4Validates) { EXPECT_TRUE(validate_transfer(fig::fig4()).empty()); }

TEST(CNuPN, RowWithTwoOnes) {
  auto c = fig::fig4();
  c.add_transfer(0, {xv(2), xv(3), 0, 3});
  bool found = false;
  for (const auto& v : validate_transfer(c)) found |= v.condition == "row-multiple-ones";
  EXPECT_TRUE(found);
}

TEST(CNuPN, MissingDefault) {
  auto c = fig::fig4();
  c.transfers[0].erase(std::find(c.transfers[0].begin(), c.transfers[0].end(), TransferEntry{xv(1), xv(1), 4, 4}));
  auto v = validate_transfer(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].condition, "missing-default");
}

TEST(CNuPN, MultiTarget) {
  auto c = fig::fig4();
  c.add_transfer(0, {xv(2), xv(1), 0, 0});
  bool found = false;
  for (const auto& v : validate_transfer(c)) found |= v.condition == "multi-target";
  EXPECT_TRUE(found);
}

TEST(CNuPN, Fig4StagedFire) {
  auto s = cnupn_fire_staged(fig::fig4(), fig::fig2_init(), 0, NuMode{{0, 1, 2}});
  EXPECT_EQ(s.stage1, fig::fig4_stage1());
  EXPECT_EQ(s.stage2, fig::fig4_stage2());
  EXPECT_EQ(s.final, fig::fig4_result());
}

TEST(CNuPN, IdentityTransfersMatchNuPN) {
  auto n = fig::fig2();
  auto c = lift(n);
  EXPECT_EQ(cnupn_fire(c, fig::fig2_init(), 0, NuMode{{0, 1, 2}}), nupn_fire(n, fig::fig2_init(), 0, NuMode{{0, 1, 2}}));
}

TEST(CNuPN, EmptySourceMeansNoTransfer) {
  auto c = fig::fig5();
  NuConfig m{Vec{0, 0, 1, 0, 0, 0}, Vec{0, 1, 0, 0, 0, 0}, Vec{0, 0, 0, 1, 0, 0}};
  auto r = cnupn_fire(c, m, 0, NuMode{{1, 0, 2}});
  EXPECT_EQ(r, (NuConfig{Vec{0, 0, 1, 0, 0, 0}, Vec{0, 0, 0, 0, 1, 0}, Vec{0, 0, 0, 1, 0, 0}}));
}

TEST(RNuPN, Fig5Recognized) {
  auto r = is_rnupn(fig::fig5());
  ASSERT_TRUE(r.ok) << r.report;
  ASSERT_EQ(r.meta.special.size(), 1u);
  const auto& s = r.meta.special[0];
  EXPECT_EQ(s.r1, 0u);
  EXPECT_EQ(s.r2, 5u);
  EXPECT_EQ((std::vector<std::size_t>{s.p2, s.p3, s.p4, s.p5}), (std::vector<std::size_t>{1, 2, 3, 4}));
}

TEST(RNuPN, PureNuPNHasNoSpecialTransitions) {
  auto r = is_rnupn(lift(fig::fig2()));
  ASSERT_TRUE(r.ok);
  EXPECT_TRUE(r.meta.special.empty());
}

TEST(RNuPN, Fig4Rejected) {
  auto r = is_rnupn(fig::fig4());
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.report.find("more than one"), std::string::npos);
}

TEST(RNuPN, Fig5DirectStep) {
  auto c = fig::fig5();
  auto meta = is_rnupn(c).meta;
  NuMode e{{2, 0, 3}};
  EXPECT_EQ(rnupn_fire_direct(c, meta, fig::fig5_init(), 0, e), fig::fig5_result());
  EXPECT_EQ(cnupn_fire(c, fig::fig5_init(), 0, e), fig::fig5_result());
}

TEST(RNuPN, SameRenamePlaceAllowed) {
  auto c = fig::fig5();
  for (auto& e : c.transfers[0])
    if (!e.identity()) e.q = 0;
  auto r = is_rnupn(c);
  ASSERT_TRUE(r.ok) << r.report;
  NuMode e{{2, 0, 3}};
  EXPECT_EQ(rnupn_fire_direct(c, r.meta, fig::fig5_init(), 0, e), cnupn_fire(c, fig::fig5_init(), 0, e));
}

TEST(PnAsCNuPN, Fig1InsideOneTuple) {
  auto c = pn_as_cnupn(fig::fig1());
  EXPECT_TRUE(validate_transfer(c).empty());
  auto r = cnupn_fire(c, {Vec{4, 1, 1, 1, 1}}, 0, NuMode{{0}});
  EXPECT_EQ(r, NuConfig{(Vec{2, 0, 2, 2, 3})});
  EXPECT_TRUE(pn_as_cnupn(PetriNet{}).base.transitions().empty());
}

TEST(PnAsCNuPN, RandomNetsHaveValidTransfers) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    PetriNet pn;
    int np = 1 + rng() % 4, nt = rng() % 4;
    for (int p = 0; p < np; ++p) pn.add_place("p" + std::to_string(p));
    for (int t = 0; t < nt; ++t) {
      pn.add_transition("t" + std::to_string(t));
      pn.add_pre(rng() % np, t, rng() % 3);
      pn.add_post(t, rng() % np, rng() % 3);
    }
    EXPECT_TRUE(validate_transfer(pn_as_cnupn(pn)).empty());
  }
}

TEST(CNuPN, FramingForChannelFreeVariables) {
  auto c = fig::fig4();
  auto s = cnupn_fire_staged(c, fig::fig2_init(), 0, NuMode{{0, 1, 2}});
  // x1 has no outgoing channel: its tuple keeps everything except p1 (consumed), gains p4 from x3.
  EXPECT_EQ(s.final[0][0], fig::fig2_init()[0][0] - 1);
}
