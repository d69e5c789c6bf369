#include <gtest/gtest.h>

#include <random>

#include "nwn/petri.hpp"

using namespace nwn;

static PetriNet fig1() {
  PetriNet n;
  for (auto p : {"p1", "p2", "p3", "p4", "p5"}) n.add_place(p);
  auto t = n.add_transition("t");
  n.add_pre(n.place("p1"), t, 2);
  n.add_pre(n.place("p2"), t);
  n.add_post(t, n.place("p3"));
  n.add_post(t, n.place("p4"));
  n.add_post(t, n.place("p5"), 2);
  return n;
}

TEST(Petri, Fig1Firing) {
  auto n = fig1();
  Vec m{4, 1, 1, 1, 1};
  EXPECT_EQ(pn_fire(n, m, "t"), (Vec{2, 0, 2, 2, 3}));
}

TEST(Petri, NotEnabled) {
  auto n = fig1();
  EXPECT_THROW(pn_fire(n, Vec{1, 1, 0, 0, 0}, "t"), Error);
  try {
    pn_fire(n, Vec{1, 1, 0, 0, 0}, "t");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotEnabled);
  }
}

TEST(Petri, EmptyFlowIsIdentity) {
  PetriNet n;
  n.add_place("p");
  n.add_transition("t");
  EXPECT_EQ(pn_fire(n, Vec{3}, "t"), Vec{3});
}

TEST(Petri, EmptyNet) {
  auto b = empty_net();
  EXPECT_TRUE(b.places().empty());
  EXPECT_EQ(b, empty_net());
  EXPECT_EQ(marking_to_string(b, b.marking()), "ε");
  try {
    pn_fire(b, b.marking(), "t");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownTransition);
  }
}

TEST(Petri, TokenConservationAndDeterminism) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 300; ++it) {
    PetriNet n;
    int np = 1 + rng() % 4;
    for (int p = 0; p < np; ++p) n.add_place("p" + std::to_string(p));
    auto t = n.add_transition("t");
    for (int p = 0; p < np; ++p) {
      n.add_pre(p, t, rng() % 3);
      n.add_post(t, p, rng() % 3);
    }
    Vec m(np);
    for (int p = 0; p < np; ++p) m.set(p, rng() % 4);
    if (!pn_enabled(n, m, t)) continue;
    Vec m2 = pn_fire(n, m, t);
    EXPECT_EQ(m2.total(), m.total() - n.pre(t).total() + n.post(t).total());
    EXPECT_EQ(m2, pn_fire(n, m, t));
  }
}
