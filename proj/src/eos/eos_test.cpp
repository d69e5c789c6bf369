#include <gtest/gtest.h>

#include <random>
#include <set>

#include "figures.hpp"
#include "oracles.hpp"

using namespace nwn;

TEST(EOS, Fig3ValidAndConservative) {
  auto e = fig::fig3();
  auto r = eos_validate(e);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(r.conservative);
}

TEST(EOS, DestroyingTransitionIsNotConservative) {
  auto e = fig::lossy_example();
  auto r = eos_validate(e);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_FALSE(r.conservative);
  EXPECT_EQ(destroyed_types(e, e.system.transition("t")), std::vector<std::size_t>{1});
}

TEST(EOS, IdleWithExtraArcIsViolation) {
  auto e = fig::fig3();
  e.system.add_post(e.idle(0), 1);
  auto r = eos_validate(e);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations[0].condition, "idle-flow");
}

TEST(EOS, Projections) {
  auto e = fig::fig3();
  auto l = fig::fig3_lambda(e);
  EXPECT_EQ(project(e, l, {true, 0}), (Vec{2, 1, 0, 0, 0}));
  EXPECT_EQ(project(e, l, {false, 1}), (Vec{3, 0}));
  EXPECT_EQ(project(e, {}, {false, 2}), Vec{0});
  EXPECT_THROW(project(e, l, {false, 9}), Error);
}

TEST(EOS, Fig3ModeAndFiring) {
  auto e = fig::fig3();
  auto l = fig::fig3_lambda(e);
  auto modes = event_modes(e, 0, l).modes;
  EventMode want{l, fig::fig3_rho(e)};
  EXPECT_NE(std::find(modes.begin(), modes.end(), want), modes.end());
  EXPECT_EQ(eos_fire(e, l, 0, want), fig::fig3_rho(e));
  for (const auto& m : modes) EXPECT_TRUE(event_phi(e, 0, m));
}

TEST(EOS, LiteralCaptionRhoRejected) {
  auto e = fig::fig3();
  auto l = fig::fig3_lambda(e);
  EXPECT_THROW(make_token(e, "p4", {{"q1", 1}}), Error);
  EventMode caption{l, nm_canon({make_token(e, "p2", {{"r1", 1}}), make_token(e, "p3", {{"q1", 1}}),
                                 make_token(e, "p4", {{"r1", 1}}), make_token(e, "p5", {})})};
  EXPECT_FALSE(event_phi(e, 0, caption));
  EXPECT_THROW(eos_fire(e, l, 0, caption), Error);
}

TEST(EOS, NoInputTokensNoModes) {
  auto e = fig::fig3();
  EXPECT_TRUE(event_modes(e, 0, {make_token(e, "p2", {{"r1", 1}})}).modes.empty());
  EXPECT_THROW(event_modes(e, 5, {}), Error);
}

TEST(EOS, IdleEventUpdatesInPlace) {
  auto e = fig::fig3();
  e.add_event(e.idle(0), {{1, 0}});
  NestedMarking m{make_token(e, "p1", {{"q1", 1}})};
  auto modes = event_modes(e, 1, m).modes;
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_EQ(eos_fire(e, m, 1, modes[0]), NestedMarking{make_token(e, "p1", {{"q2", 1}})});
}

TEST(EOS, NoNetEffectKeepsMarking) {
  auto e = fig::fig3();
  auto t = e.add_transition("loop");
  e.system.add_pre(0, t);
  e.system.add_post(t, 0);
  auto ev = e.add_event(t);
  NestedMarking m{make_token(e, "p1", {{"q1", 1}})};
  auto modes = event_modes(e, ev, m).modes;
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_EQ(modes[0].lambda, modes[0].rho);
  EXPECT_EQ(eos_fire(e, m, ev, modes[0]), m);
}

TEST(EOS, DistributionCountMatchesStarsAndBars) {
  for (int slots = 1; slots <= 3; ++slots)
    for (Count k = 0; k <= 4; ++k) {
      EOS e;
      PetriNet n;
      n.name = "N";
      n.add_place("q");
      auto N = e.add_object(n);
      auto src = e.add_place("src", N);
      auto t = e.add_transition("t");
      e.system.add_pre(src, t);
      for (int s = 0; s < slots; ++s) e.system.add_post(t, e.add_place("out" + std::to_string(s), N));
      auto ev = e.add_event(t);
      NestedMarking m{{src, Vec{k}}};
      EXPECT_EQ(event_modes(e, ev, m).modes.size(), oracle::compositions(k, slots));
    }
}

TEST(EOS, ModeCapOverflows) {
  auto e = fig::fig3();
  auto l = fig::fig3_lambda(e);
  auto all = event_modes(e, 0, l).modes.size();
  ASSERT_GT(all, 2u);
  auto capped = event_modes(e, 0, l, 2);
  EXPECT_TRUE(capped.overflow);
  EXPECT_EQ(capped.modes.size(), 2u);
}

TEST(EOS, ZeroCheckDisablesDestroyingEvent) {
  auto e = fig::lossy_example();
  auto m = fig::lossy_example_init(e);
  EXPECT_TRUE(event_modes(e, 0, m).modes.empty());
  NestedMarking lost{make_token(e, "p1", {}), make_token(e, "p2", {}), make_token(e, "p3", {{"q1", 1}})};
  EXPECT_EQ(event_modes(e, 0, nm_canon(lost)).modes.size(), 1u);
}

TEST(LeqF, Examples) {
  NestedMarking a{{0, Vec{1}}}, b{{0, Vec{2}}};
  EXPECT_TRUE(leq_f(a, b));
  NestedMarking c{{0, Vec{0}}}, d{{1, Vec{9}}};
  EXPECT_FALSE(leq_f(c, d));
}

static NestedMarking random_nm(std::mt19937_64& rng, std::size_t max_tokens) {
  NestedMarking m;
  std::size_t n = rng() % (max_tokens + 1);
  for (std::size_t i = 0; i < n; ++i) m.push_back({rng() % 2, Vec{Count(rng() % 3), Count(rng() % 2)}});
  return nm_canon(m);
}

TEST(LeqF, MatchesBruteForceInjection) {
  std::mt19937_64 rng(21);
  std::function<bool(const NestedToken&, const NestedToken&)> rel = [](const NestedToken& x, const NestedToken& y) {
    return x.place == y.place && leq(x.inner, y.inner);
  };
  for (int it = 0; it < 3000; ++it) {
    auto a = random_nm(rng, 5), b = random_nm(rng, 5);
    EXPECT_EQ(leq_f(a, b), oracle::injection_exists(a, b, rel));
  }
}

TEST(LeqF, PartialOrderLaws) {
  std::mt19937_64 rng(22);
  for (int it = 0; it < 2000; ++it) {
    auto a = random_nm(rng, 4), b = random_nm(rng, 4), c = random_nm(rng, 4);
    EXPECT_TRUE(leq_f(a, a));
    if (leq_f(a, b) && leq_f(b, a)) EXPECT_EQ(a, b);
    if (leq_f(a, b) && leq_f(b, c)) EXPECT_TRUE(leq_f(a, c));
  }
}

TEST(Lossy, OneStepExamples) {
  NestedMarking m{{0, Vec{1}}};
  auto s = lossy_successors(m);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], NestedMarking{});
  EXPECT_EQ(s[1], (NestedMarking{{0, Vec{0}}}));
  EXPECT_TRUE(lossy_successors({}).empty());
}

TEST(Lossy, ClosureIsDownwardClosure) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 40; ++it) {
    NestedMarking m;
    for (int i = 0; i < 3; ++i) m.push_back({rng() % 2, Vec{Count(rng() % 3), Count(rng() % 2)}});
    m = nm_canon(m);
    std::set<NestedMarking> closure{m}, work{m};
    while (!work.empty()) {
      auto cur = *work.begin();
      work.erase(work.begin());
      for (auto& s : lossy_successors(cur))
        if (closure.insert(s).second) work.insert(s);
    }
    std::set<NestedMarking> below;
    std::function<void(std::size_t, NestedMarking)> gen = [&](std::size_t i, NestedMarking acc) {
      if (i == m.size()) {
        below.insert(nm_canon(acc));
        return;
      }
      gen(i + 1, acc);
      for (Count a = 0; a <= m[i].inner[0]; ++a)
        for (Count b = 0; b <= m[i].inner[1]; ++b) {
          auto next = acc;
          next.push_back({m[i].place, Vec{a, b}});
          gen(i + 1, next);
        }
    };
    gen(0, {});
    EXPECT_EQ(closure, below);
    for (const auto& x : below) EXPECT_TRUE(leq_f(x, m));
  }
}
