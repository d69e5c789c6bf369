// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "figures.hpp"
#include "nwn/cli.hpp"
#include "nwn/explore.hpp"
#include "nwn/format.hpp"
#include "oracles.hpp"

using namespace nwn;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
};

using Check = std::function<Result()>;

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(NWN_GOLDEN_DIR) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t inst(const NuConfig& c, const Vec& v) {
  auto it = std::find(c.begin(), c.end(), v);
  if (it == c.end()) fail(Errc::IndexOutOfRange, "tuple " + to_string(v) + " not in configuration");
  return std::size_t(it - c.begin());
}

std::vector<NuMode> sorted_modes(std::vector<NuMode> m) {
  std::sort(m.begin(), m.end(), [](const NuMode& a, const NuMode& b) { return a.inst < b.inst; });
  return m;
}

// Configurations reachable within a few steps, used as firing points.
std::vector<NuConfig> sample_configs(const CNuPN& net, NuSemantics sem, const NuConfig& init) {
  NuSystem sys(net, sem);
  Limits lim;
  lim.max_depth = 2;
  lim.max_states = 30;
  lim.max_tokens = 60;
  return reachable(sys, init, lim).states;
}

Result figure_fidelity() {
  Result r;
  std::vector<std::string> bad;
  auto expect = [&](bool c, const std::string& what) {
    if (!c) bad.push_back(what);
  };

  auto d1 = parse_doc(slurp("fig1.nwn"));
  expect(pn_fire(d1.pn, *d1.pn_init, "t") == *d1.pn_target, "fig1");

  auto d2 = parse_doc(slurp("fig2.nwn"));
  {
    const auto& m = *d2.nu_init;
    auto f = fig::fig2_init();
    NuMode e{{inst(m, f[0]), inst(m, f[1]), inst(m, f[2])}};
    expect(canonical(nupn_fire(d2.nu.base, m, 0, e)) == *d2.nu_target, "fig2");
  }

  auto d4 = parse_doc(slurp("fig4.nwn"));
  {
    const auto& m = *d4.nu_init;
    auto f = fig::fig2_init();
    NuMode e{{inst(m, f[0]), inst(m, f[1]), inst(m, f[2])}};
    auto st = cnupn_fire_staged(d4.nu, m, 0, e);
    expect(canonical(st.stage1) == canonical(fig::fig4_stage1()), "fig4 stage1");
    expect(canonical(st.stage2) == canonical(fig::fig4_stage2()), "fig4 stage2");
    expect(canonical(st.final) == *d4.nu_target, "fig4 result");
  }

  auto d5 = parse_doc(slurp("fig5.nwn"));
  {
    const auto& m = *d5.nu_init;
    auto f = fig::fig5_init();
    NuMode e{{inst(m, f[2]), inst(m, f[0]), inst(m, f[3])}};
    auto chk = is_rnupn(d5.nu);
    expect(chk.ok, "fig5 shape");
    expect(canonical(rnupn_fire_direct(d5.nu, chk.meta, m, 0, e)) == *d5.nu_target, "fig5 direct");
    expect(canonical(cnupn_fire(d5.nu, m, 0, e)) == *d5.nu_target, "fig5 channel");
  }

  auto d3 = parse_doc(slurp("fig3.nwn"));
  {
    const auto& lam = *d3.eos_init;
    const auto& rho = *d3.eos_target;
    auto modes = event_modes(d3.eos, 0, lam).modes;
    auto it = std::find(modes.begin(), modes.end(), EventMode{lam, rho});
    expect(it != modes.end(), "fig3 mode");
    if (it != modes.end()) expect(nm_canon(eos_fire(d3.eos, lam, 0, *it)) == rho, "fig3 result");
  }

  r.ok = bad.empty();
  r.detail = r.ok ? "figs 1, 2, 3, 4 (both stages), 5 exact" : "mismatch:";
  for (const auto& b : bad) r.detail += " " + b;
  return r;
}

Result stratification() {
  std::size_t compared = 0, disagreements = 0;
  SizeParams sz;
  sz.places = 4;
  sz.tuples = 3;
  sz.tokens = 3;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto d = random_instance(Formalism::NuPN, seed, sz);
    const auto& net = d.nu.base;
    auto lifted = lift(net);
    for (const auto& m : sample_configs(lifted, NuSemantics::Plain, *d.nu_init))
      for (std::size_t t = 0; t < net.transitions().size(); ++t) {
        auto modes = oracle::all_modes(net, m, t);
        if (sorted_modes(nupn_modes(net, m, t).modes) != modes) ++disagreements;
        for (const auto& e : modes) {
          ++compared;
          if (canonical(nupn_fire(net, m, t, e)) != canonical(cnupn_fire(lifted, m, t, e))) ++disagreements;
        }
      }

    auto p = random_instance(Formalism::PN, seed, sz);
    auto as_nu = pn_as_cnupn(p.pn);
    PnSystem ps(p.pn);
    Limits lim;
    lim.max_depth = 3;
    lim.max_states = 30;
    for (const auto& m : reachable(ps, *p.pn_init, lim).states)
      for (std::size_t t = 0; t < p.pn.num_transitions(); ++t) {
        NuConfig c{m};
        auto modes = oracle::all_modes(as_nu.base, c, t);
        if (sorted_modes(nupn_modes(as_nu.base, c, t).modes) != modes) ++disagreements;
        if (pn_enabled(p.pn, m, t) != !modes.empty()) ++disagreements;
        for (const auto& e : modes) {
          ++compared;
          NuConfig expect{pn_fire(p.pn, m, t)};
          if (nupn_fire(as_nu.base, c, t, e) != expect || cnupn_fire(as_nu, c, t, e) != expect) ++disagreements;
        }
      }
  }
  return {disagreements == 0 && compared > 0,
          std::to_string(compared) + " firings compared, " + std::to_string(disagreements) + " disagreements"};
}

Result rnupn_oracle() {
  std::size_t compared = 0, special = 0, disagreements = 0;
  SizeParams sz;
  sz.places = 6;
  sz.tuples = 3;
  sz.tokens = 3;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto d = random_instance(Formalism::RNuPN, seed, sz);
    auto chk = is_rnupn(d.nu);
    if (!chk.ok) return {false, "seed " + std::to_string(seed) + " is not a rename net"};
    for (const auto& m : sample_configs(d.nu, NuSemantics::Channel, *d.nu_init))
      for (std::size_t t = 0; t < d.nu.base.transitions().size(); ++t)
        for (const auto& e : oracle::all_modes(d.nu.base, m, t)) {
          ++compared;
          special += chk.meta.find(t) != nullptr;
          if (canonical(rnupn_fire_direct(d.nu, chk.meta, m, t, e)) != canonical(cnupn_fire(d.nu, m, t, e)))
            ++disagreements;
        }
  }
  return {disagreements == 0 && special > 0,
          std::to_string(compared) + " modes (" + std::to_string(special) + " special), " +
              std::to_string(disagreements) + " disagreements"};
}

Limits cross_limits() {
  Limits lim;
  lim.max_depth = 40;
  lim.max_states = 20'000;
  lim.max_tokens = 30;
  return lim;
}

struct Sweep {
  std::size_t checks = 0, steps = 0, mismatches = 0, inconclusive = 0;
  std::string text() const {
    return std::to_string(checks) + " checks" + (steps ? " over " + std::to_string(steps) + " source steps" : "") + ", " + std::to_string(mismatches) + " mismatches, " +
           std::to_string(inconclusive) + " inconclusive";
  }
};

Sweep sweep(const std::string& kind) {
  auto spec = kind_spec(kind);
  Sweep s;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto rep = crosscheck(kind, random_instance(spec.source, seed, spec.size), cross_limits(), seed);
    s.checks += rep.verdicts.size();
    for (const auto& v : rep.verdicts)
      if (v.detail.find(" source steps") != std::string::npos) s.steps += std::stoul(v.detail);
    s.mismatches += rep.mismatches.size();
    s.inconclusive += rep.inconclusive;
  }
  return s;
}

Result rename_simulation() {
  auto s = sweep("cnupn2rnupn");
  return {s.mismatches == 0 && s.inconclusive == 0 && s.checks > 0, s.text()};
}

Result minimal_run() {
  auto s = sweep("nupn2ceos");
  return {s.mismatches == 0 && s.checks > 0, s.text()};
}

Result transfer_gadgets() {
  std::mt19937_64 rng(2024);
  std::size_t perfect_pairs = 0, lossy_pairs = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t P = 2 + rng() % 3;
    std::vector<std::string> places;
    for (std::size_t i = 0; i < P; ++i) places.push_back("p" + std::to_string(i + 1));
    std::size_t r1 = rng() % P, r2 = (r1 + 1 + rng() % (P - 1)) % P;
    auto rv = [&](Count hi) {
      Vec v(P);
      for (std::size_t i = 0; i < P; ++i) v.set(i, Count(rng() % (hi + 1)));
      return v;
    };
    Vec m1 = rv(3), m2 = rv(3), m3 = rv(1);
    auto g = transfer_gadget_assembly(places, r1, r2);
    EosSystem sys(g.eos);
    Limits lim;
    lim.max_depth = 10'000;
    lim.max_states = 2'000'000;
    lim.max_tokens = 10'000;
    auto reach = reachable(sys, g.initial(m1, m2, m3), lim);
    if (!reach.exhausted) return {false, "state space not exhausted in trial " + std::to_string(trial)};

    using Pair = std::pair<Vec, Vec>;
    std::set<Pair> perfect, lossy;
    for (const auto& s : reach.states) {
      std::optional<Vec> a, b, trash;
      bool done = false;
      for (const auto& tok : s) {
        if (tok.place == g.tran_done) done = true;
        if (tok.place == g.copy_x1) a = tok.inner;
        if (tok.place == g.copy_x2) b = tok.inner;
        if (tok.place == g.trash) trash = tok.inner;
      }
      if (!done) continue;
      if (!a || !b || !trash) return {false, "terminal state lacks a gadget token"};
      (*trash == m3 ? perfect : lossy).insert({*a, *b});
    }

    Vec rest = m1 - scale(delta(r1, P), m1[r1]);
    Pair exact{rest, m2 + scale(delta(r2, P), m1[r1])};
    std::set<Pair> want_lossy;
    std::vector<Count> a(P, 0);
    std::function<void(std::size_t)> enumerate = [&](std::size_t i) {
      if (i == P) {
        for (Count k = 0; k <= m1[r1]; ++k) {
          Pair p{Vec(a), m2 + scale(delta(r2, P), k)};
          if (p != exact) want_lossy.insert(p);
        }
        return;
      }
      for (Count c = 0; c <= rest[i]; ++c) {
        a[i] = c;
        enumerate(i + 1);
      }
    };
    enumerate(0);
    if (perfect != std::set<Pair>{exact}) return {false, "perfect-transfer set differs in trial " + std::to_string(trial)};
    if (lossy != want_lossy) return {false, "lossy-transfer set differs in trial " + std::to_string(trial)};
    perfect_pairs += perfect.size();
    lossy_pairs += lossy.size();
  }
  return {true, "40 assemblies, " + std::to_string(perfect_pairs) + " exact and " + std::to_string(lossy_pairs) +
                    " lossy terminal pairs, sets equal"};
}

Result ceos_simulation() {
  using Counts = std::map<std::string, std::size_t>;
  auto tr = ceos_to_cnupn(parse_doc(slurp("fig8.nwn")).eos);
  Counts chans;
  for (std::size_t t = 0; t < tr.target.base.transitions().size(); ++t)
    if (auto n = tr.target.selective(t).size()) chans[find_prov(tr.prov, tr.target.base.trans(t).name)->tag] += n;
  bool counts = count_by_tag(tr.prov, "place") == Counts{{"p-block", 6},      {"N-merged", 3},  {"N-updated", 3},
                                                         {"control", 1},      {"e-merging", 1}, {"e-updating", 4},
                                                         {"e-id-creation", 2}, {"e-move(1)", 2}, {"e-transfer", 1}} &&
                count_by_tag(tr.prov, "transition") ==
                    Counts{{"e-merging", 1}, {"e-updating", 3}, {"e-id-creation", 1}, {"e-move(1)", 4}, {"e-transfer", 1}} &&
                chans == Counts{{"e-merging", 4}, {"e-updating", 2}, {"e-transfer", 2}};
  auto s = sweep("ceos2cnupn");
  return {counts && s.mismatches == 0 && s.checks > 0,
          s.text() + (counts ? "; fig 8 gadget counts match" : "; fig 8 gadget counts differ")};
}

Result closure_equivalence() {
  auto s = sweep("closure");
  return {s.mismatches == 0 && s.checks > 0, s.text() + " (conclusive disagreements: " + std::to_string(s.mismatches) + ")"};
}

Result order_laws() {
  std::mt19937_64 rng(99);
  auto below = [&](std::uint64_t n) { return n ? rng() % n : 0; };
  // Places 0 and 1 carry two-place inner markings, place 2 black tokens.
  auto token = [&] {
    std::size_t p = below(3);
    Vec v(p == 2 ? 0 : 2);
    for (std::size_t i = 0; i < v.size(); ++i) v.set(i, Count(below(3)));
    return NestedToken{p, v};
  };
  auto grow_nm = [&](NestedMarking m) {
    for (auto& t : m)
      for (std::size_t i = 0; i < t.inner.size(); ++i)
        if (below(2)) t.inner.inc(i, Count(below(2)));
    for (auto k = below(3); k; --k) m.push_back(token());
    return nm_canon(std::move(m));
  };
  auto random_nm = [&](std::size_t n) {
    NestedMarking m;
    for (std::size_t i = 0; i < n; ++i) m.push_back(token());
    return nm_canon(std::move(m));
  };
  auto tuple = [&] {
    Vec v(3);
    while (v.is_zero())
      for (std::size_t i = 0; i < 3; ++i) v.set(i, Count(below(3)));
    return v;
  };
  auto sorted = [](NuConfig c) {
    std::sort(c.begin(), c.end());
    return c;
  };
  auto grow_cfg = [&](NuConfig c) {
    for (auto& t : c)
      for (std::size_t i = 0; i < 3; ++i)
        if (below(2)) t.inc(i, Count(below(2)));
    for (auto k = below(3); k; --k) c.push_back(tuple());
    std::shuffle(c.begin(), c.end(), rng);
    return c;
  };
  auto random_cfg = [&](std::size_t n) {
    NuConfig c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(tuple());
    return c;
  };

  std::size_t failures = 0, nontrivial = 0;
  for (int i = 0; i < 10'000; ++i) {
    bool chain = i % 2 == 0;
    auto a = random_nm(below(4));
    auto b = chain ? grow_nm(a) : random_nm(below(4));
    auto c = chain ? grow_nm(b) : random_nm(below(4));
    failures += !leq_f(a, a);
    if (leq_f(a, b) && leq_f(b, a) && a != b) ++failures;
    if (leq_f(a, b) && leq_f(b, c)) {
      ++nontrivial;
      failures += !leq_f(a, c);
    }
    auto x = random_cfg(below(4));
    auto y = chain ? grow_cfg(x) : random_cfg(below(4));
    auto z = chain ? grow_cfg(y) : random_cfg(below(4));
    failures += !tuple_embeds(x, x);
    if (tuple_embeds(x, y) && tuple_embeds(y, x) && sorted(x) != sorted(y)) ++failures;
    if (tuple_embeds(x, y) && tuple_embeds(y, z)) {
      ++nontrivial;
      failures += !tuple_embeds(x, z);
    }
  }

  std::size_t brute = 0;
  for (int i = 0; i < 10'000; ++i) {
    auto a = random_nm(below(6));
    auto b = i % 2 ? random_nm(below(6)) : grow_nm(a);
    if (b.size() <= 5) {
      ++brute;
      bool want = oracle::injection_exists<NestedToken, NestedToken>(a, b, [](const NestedToken& s, const NestedToken& t) {
        return s.place == t.place && s.inner.size() == t.inner.size() && leq(s.inner, t.inner);
      });
      failures += want != leq_f(a, b);
    }
    auto x = random_cfg(below(6));
    auto y = i % 2 ? random_cfg(below(6)) : grow_cfg(x);
    if (y.size() <= 5) {
      ++brute;
      bool want = oracle::injection_exists<Vec, Vec>(x, y, [](const Vec& s, const Vec& t) { return leq(s, t); });
      failures += want != tuple_embeds(x, y);
    }
  }
  return {failures == 0 && nontrivial > 1000,
          "10000 triples per order (" + std::to_string(nontrivial) + " transitive chains), " + std::to_string(brute) +
              " brute-force injection comparisons, " + std::to_string(failures) + " failures"};
}

Result infrastructure() {
  std::size_t docs = 0;
  for (const char* f : {"fig1.nwn", "fig2.nwn", "fig3.nwn", "fig4.nwn", "fig5.nwn", "fig8.nwn", "fig11.nwn"}) {
    auto text = slurp(f);
    if (emit_doc(parse_doc(text)) != text) return {false, std::string("golden round-trip differs: ") + f};
    ++docs;
  }
  for (auto k : {Formalism::PN, Formalism::NuPN, Formalism::CNuPN, Formalism::RNuPN, Formalism::EOS})
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto d = random_instance(k, seed);
      auto text = emit_doc(d);
      auto back = parse_doc(text);
      if (!doc_equal(back, d) || emit_doc(back) != text)
        return {false, std::string("random round-trip differs: ") + formalism_name(k) + " " + std::to_string(seed)};
      ++docs;
    }

  std::mt19937_64 rng(5);
  std::size_t rejected = 0;
  for (int i = 0; i < 10'000; ++i) {
    std::string s(rng() % 80, ' ');
    for (auto& c : s) c = char(rng() % 256);
    if (i % 2) s = "nwn 1 " + std::string(formalism_name(Formalism(i % 5))) + "\n" + s;
    try {
      parse_doc(s);
    } catch (const FormatError&) {
      ++rejected;
    } catch (const std::exception& e) {
      return {false, std::string("fuzz input raised a non-format error: ") + e.what()};
    }
  }

  auto cli = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    run_cli(args, out, err);
    return out.str();
  };
  for (const auto& kind : cross_kinds()) {
    std::vector<std::string> args = {"crosscheck", "--kind", kind, "--seed", "3", "--json", "-"};
    auto first = cli(args);
    if (first.empty() || first != cli(args)) return {false, "crosscheck report not deterministic for " + kind};
    std::vector<std::string> g = {"gen", "--kind", kind, "--seed", "3"};
    if (cli(g) != cli(g)) return {false, "gen output not deterministic for " + kind};
  }
  return {true, std::to_string(docs) + " documents round-trip, 10000 fuzz inputs (" + std::to_string(rejected) +
                    " rejected, 0 crashes), CLI reports deterministic"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    Check run;
  };
  std::vector<Criterion> all = {
      {1, "figure fidelity", 1, figure_fidelity},
      {2, "semantics stratification", 10, stratification},
      {3, "rename-net dual semantics", 10, rnupn_oracle},
      {4, "cnupn2rnupn simulation", 60, rename_simulation},
      {5, "nupn2ceos minimal runs", 60, minimal_run},
      {6, "transfer gadget terminal sets", 30, transfer_gadgets},
      {7, "ceos2cnupn simulation", 120, ceos_simulation},
      {8, "conservative closure equivalence", 120, closure_equivalence},
      {9, "order laws", 10, order_laws},
      {10, "infrastructure", 30, infrastructure},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.budget_s;
    bool ok = r.ok && in_time;
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << r.detail << " (" << std::fixed
              << std::setprecision(2) << secs << " s of " << std::setprecision(0) << c.budget_s << " s"
              << (in_time ? "" : ", over budget") << ")" << std::endl;
    std::cout.unsetf(std::ios::floatfield);
  }
  return failed ? 1 : 0;
}
