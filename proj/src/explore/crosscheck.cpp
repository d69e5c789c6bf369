#include <json.hpp>
#include <random>

#include "nwn/explore.hpp"

namespace nwn {

namespace {

using Labels = std::vector<std::string>;

std::string head(const std::string& label) { return label.substr(0, label.find(' ')); }

template <class S>
std::vector<S> sample_states(const System<S>& sys, const S& init, const Limits& lim, const CrossOptions& opt) {
  Limits l = lim;
  l.max_depth = opt.sample_depth;
  l.max_states = std::max<std::size_t>(1, opt.sample_states);
  return reachable(sys, init, l).states;
}

struct StepHooks {
  // Upper bound on the simulation length for a step with these labels.
  std::function<std::optional<std::size_t>(const Labels&)> bound;
  // Length measure of a target trace.
  std::function<std::size_t(const Labels&)> measure;
};

template <class S, class T>
void step_sim(CrossReport& rep, const System<S>& src, const S& init, const System<T>& tgt,
              const std::function<T(const S&)>& encode, const std::function<std::optional<S>(const T&)>& decode,
              const StepHooks& hooks, const Limits& lim, const CrossOptions& opt) {
  auto states = sample_states(src, init, lim, opt);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const S& m = states[i];
    std::string check = "step " + std::to_string(i) + " " + src.show(m);
    auto exp = src.successors(m, lim);
    std::map<S, Labels> succ;
    for (auto& sc : exp.next) succ[sc.state].push_back(sc.label);
    auto rs = first_returns<T, S>(tgt, encode(m), decode, lim);
    rep.states += rs.states;
    bool bad = false, unknown = exp.truncated;
    std::string detail;
    for (const auto& [next, labels] : succ) {
      auto it = rs.found.find(next);
      if (it == rs.found.end()) {
        if (rs.exhaustive) {
          bad = true;
          rep.mismatches.push_back({"forward", src.show(m), labels.front() + " -> " + src.show(next) + " not simulated", {}});
        } else {
          unknown = true;
        }
        continue;
      }
      std::size_t len = hooks.measure ? hooks.measure(it->second) : it->second.size();
      rep.depth = std::max(rep.depth, it->second.size());
      if (hooks.bound) {
        auto b = hooks.bound(labels);
        if (b && len > *b) {
          bad = true;
          rep.mismatches.push_back({"depth", src.show(m),
                                    labels.front() + " simulated in " + std::to_string(len) + " > " +
                                        std::to_string(*b),
                                    it->second});
        }
      }
    }
    for (const auto& [dec, trace] : rs.found)
      if (!succ.count(dec)) {
        bad = true;
        rep.mismatches.push_back({"backward", src.show(m), "cycle decodes to " + src.show(dec), trace});
      }
    detail = std::to_string(succ.size()) + " source steps, " + std::to_string(rs.found.size()) + " target cycles";
    if (bad) {
      rep.verdicts.push_back({check, "mismatch", detail});
    } else if (unknown) {
      ++rep.inconclusive;
      rep.verdicts.push_back({check, "inconclusive", detail});
    } else {
      rep.verdicts.push_back({check, "match", detail});
    }
  }
}

bool conclusive(const Verdict& v) { return v.outcome == Outcome::Covered || (v.outcome == Outcome::NotFound && v.exhausted); }

std::string describe(const Verdict& v) {
  std::string s = outcome_name(v.outcome);
  if (v.outcome == Outcome::Covered) s += "@" + std::to_string(v.depth);
  if (v.outcome == Outcome::NotFound) s += v.exhausted ? "(exhausted)" : "(bounded)";
  if (v.outcome == Outcome::Error) s += "(" + v.error + ")";
  return s;
}

template <class S, class T>
void compare_cover(CrossReport& rep, const std::string& check, const System<S>& a, const S& ia, const S& ta,
                   LossMode la, const System<T>& b, const T& ib, const T& tb, LossMode lb, const Limits& lim) {
  auto va = coverability(a, ia, ta, la, lim);
  auto vb = coverability(b, ib, tb, lb, lim);
  rep.states += va.states + vb.states;
  rep.depth = std::max({rep.depth, va.depth, vb.depth});
  std::string detail = describe(va) + " vs " + describe(vb);
  bool bad = false;
  if (va.outcome == Outcome::Covered && !a.covers(replay(a, ia, va.trace, la), ta)) {
    bad = true;
    rep.mismatches.push_back({"witness", a.show(ta), "source witness does not replay", va.trace});
  }
  if (vb.outcome == Outcome::Covered && !b.covers(replay(b, ib, vb.trace, lb), tb)) {
    bad = true;
    rep.mismatches.push_back({"witness", a.show(ta), "target witness does not replay", vb.trace});
  }
  if (conclusive(va) && conclusive(vb) && (va.outcome == Outcome::Covered) != (vb.outcome == Outcome::Covered)) {
    bad = true;
    rep.mismatches.push_back({"coverability", a.show(ta), detail,
                              va.outcome == Outcome::Covered ? va.trace : vb.trace});
  }
  if (bad) {
    rep.verdicts.push_back({check, "mismatch", detail});
  } else if (!conclusive(va) || !conclusive(vb)) {
    ++rep.inconclusive;
    rep.verdicts.push_back({check, "inconclusive", detail});
  } else {
    rep.verdicts.push_back({check, "match", detail});
  }
}

// Targets: the document target, downward variants of sampled reachable
// states, and random small configurations.
std::vector<NestedMarking> eos_targets(const EOS& eos, const System<NestedMarking>& sys, const NestedMarking& init,
                                       const std::optional<NestedMarking>& doc_target, std::uint64_t seed,
                                       const Limits& lim, const CrossOptions& opt) {
  std::mt19937_64 g(seed ^ 0xC0FFEEull);
  std::vector<NestedMarking> out;
  if (doc_target) out.push_back(*doc_target);
  auto reach = sample_states(sys, init, lim, opt);
  // Targets already covered by the initial state are kept only when no
  // other candidate turns up.
  for (std::size_t tries = 0; out.size() < opt.targets; ++tries) {
    NestedMarking cand;
    std::uint64_t pick = g() % 3;
    if (pick == 0 && reach.size() > 1) {
      cand = reach[1 + g() % (reach.size() - 1)];
      auto down = lossy_successors(cand);
      if (!down.empty() && g() % 2) cand = down[g() % down.size()];
    } else if (pick == 1 && !reach.empty()) {
      cand = reach[g() % reach.size()];
      if (!cand.empty() && g() % 2) {
        auto& tok = cand[g() % cand.size()];
        if (tok.inner.size()) tok.inner.inc(g() % tok.inner.size());
      } else {
        std::size_t p = g() % eos.system.num_places();
        cand.push_back({p, Vec(eos.type_of(p).num_places())});
      }
    } else {
      std::size_t p = g() % eos.system.num_places();
      Vec inner(eos.type_of(p).num_places());
      for (std::size_t q = 0; q < inner.size(); ++q) inner.set(q, Count(g() % 3));
      cand.push_back({p, inner});
    }
    cand = nm_canon(std::move(cand));
    if (tries < 8 * opt.targets && sys.covers(init, cand)) continue;
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<NuConfig> nu_targets(std::size_t places, const System<NuConfig>& sys, const NuConfig& init,
                                 const std::optional<NuConfig>& doc_target, std::uint64_t seed, const Limits& lim,
                                 const CrossOptions& opt) {
  std::mt19937_64 g(seed ^ 0xBEEFull);
  std::vector<NuConfig> out;
  if (doc_target) out.push_back(*doc_target);
  auto reach = sample_states(sys, init, lim, opt);
  for (std::size_t tries = 0; out.size() < opt.targets; ++tries) {
    NuConfig cand;
    std::uint64_t pick = g() % 3;
    if (pick == 0 && reach.size() > 1) {
      cand = reach[1 + g() % (reach.size() - 1)];
      if (!cand.empty() && g() % 2) cand.erase(cand.begin() + long(g() % cand.size()));
    } else if (pick == 1 && !reach.empty()) {
      cand = reach[g() % reach.size()];
      if (!cand.empty() && g() % 2)
        cand[g() % cand.size()].inc(g() % places);
      else
        cand.push_back(delta(g() % places, places));
    } else {
      Vec v(places);
      v.set(g() % places, Count(1 + g() % 2));
      cand.push_back(v);
    }
    cand = canonical(std::move(cand));
    if (tries < 8 * opt.targets && sys.covers(init, cand)) continue;
    out.push_back(std::move(cand));
  }
  return out;
}

void need(bool ok, const std::string& what) {
  if (!ok) fail(Errc::InvalidSource, what);
}

}  // namespace

CrossReport crosscheck(const std::string& kind, const Document& doc, const Limits& lim, std::uint64_t seed,
                       const CrossOptions& opt) {
  detail::Clock clock;
  CrossReport rep;
  rep.kind = kind;
  rep.seed = seed;
  rep.timing = opt.timing;
  if (kind == "pn2cnupn") {
    need(doc.kind == Formalism::PN, "pn2cnupn needs a pn document");
    CNuPN tgt = pn_as_cnupn(doc.pn);
    PnSystem a(doc.pn);
    NuSystem b(tgt, NuSemantics::Channel);
    std::size_t n = doc.pn.num_places();
    step_sim<Vec, NuConfig>(
        rep, a, doc.pn_init.value_or(doc.pn.marking()), b, [](const Vec& m) { return canonical({m}); },
        [n](const NuConfig& c) -> std::optional<Vec> {
          if (c.size() > 1) return std::nullopt;
          return c.empty() ? Vec(n) : c[0];
        },
        {}, lim, opt);
  } else if (kind == "nupn2ceos") {
    need(is_nu(doc.kind), "nupn2ceos needs a nupn document");
    const NuPN& base = doc.nu.base;
    auto tr = nupn_to_ceos(base);
    CNuPN lifted = lift(base);
    NuSystem a(lifted, NuSemantics::Plain);
    EosSystem b(tr.target);
    StepHooks hooks;
    hooks.bound = [&](const Labels& ls) {
      std::size_t best = 0;
      for (const auto& l : ls) best = std::max(best, base.trans(base.transition(head(l))).vars.size() + 3);
      return std::optional<std::size_t>(best);
    };
    hooks.measure = [&](const Labels& t) { return concurrent_depth(tr.target, t); };
    step_sim<NuConfig, NestedMarking>(
        rep, a, doc.nu_init.value_or(NuConfig{}), b, [&](const NuConfig& m) { return tr.encode(m); },
        [&](const NestedMarking& m) { return tr.decode(m); }, hooks, lim, opt);
  } else if (kind == "cnupn2rnupn") {
    need(is_nu(doc.kind), "cnupn2rnupn needs a channel net document");
    auto tr = cnupn_to_rnupn(doc.nu);
    NuSystem a(doc.nu, NuSemantics::Channel);
    NuSystem b(tr.target, NuSemantics::Channel);
    StepHooks hooks;
    hooks.bound = [&](const Labels& ls) {
      std::size_t best = 0;
      for (const auto& l : ls) best = std::max(best, 4 * tr.k.at(doc.nu.base.transition(head(l))) + 4);
      return std::optional<std::size_t>(best);
    };
    step_sim<NuConfig, NuConfig>(
        rep, a, doc.nu_init.value_or(NuConfig{}), b, [&](const NuConfig& m) { return canonical(tr.encode(m)); },
        [&](const NuConfig& c) -> std::optional<NuConfig> {
          auto d = tr.decode(c);
          if (d) return canonical(*d);
          return std::nullopt;
        },
        hooks, lim, opt);
  } else if (kind == "ceos2cnupn") {
    need(doc.kind == Formalism::EOS, "ceos2cnupn needs an eos document");
    auto tr = ceos_to_cnupn(doc.eos);
    EosSystem a(doc.eos);
    NuSystem b(tr.target, NuSemantics::Channel);
    step_sim<NestedMarking, NuConfig>(
        rep, a, doc.eos_init.value_or(NestedMarking{}), b,
        [&](const NestedMarking& m) { return canonical(tr.encode(m)); },
        [&](const NuConfig& c) -> std::optional<NestedMarking> {
          auto d = tr.decode(c);
          if (d) return nm_canon(*d);
          return std::nullopt;
        },
        {}, lim, opt);
  } else if (kind == "rnupn2ceos") {
    need(is_nu(doc.kind), "rnupn2ceos needs an rnupn document");
    auto tr = rnupn_to_ceos(doc.nu);
    NuSystem a(doc.nu, NuSemantics::Channel);
    EosSystem b(tr.target);
    NuConfig init = canonical(doc.nu_init.value_or(NuConfig{}));
    auto targets = nu_targets(doc.nu.base.num_places(), a, init, doc.nu_target, seed, lim, opt);
    for (std::size_t i = 0; i < targets.size(); ++i)
      compare_cover<NuConfig, NestedMarking>(rep, "target " + std::to_string(i) + " " + a.show(targets[i]), a, init,
                                             targets[i], LossMode::None, b, tr.encode(init), tr.encode(targets[i]),
                                             LossMode::None, lim);
  } else if (kind == "closure") {
    need(doc.kind == Formalism::EOS, "closure needs an eos document");
    auto cl = conservative_closure(doc.eos);
    EosSystem a(doc.eos);
    EosSystem b(cl.target);
    NestedMarking init = nm_canon(doc.eos_init.value_or(NestedMarking{}));
    auto targets = eos_targets(doc.eos, a, init, doc.eos_target, seed, lim, opt);
    for (std::size_t i = 0; i < targets.size(); ++i)
      compare_cover<NestedMarking, NestedMarking>(rep, "target " + std::to_string(i) + " " + a.show(targets[i]), a,
                                                  init, targets[i], opt.loss, b, cl.encode(init), targets[i],
                                                  LossMode::None, lim);
  } else {
    fail(Errc::Usage, "unknown crosscheck kind '" + kind + "'");
  }
  rep.millis = clock.millis();
  return rep;
}

std::string CrossReport::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["seed"] = seed;
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) j["verdicts"].push_back({{"check", v.check}, {"result", v.result}, {"detail", v.detail}});
  j["mismatches"] = nlohmann::ordered_json::array();
  for (const auto& m : mismatches)
    j["mismatches"].push_back(
        {{"direction", m.direction}, {"source", m.source}, {"detail", m.detail}, {"trace", m.trace}});
  j["inconclusive"] = inconclusive;
  nlohmann::ordered_json st;
  st["states"] = states;
  st["depth"] = depth;
  st["millis"] = timing ? nlohmann::ordered_json(millis) : nlohmann::ordered_json(nullptr);
  j["stats"] = st;
  return j.dump(2);
}

}  // namespace nwn
