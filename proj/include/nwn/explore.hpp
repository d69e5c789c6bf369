#pragma once

// Bounded breadth-first exploration, coverability, replay, random instances
// and the translation cross-check harness.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "nwn/document.hpp"

namespace nwn {

struct Limits {
  std::size_t max_depth = 64;
  std::size_t max_states = 200'000;
  std::uint64_t max_tokens = 1'000;
  std::size_t max_modes = 100'000;
  std::uint64_t budget_ms = 0;  // 0 means unbounded
  unsigned jobs = 1;
};

template <class S>
struct Succ {
  std::string label;
  S state;
};

template <class S>
struct Expansion {
  std::vector<Succ<S>> next;
  bool truncated = false;
};

enum class LossMode { None, Exhaustive, Lazy };

template <class S>
class System {
 public:
  virtual ~System() = default;
  // Deterministic in order for a fixed state; successor states are canonical.
  virtual Expansion<S> successors(const S& s, const Limits& lim) const = 0;
  virtual Expansion<S> lossy(const S&, LossMode) const { fail(Errc::OrderUnavailable, "no lossy semantics"); }
  virtual bool covers(const S&, const S&) const { fail(Errc::OrderUnavailable, "no cover order"); }
  virtual S canon(S s) const = 0;
  virtual std::size_t hash(const S& s) const = 0;
  virtual std::uint64_t tokens(const S& s) const = 0;
  virtual std::string show(const S& s) const = 0;
};

class PnSystem : public System<Vec> {
 public:
  explicit PnSystem(const PetriNet& net) : net_(net) {}
  Expansion<Vec> successors(const Vec& s, const Limits& lim) const override;
  bool covers(const Vec& big, const Vec& small) const override { return leq(small, big); }
  Vec canon(Vec s) const override { return s; }
  std::size_t hash(const Vec& s) const override { return hash_vec(s); }
  std::uint64_t tokens(const Vec& s) const override { return s.total(); }
  std::string show(const Vec& s) const override { return marking_to_string(net_, s); }

 private:
  const PetriNet& net_;
};

enum class NuSemantics { Plain, Channel, RenameDirect };

class NuSystem : public System<NuConfig> {
 public:
  NuSystem(const CNuPN& net, NuSemantics sem);
  Expansion<NuConfig> successors(const NuConfig& s, const Limits& lim) const override;
  // Tuple embedding: every tuple of small fits injectively under a tuple of big.
  bool covers(const NuConfig& big, const NuConfig& small) const override;
  NuConfig canon(NuConfig s) const override { return canonical(std::move(s)); }
  std::size_t hash(const NuConfig& s) const override;
  std::uint64_t tokens(const NuConfig& s) const override;
  std::string show(const NuConfig& s) const override;
  std::string mode_label(std::size_t t, const NuConfig& s, const NuMode& e) const;

 private:
  const CNuPN& net_;
  NuSemantics sem_;
  RnuMeta meta_;
};

class EosSystem : public System<NestedMarking> {
 public:
  explicit EosSystem(const EOS& eos);
  Expansion<NestedMarking> successors(const NestedMarking& s, const Limits& lim) const override;
  Expansion<NestedMarking> lossy(const NestedMarking& s, LossMode mode) const override;
  bool covers(const NestedMarking& big, const NestedMarking& small) const override { return leq_f(small, big); }
  NestedMarking canon(NestedMarking s) const override { return nm_canon(std::move(s)); }
  std::size_t hash(const NestedMarking& s) const override { return nm_hash(s); }
  std::uint64_t tokens(const NestedMarking& s) const override { return nm_tokens(s); }
  std::string show(const NestedMarking& s) const override { return nm_to_string(eos_, s); }
  // Event index encoded at the front of a step label.
  static std::optional<std::size_t> event_of(const std::string& label);

 private:
  const EOS& eos_;
  // Places whose tokens may lose inner tokens under lazy loss.
  std::vector<bool> lossy_place_;
};

enum class Outcome { Covered, NotFound, Error };

struct Verdict {
  Outcome outcome = Outcome::NotFound;
  std::size_t depth = 0;
  std::vector<std::string> trace;
  // Frontier exhausted with no bound hit: a definitive negative.
  bool exhausted = false;
  bool boundary = false;
  std::size_t states = 0;
  std::size_t max_depth_seen = 0;
  double millis = 0;
  std::string error;
};

const char* outcome_name(Outcome o);

namespace detail {

template <class S>
struct Hasher {
  const System<S>* sys;
  std::size_t operator()(const S& s) const { return sys->hash(s); }
};

class Clock {
 public:
  Clock() : start_(std::chrono::steady_clock::now()) {}
  double millis() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }
  bool over(std::uint64_t budget) const { return budget && millis() > double(budget); }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <class S>
Expansion<S> expand(const System<S>& sys, const S& s, const Limits& lim, LossMode loss) {
  auto e = sys.successors(s, lim);
  if (loss != LossMode::None) {
    auto l = sys.lossy(s, loss);
    e.truncated = e.truncated || l.truncated;
    for (auto& x : l.next) e.next.push_back(std::move(x));
  }
  return e;
}

// Expands a layer, in parallel when jobs > 1, keeping frontier order.
template <class S>
std::vector<Expansion<S>> expand_layer(const System<S>& sys, const std::vector<const S*>& layer, const Limits& lim,
                                       LossMode loss) {
  std::vector<Expansion<S>> out(layer.size());
  unsigned jobs = std::max(1u, lim.jobs);
  if (jobs == 1 || layer.size() < 2) {
    for (std::size_t i = 0; i < layer.size(); ++i) out[i] = expand(sys, *layer[i], lim, loss);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(jobs);
  for (unsigned j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      try {
        for (std::size_t i = j; i < layer.size(); i += jobs) out[i] = expand(sys, *layer[i], lim, loss);
      } catch (...) {
        errs[j] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace detail

// Breadth-first search for a state satisfying goal; traces are shortest.
template <class S>
Verdict bounded_search(const System<S>& sys, const S& init, const std::function<bool(const S&)>& goal,
                       const Limits& lim, LossMode loss = LossMode::None) {
  detail::Clock clock;
  Verdict v;
  struct Node {
    S state;
    std::size_t parent;
    std::string label;
  };
  std::vector<Node> nodes;
  std::unordered_map<S, std::size_t, detail::Hasher<S>> seen(64, detail::Hasher<S>{&sys});
  auto finish = [&](std::size_t idx, std::size_t depth) {
    v.outcome = Outcome::Covered;
    v.depth = depth;
    for (std::size_t i = idx; i != 0; i = nodes[i].parent) v.trace.push_back(nodes[i].label);
    std::reverse(v.trace.begin(), v.trace.end());
    v.states = nodes.size();
    v.millis = clock.millis();
    return v;
  };
  try {
    S s0 = sys.canon(init);
    nodes.push_back({s0, 0, ""});
    seen.emplace(s0, 0);
    if (goal(s0)) return finish(0, 0);
    std::vector<std::size_t> layer{0};
    for (std::size_t depth = 1; !layer.empty(); ++depth) {
      if (depth > lim.max_depth) {
        v.boundary = true;
        break;
      }
      if (clock.over(lim.budget_ms)) {
        v.boundary = true;
        break;
      }
      std::vector<const S*> ptrs;
      for (auto i : layer) ptrs.push_back(&nodes[i].state);
      auto exp = detail::expand_layer(sys, ptrs, lim, loss);
      std::vector<std::size_t> next;
      for (std::size_t k = 0; k < layer.size(); ++k) {
        if (exp[k].truncated) v.boundary = true;
        for (auto& sc : exp[k].next) {
          if (sys.tokens(sc.state) > lim.max_tokens) {
            v.boundary = true;
            continue;
          }
          if (seen.count(sc.state)) continue;
          if (nodes.size() >= lim.max_states) {
            v.boundary = true;
            continue;
          }
          nodes.push_back({sc.state, layer[k], std::move(sc.label)});
          seen.emplace(nodes.back().state, nodes.size() - 1);
          v.max_depth_seen = depth;
          if (goal(nodes.back().state)) return finish(nodes.size() - 1, depth);
          next.push_back(nodes.size() - 1);
        }
      }
      layer = std::move(next);
    }
    v.outcome = Outcome::NotFound;
    v.exhausted = !v.boundary;
  } catch (const Error& e) {
    v.outcome = Outcome::Error;
    v.error = e.what();
  }
  v.states = nodes.size();
  v.millis = clock.millis();
  return v;
}

template <class S>
Verdict coverability(const System<S>& sys, const S& init, const S& target, LossMode loss, const Limits& lim) {
  sys.covers(init, target);
  if (loss != LossMode::None) sys.lossy(sys.canon(init), loss);
  return bounded_search<S>(
      sys, init, [&](const S& s) { return sys.covers(s, target); }, lim, loss);
}

// Folds a trace of step labels; lossy labels are matched against lossy steps.
template <class S>
S replay(const System<S>& sys, const S& init, const std::vector<std::string>& trace, LossMode loss = LossMode::None) {
  S s = sys.canon(init);
  Limits lim;
  lim.max_modes = SIZE_MAX;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    auto e = detail::expand(sys, s, lim, loss);
    bool found = false;
    for (auto& sc : e.next)
      if (sc.label == trace[i]) {
        s = std::move(sc.state);
        found = true;
        break;
      }
    if (!found) fail(Errc::StepNotEnabled, "step " + std::to_string(i) + " not enabled: " + trace[i]);
  }
  return s;
}

// All states reachable within the limits.
template <class S>
struct Reach {
  std::vector<S> states;
  bool exhausted = false;
};

template <class S>
Reach<S> reachable(const System<S>& sys, const S& init, const Limits& lim, LossMode loss = LossMode::None) {
  Reach<S> r;
  std::unordered_map<S, std::size_t, detail::Hasher<S>> seen(64, detail::Hasher<S>{&sys});
  S s0 = sys.canon(init);
  r.states.push_back(s0);
  seen.emplace(s0, 0);
  bool boundary = false;
  std::size_t begin = 0;
  for (std::size_t depth = 1; begin < r.states.size(); ++depth) {
    if (depth > lim.max_depth) {
      boundary = true;
      break;
    }
    std::size_t end = r.states.size();
    std::vector<const S*> ptrs;
    for (std::size_t i = begin; i < end; ++i) ptrs.push_back(&r.states[i]);
    // Pointers stay valid: the layer is expanded before any insertion.
    auto exp = detail::expand_layer(sys, ptrs, lim, loss);
    for (auto& e : exp) {
      if (e.truncated) boundary = true;
      for (auto& sc : e.next) {
        if (sys.tokens(sc.state) > lim.max_tokens) {
          boundary = true;
          continue;
        }
        if (seen.count(sc.state)) continue;
        if (r.states.size() >= lim.max_states) {
          boundary = true;
          continue;
        }
        seen.emplace(sc.state, r.states.size());
        r.states.push_back(std::move(sc.state));
      }
    }
    begin = end;
  }
  r.exhausted = !boundary;
  return r;
}

// Decoded states first reached from start, without passing through another
// decodable state. Each carries a shortest trace.
template <class T, class S>
struct ReturnSet {
  std::map<S, std::vector<std::string>> found;
  bool exhaustive = true;
  std::size_t states = 0;
};

template <class T, class S>
ReturnSet<T, S> first_returns(const System<T>& sys, const T& start,
                              const std::function<std::optional<S>(const T&)>& decode, const Limits& lim) {
  ReturnSet<T, S> r;
  struct Node {
    T state;
    std::size_t parent;
    std::string label;
  };
  std::vector<Node> nodes;
  std::unordered_map<T, std::size_t, detail::Hasher<T>> seen(64, detail::Hasher<T>{&sys});
  nodes.push_back({sys.canon(start), 0, ""});
  seen.emplace(nodes[0].state, 0);
  std::vector<std::size_t> layer{0};
  auto trace_of = [&](std::size_t i, std::string last) {
    std::vector<std::string> t{std::move(last)};
    for (; i != 0; i = nodes[i].parent) t.push_back(nodes[i].label);
    std::reverse(t.begin(), t.end());
    return t;
  };
  for (std::size_t depth = 1; !layer.empty(); ++depth) {
    if (depth > lim.max_depth) {
      r.exhaustive = false;
      break;
    }
    std::vector<const T*> ptrs;
    for (auto i : layer) ptrs.push_back(&nodes[i].state);
    auto exp = detail::expand_layer(sys, ptrs, lim, LossMode::None);
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < layer.size(); ++k) {
      if (exp[k].truncated) r.exhaustive = false;
      for (auto& sc : exp[k].next) {
        if (auto d = decode(sc.state)) {
          if (!r.found.count(*d)) r.found.emplace(*d, trace_of(layer[k], sc.label));
          continue;
        }
        if (seen.count(sc.state)) continue;
        if (nodes.size() >= lim.max_states || sys.tokens(sc.state) > lim.max_tokens) {
          r.exhaustive = false;
          continue;
        }
        nodes.push_back({sc.state, layer[k], std::move(sc.label)});
        seen.emplace(nodes.back().state, nodes.size() - 1);
        next.push_back(nodes.size() - 1);
      }
    }
    layer = std::move(next);
  }
  r.states = nodes.size();
  return r;
}

struct SizeParams {
  std::size_t places = 3;
  std::size_t transitions = 2;
  std::size_t tuples = 3;
  Count tokens = 3;
  std::size_t vars = 2;
  std::size_t objects = 2;
  std::size_t events = 2;
  std::uint64_t max_marking = 6;
  bool fresh = true;
  bool conservative = false;
  bool normalized = true;
};

// Deterministic in (kind, seed, size); the result passes its validator.
Document random_instance(Formalism kind, std::uint64_t seed, const SizeParams& size = {});

struct CrossOptions {
  std::size_t sample_states = 6;
  std::size_t sample_depth = 2;
  std::size_t targets = 4;
  LossMode loss = LossMode::Exhaustive;
  bool timing = false;
};

struct Mismatch {
  std::string direction;
  std::string source;
  std::string detail;
  std::vector<std::string> trace;
};

struct CrossVerdict {
  std::string check;
  std::string result;  // match, mismatch, inconclusive
  std::string detail;
};

struct CrossReport {
  std::string kind;
  std::uint64_t seed = 0;
  std::vector<CrossVerdict> verdicts;
  std::vector<Mismatch> mismatches;
  std::size_t inconclusive = 0;
  std::size_t states = 0;
  std::size_t depth = 0;
  double millis = 0;
  bool timing = false;
  std::string to_json() const;
};

// Kinds: pn2cnupn, nupn2ceos, cnupn2rnupn, ceos2cnupn, rnupn2ceos, closure.
CrossReport crosscheck(const std::string& kind, const Document& source, const Limits& lim, std::uint64_t seed = 0,
                       const CrossOptions& opt = {});

// Height of the dependency layering of an EOS trace: events touching a
// common system place in a producer/consumer or conflict relation are ordered.
std::size_t concurrent_depth(const EOS& eos, const std::vector<std::string>& trace);

}  // namespace nwn

namespace nwn {

// Compiles a document with one of the crosscheck kinds (or "normalize") and
// carries its configurations through the encoder.
Document translate_doc(const std::string& kind, const Document& source);

}  // namespace nwn

namespace nwn {

// Source formalism and random-instance size used for seeded cross-checks.
struct KindSpec {
  Formalism source;
  SizeParams size;
};

const std::vector<std::string>& cross_kinds();
// Throws Usage for an unknown kind.
KindSpec kind_spec(const std::string& kind);

}  // namespace nwn
