#include "nwn/eos.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace nwn {

EOS::EOS() { objects.push_back(empty_net()); }

std::string idle_name(const std::string& p) { return "id(" + p + ")"; }

std::size_t EOS::add_object(PetriNet net) {
  if (find_object(net.name)) fail(Errc::ValidationError, "duplicate object net '" + net.name + "'");
  objects.push_back(std::move(net));
  for (auto& e : events) e.theta.emplace_back(objects.back().num_transitions(), 0);
  return objects.size() - 1;
}

std::optional<std::size_t> EOS::find_object(const std::string& n) const {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i].name == n) return i;
  return std::nullopt;
}

std::size_t EOS::object(const std::string& n) const {
  auto i = find_object(n);
  if (!i) fail(Errc::UnknownObjectNet, "unknown object net '" + n + "'");
  return *i;
}

std::size_t EOS::add_place(const std::string& p, std::size_t type) {
  if (type >= objects.size()) fail(Errc::UnknownObjectNet, "object net index " + std::to_string(type));
  auto i = system.add_place(p);
  typing.push_back(type);
  auto t = system.add_transition(idle_name(p));
  system.add_pre(i, t);
  system.add_post(t, i);
  idle_of.push_back(i);
  return i;
}

std::size_t EOS::add_transition(const std::string& t) {
  auto i = system.add_transition(t);
  idle_of.push_back(std::nullopt);
  return i;
}

std::size_t EOS::idle(std::size_t p) const { return system.transition(idle_name(system.places().at(p))); }

Event EOS::empty_event(std::size_t sys_t) const {
  Event e{sys_t, {}};
  for (const auto& o : objects) e.theta.emplace_back(o.num_transitions(), 0);
  return e;
}

std::size_t EOS::add_event(std::size_t sys_t, const std::vector<std::pair<std::size_t, std::size_t>>& object_ts) {
  if (sys_t >= system.num_transitions()) fail(Errc::UnknownTransition, "system transition index");
  Event e = empty_event(sys_t);
  for (auto [n, t] : object_ts) {
    if (n >= objects.size() || t >= objects[n].num_transitions())
      fail(Errc::UnknownTransition, "object transition index");
    e.theta[n][t] = checked_add(e.theta[n][t], 1);
  }
  events.push_back(std::move(e));
  return events.size() - 1;
}

static std::map<std::string, Count> named(const PetriNet& n, const Vec& v, bool places) {
  std::map<std::string, Count> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) out[places ? n.places()[i] : n.transitions()[i]] = v[i];
  return out;
}

bool eos_equal(const EOS& a, const EOS& b) {
  if (a.objects.size() != b.objects.size()) return false;
  for (std::size_t i = 0; i < a.objects.size(); ++i) {
    auto j = b.find_object(a.objects[i].name);
    if (!j || !(a.objects[i] == b.objects[*j])) return false;
  }
  auto sig = [](const EOS& e) {
    std::map<std::string, std::string> places;
    for (std::size_t p = 0; p < e.system.num_places(); ++p)
      places[e.system.places()[p]] = e.objects[e.typing[p]].name;
    std::map<std::string, std::pair<std::map<std::string, Count>, std::map<std::string, Count>>> trans;
    for (std::size_t t = 0; t < e.system.num_transitions(); ++t)
      trans[e.system.transitions()[t]] = {named(e.system, e.system.pre(t), true),
                                          named(e.system, e.system.post(t), true)};
    std::multiset<std::pair<std::string, std::map<std::string, std::map<std::string, Count>>>> evs;
    for (const auto& ev : e.events) {
      std::map<std::string, std::map<std::string, Count>> th;
      for (std::size_t n = 0; n < ev.theta.size(); ++n) {
        auto m = named(e.objects[n], Vec(ev.theta[n]), false);
        if (!m.empty()) th[e.objects[n].name] = m;
      }
      evs.insert({e.system.transitions()[ev.sys_t], th});
    }
    return std::make_tuple(places, trans, evs);
  };
  return sig(a) == sig(b);
}

NestedMarking nm_canon(NestedMarking m) {
  std::sort(m.begin(), m.end());
  return m;
}

NestedMarking nm_add(const NestedMarking& a, const NestedMarking& b) {
  NestedMarking out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NestedMarking nm_sub(const NestedMarking& a, const NestedMarking& b) {
  NestedMarking out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool nm_includes(const NestedMarking& big, const NestedMarking& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::size_t nm_hash(const NestedMarking& m) {
  std::size_t h = m.size();
  for (const auto& t : m) h = hash_combine(hash_combine(h, t.place), hash_vec(t.inner));
  return h;
}

std::uint64_t nm_tokens(const NestedMarking& m) {
  std::uint64_t s = m.size();
  for (const auto& t : m) s += t.inner.total();
  return s;
}

std::string nm_to_string(const EOS& eos, const NestedMarking& m) {
  if (m.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < m.size(); ++i)
    os << (i ? " + " : "") << "<" << eos.system.places().at(m[i].place) << ","
       << marking_to_string(eos.type_of(m[i].place), m[i].inner) << ">";
  return os.str();
}

NestedToken make_token(const EOS& eos, const std::string& place, const std::map<std::string, Count>& inner) {
  auto p = eos.system.place(place);
  return {p, marking_of(eos.type_of(p), inner)};
}

EosReport eos_validate(const EOS& eos) {
  EosReport r;
  const auto& S = eos.system;
  auto violate = [&](const std::string& el, const std::string& cond, const std::string& d) {
    r.violations.push_back({el, cond, d});
  };
  if (!eos.objects.empty() && eos.objects[kBlack].num_places() + eos.objects[kBlack].num_transitions() != 0)
    violate("BLACK", "black-not-empty", "the first object net must be the empty net");
  if (eos.typing.size() != S.num_places()) violate("system", "typing", "typing does not cover every place");
  std::set<std::string> names;
  auto claim = [&](const std::string& owner, const std::string& n) {
    if (!names.insert(n).second) violate(owner, "not-disjoint", "name '" + n + "' is declared twice");
  };
  for (const auto& p : S.places()) claim("system", p);
  for (const auto& t : S.transitions()) claim("system", t);
  for (const auto& o : eos.objects) {
    for (const auto& p : o.places()) claim(o.name, p);
    for (const auto& t : o.transitions()) claim(o.name, t);
  }
  for (std::size_t p = 0; p < S.num_places(); ++p) {
    auto id = S.find_transition(idle_name(S.places()[p]));
    if (!id) {
      violate(S.places()[p], "idle-missing", "no idle transition");
      continue;
    }
    if (!(S.pre(*id) == delta(p, S.num_places())) || !(S.post(*id) == delta(p, S.num_places())))
      violate(idle_name(S.places()[p]), "idle-flow", "idle transition must consume and produce exactly its place");
  }
  for (std::size_t i = 0; i < eos.events.size(); ++i) {
    const auto& e = eos.events[i];
    std::string el = "event " + std::to_string(i);
    if (e.sys_t >= S.num_transitions()) {
      violate(el, "unknown-transition", "system transition out of range");
      continue;
    }
    if (e.theta.size() != eos.objects.size()) {
      violate(el, "theta-shape", "theta does not cover every object net");
      continue;
    }
    for (std::size_t n = 0; n < e.theta.size(); ++n)
      if (e.theta[n].size() != eos.objects[n].num_transitions())
        violate(el, "theta-shape", "theta of " + eos.objects[n].name + " has the wrong length");
    if (auto p = eos.idle_of.at(e.sys_t)) {
      const auto& th = e.theta[eos.typing[*p]];
      if (std::all_of(th.begin(), th.end(), [](Count c) { return c == 0; }))
        violate(el, "idle-without-object-step", "idle event must fire some object transition");
    }
  }
  for (std::size_t t = 0; t < S.num_transitions(); ++t)
    if (!destroyed_types(eos, t).empty()) {
      r.conservative = false;
      r.non_conservative.push_back(t);
    }
  return r;
}

std::vector<std::size_t> destroyed_types(const EOS& eos, std::size_t t) {
  if (t >= eos.system.num_transitions()) fail(Errc::UnknownTransition, "system transition index");
  std::set<std::size_t> in, out;
  for (std::size_t p = 0; p < eos.system.num_places(); ++p) {
    if (eos.system.pre(t)[p]) in.insert(eos.typing[p]);
    if (eos.system.post(t)[p]) out.insert(eos.typing[p]);
  }
  std::vector<std::size_t> d;
  std::set_difference(in.begin(), in.end(), out.begin(), out.end(), std::back_inserter(d));
  return d;
}

bool event_autonomous(const Event& e) {
  for (const auto& th : e.theta)
    for (Count c : th)
      if (c) return false;
  return true;
}

bool eos_normalized(const EOS& eos, std::string* why) {
  std::vector<int> uses(eos.system.num_transitions(), 0);
  for (const auto& e : eos.events) {
    if (++uses.at(e.sys_t) > 1) {
      if (why) *why = "transition '" + eos.system.transitions()[e.sys_t] + "' occurs in several events";
      return false;
    }
    if (!event_autonomous(e) && !destroyed_types(eos, e.sys_t).empty()) {
      if (why) *why = "destroying transition '" + eos.system.transitions()[e.sys_t] + "' synchronizes";
      return false;
    }
  }
  return true;
}

Vec project(const EOS& eos, const NestedMarking& m, Projection which) {
  if (which.system) {
    Vec v(eos.system.num_places());
    for (const auto& t : m) v.inc(t.place);
    return v;
  }
  if (which.object >= eos.objects.size()) fail(Errc::UnknownObjectNet, "object net index");
  Vec v(eos.objects[which.object].num_places());
  for (const auto& t : m)
    if (eos.typing.at(t.place) == which.object) v = v + t.inner;
  return v;
}

// All ways to split `total` into `parts` ordered non-negative parts.
static void compositions(Count total, std::size_t parts, std::vector<std::vector<Count>>& out) {
  std::vector<Count> cur(parts, 0);
  std::function<void(std::size_t, Count)> rec = [&](std::size_t i, Count left) {
    if (i + 1 == parts) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (Count c = 0; c <= left; ++c) {
      cur[i] = c;
      rec(i + 1, left - c);
    }
  };
  if (parts == 0) {
    if (total == 0) out.push_back({});
    return;
  }
  rec(0, total);
}

EventModeList event_modes(const EOS& eos, std::size_t ev, const NestedMarking& m, std::size_t cap) {
  if (ev >= eos.events.size()) fail(Errc::UnknownEvent, "event index " + std::to_string(ev));
  const Event& e = eos.events[ev];
  const auto& S = eos.system;
  const Vec& pre = S.pre(e.sys_t);
  const Vec& post = S.post(e.sys_t);
  const std::size_t nobj = eos.objects.size();
  EventModeList out;

  // Distinct tokens with multiplicities, per input place.
  struct Group {
    std::size_t place;
    Count need;
    std::vector<std::pair<NestedToken, Count>> avail;
  };
  std::vector<Group> groups;
  for (std::size_t p = 0; p < S.num_places(); ++p) {
    if (!pre[p]) continue;
    Group g{p, pre[p], {}};
    for (const auto& t : m)
      if (t.place == p) {
        if (!g.avail.empty() && g.avail.back().first == t)
          ++g.avail.back().second;
        else
          g.avail.push_back({t, 1});
      }
    Count have = 0;
    for (auto& a : g.avail) have += a.second;
    if (have < g.need) return out;
    groups.push_back(std::move(g));
  }

  std::vector<Vec> obj_pre(nobj), obj_post(nobj);
  for (std::size_t n = 0; n < nobj; ++n) {
    obj_pre[n] = pn_pre_of(eos.objects[n], e.theta.at(n));
    obj_post[n] = pn_post_of(eos.objects[n], e.theta.at(n));
  }
  std::vector<std::vector<std::size_t>> slots(nobj);
  for (std::size_t p = 0; p < S.num_places(); ++p)
    for (Count k = 0; k < post[p]; ++k) slots[eos.typing[p]].push_back(p);

  std::size_t raw = 0;
  const std::size_t raw_limit = cap > (SIZE_MAX - 4096) / 64 ? SIZE_MAX : cap * 64 + 4096;
  auto emit_rhos = [&](const NestedMarking& lambda) -> bool {
    std::vector<Vec> target(nobj);
    for (std::size_t n = 0; n < nobj; ++n) {
      Vec s = project(eos, lambda, {false, n});
      if (!leq(obj_pre[n], s)) return true;
      target[n] = (s - obj_pre[n]) + obj_post[n];
      if (slots[n].empty() && !target[n].is_zero()) return true;
    }
    // Per type: all assignments of inner vectors to its slots.
    std::vector<std::vector<std::vector<Vec>>> per_type(nobj);
    for (std::size_t n = 0; n < nobj; ++n) {
      std::size_t k = slots[n].size();
      std::size_t dim = eos.objects[n].num_places();
      std::vector<std::vector<Vec>> assigns{std::vector<Vec>(k, Vec(dim))};
      for (std::size_t q = 0; q < dim; ++q) {
        std::vector<std::vector<Count>> comps;
        compositions(target[n][q], k, comps);
        std::vector<std::vector<Vec>> next;
        for (const auto& a : assigns)
          for (const auto& c : comps) {
            if (++raw > raw_limit) return false;
            auto b = a;
            for (std::size_t i = 0; i < k; ++i) b[i].set(q, c[i]);
            next.push_back(std::move(b));
          }
        assigns = std::move(next);
      }
      per_type[n] = std::move(assigns);
    }
    std::set<NestedMarking> rhos;
    std::vector<std::size_t> pick(nobj, 0);
    while (true) {
      NestedMarking rho;
      for (std::size_t n = 0; n < nobj; ++n)
        for (std::size_t i = 0; i < slots[n].size(); ++i) rho.push_back({slots[n][i], per_type[n][pick[n]][i]});
      rhos.insert(nm_canon(std::move(rho)));
      if (++raw > raw_limit) return false;
      std::size_t n = 0;
      while (n < nobj) {
        if (++pick[n] < per_type[n].size()) break;
        pick[n] = 0;
        ++n;
      }
      if (n == nobj) break;
    }
    for (auto& rho : rhos) {
      if (out.modes.size() >= cap) return false;
      out.modes.push_back({lambda, rho});
    }
    return true;
  };

  std::vector<std::vector<Count>> choice(groups.size());
  std::function<bool(std::size_t)> pick_lambda = [&](std::size_t gi) -> bool {
    if (gi == groups.size()) {
      NestedMarking lambda;
      for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t a = 0; a < groups[g].avail.size(); ++a)
          for (Count c = 0; c < choice[g][a]; ++c) lambda.push_back(groups[g].avail[a].first);
      return emit_rhos(nm_canon(std::move(lambda)));
    }
    const auto& g = groups[gi];
    choice[gi].assign(g.avail.size(), 0);
    std::function<bool(std::size_t, Count)> rec = [&](std::size_t a, Count left) -> bool {
      if (a == g.avail.size()) return left == 0 ? pick_lambda(gi + 1) : true;
      for (Count c = std::min(left, g.avail[a].second) + 1; c-- > 0;) {
        choice[gi][a] = c;
        if (!rec(a + 1, left - c)) return false;
      }
      choice[gi][a] = 0;
      return true;
    };
    return rec(0, g.need);
  };
  if (!pick_lambda(0)) out.overflow = true;
  return out;
}

bool event_phi(const EOS& eos, std::size_t ev, const EventMode& mode) {
  if (ev >= eos.events.size()) fail(Errc::UnknownEvent, "event index " + std::to_string(ev));
  const Event& e = eos.events[ev];
  for (const auto* mk : {&mode.lambda, &mode.rho})
    for (const auto& t : *mk)
      if (t.place >= eos.system.num_places() || t.inner.size() != eos.type_of(t.place).num_places()) return false;
  if (!(project(eos, mode.lambda, {true, 0}) == eos.system.pre(e.sys_t))) return false;
  if (!(project(eos, mode.rho, {true, 0}) == eos.system.post(e.sys_t))) return false;
  for (std::size_t n = 0; n < eos.objects.size(); ++n) {
    Vec pre = pn_pre_of(eos.objects[n], e.theta[n]);
    Vec post = pn_post_of(eos.objects[n], e.theta[n]);
    Vec l = project(eos, mode.lambda, {false, n});
    if (!leq(pre, l)) return false;
    if (!(project(eos, mode.rho, {false, n}) == (l - pre) + post)) return false;
  }
  return true;
}

NestedMarking eos_fire(const EOS& eos, const NestedMarking& m, std::size_t ev, const EventMode& mode) {
  auto lambda = nm_canon(mode.lambda);
  if (!event_phi(eos, ev, mode) || !nm_includes(m, lambda))
    fail(Errc::ModeNotEnabled, "event mode not enabled");
  return nm_add(nm_sub(m, lambda), nm_canon(mode.rho));
}

bool leq_f(const NestedMarking& a, const NestedMarking& b) {
  return left_perfect_matching(a.size(), b.size(), [&](std::size_t i, std::size_t j) {
    return a[i].place == b[j].place && a[i].inner.size() == b[j].inner.size() && leq(a[i].inner, b[j].inner);
  });
}

std::vector<NestedMarking> lossy_successors(const NestedMarking& m) {
  std::set<NestedMarking> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i > 0 && m[i] == m[i - 1]) continue;
    NestedMarking r = m;
    r.erase(r.begin() + i);
    out.insert(r);
    for (std::size_t q = 0; q < m[i].inner.size(); ++q) {
      if (!m[i].inner[q]) continue;
      NestedMarking s = m;
      s[i].inner.set(q, s[i].inner[q] - 1);
      out.insert(nm_canon(std::move(s)));
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace nwn
