#include <algorithm>
#include <random>
#include <set>

#include "nwn/explore.hpp"

namespace nwn {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::size_t below(std::size_t n) { return n ? std::size_t(g_() % n) : 0; }
  std::size_t range(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(unsigned pct) { return below(100) < pct; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 g_;
};

std::string num(const char* prefix, std::size_t i) { return prefix + std::to_string(i + 1); }

Vec random_vec(Rng& r, std::size_t n, Count max_per_place, unsigned pct) {
  Vec v(n);
  for (std::size_t p = 0; p < n; ++p)
    if (r.chance(pct)) v.set(p, Count(r.range(1, std::max<Count>(1, max_per_place))));
  return v;
}

Vec nonzero_vec(Rng& r, std::size_t n, Count max_per_place, unsigned pct) {
  Vec v = random_vec(r, n, max_per_place, pct);
  if (v.is_zero()) v.set(r.below(n), Count(r.range(1, std::max<Count>(1, max_per_place))));
  return v;
}

Document random_pn(Rng& r, const SizeParams& sz) {
  Document d;
  d.kind = Formalism::PN;
  auto& n = d.pn;
  std::size_t P = std::max<std::size_t>(1, sz.places), T = std::max<std::size_t>(1, sz.transitions);
  for (std::size_t p = 0; p < P; ++p) n.add_place(num("p", p));
  for (std::size_t t = 0; t < T; ++t) {
    n.add_transition(num("t", t));
    Vec pre = nonzero_vec(r, P, 2, 40), post = random_vec(r, P, 2, 40);
    for (std::size_t p = 0; p < P; ++p) {
      if (pre[p]) n.add_pre(p, t, pre[p]);
      if (post[p]) n.add_post(t, p, post[p]);
    }
  }
  d.pn_init = random_vec(r, P, sz.tokens, 60);
  d.pn_target = random_vec(r, P, 2, 40);
  return d;
}

void random_nu_transition(Rng& r, NuPN& n, std::size_t t, const SizeParams& sz) {
  std::size_t P = n.num_places();
  std::size_t nv = r.range(1, std::max<std::size_t>(1, sz.vars));
  for (std::uint32_t k = 1; k <= nv; ++k) {
    Var x = xv(k);
    n.ensure_var(t, x);
    Vec pre = nonzero_vec(r, P, 1, 35), post = random_vec(r, P, 1, 35);
    for (std::size_t p = 0; p < P; ++p) {
      if (pre[p]) n.add_pre(p, t, x, pre[p]);
      if (post[p]) n.add_post(t, p, x, post[p]);
    }
  }
  if (sz.fresh && r.chance(30)) {
    Vec post = nonzero_vec(r, P, 1, 30);
    for (std::size_t p = 0; p < P; ++p)
      if (post[p]) n.add_post(t, p, nuv(1), post[p]);
  }
}

NuConfig random_config(Rng& r, std::size_t P, const SizeParams& sz) {
  NuConfig c;
  std::size_t k = r.range(1, std::max<std::size_t>(1, sz.tuples));
  for (std::size_t i = 0; i < k; ++i) c.push_back(nonzero_vec(r, P, sz.tokens, 50));
  return canonical(std::move(c));
}

Document random_nu(Rng& r, Formalism kind, const SizeParams& sz) {
  Document d;
  d.kind = kind;
  NuPN n;
  std::size_t P = std::max<std::size_t>(1, sz.places), T = std::max<std::size_t>(1, sz.transitions);
  for (std::size_t p = 0; p < P; ++p) n.add_place(num("p", p));
  for (std::size_t t = 0; t < T; ++t) {
    n.add_transition(num("t", t));
    random_nu_transition(r, n, t, sz);
  }
  d.nu = lift(n);
  if (kind == Formalism::CNuPN) {
    d.nu.transfers.assign(T, {});
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<Var> xs;
      for (Var v : n.trans(t).vars)
        if (v.kind == VarKind::Std) xs.push_back(v);
      std::size_t budget = 3;
      for (Var xi : xs)
        for (std::size_t p = 0; p < P && budget; ++p) {
          if (!r.chance(20)) continue;
          TransferEntry e{xi, xs[r.below(xs.size())], p, r.below(P)};
          if (e.identity()) continue;
          d.nu.add_transfer(t, e);
          --budget;
        }
    }
    fill_identity_defaults(d.nu);
  }
  d.nu_init = random_config(r, P, sz);
  d.nu_target = canonical({nonzero_vec(r, P, 1, 30)});
  return d;
}

Document random_rnu(Rng& r, const SizeParams& sz) {
  Document d;
  d.kind = Formalism::RNuPN;
  NuPN n;
  std::size_t P = std::max<std::size_t>(6, sz.places), T = std::max<std::size_t>(1, sz.transitions);
  for (std::size_t p = 0; p < P; ++p) n.add_place(num("p", p));
  std::vector<SpecialTransition> specials;
  for (std::size_t t = 0; t < T; ++t) {
    n.add_transition(num("t", t));
    if (t == 0 || r.chance(50)) {
      std::vector<std::size_t> ps(P);
      for (std::size_t p = 0; p < P; ++p) ps[p] = p;
      r.shuffle(ps);
      SpecialTransition s{t, ps[4 + r.below(P - 4)], ps[4 + r.below(P - 4)], ps[0], ps[1], ps[2], ps[3]};
      for (std::uint32_t k = 0; k < 3; ++k) n.ensure_var(t, xv(k));
      n.add_pre(s.p2, t, xv(0));
      n.add_post(t, s.p5, xv(0));
      n.add_pre(s.p3, t, xv(1));
      n.add_post(t, s.p3, xv(1));
      n.add_pre(s.p4, t, xv(2));
      n.add_post(t, s.p4, xv(2));
      specials.push_back(s);
    } else {
      random_nu_transition(r, n, t, sz);
    }
  }
  d.nu = lift(n);
  for (const auto& s : specials) d.nu.add_transfer(s.t, {xv(1), xv(2), s.r1, s.r2});
  for (const auto& s : specials) {
    auto& row = d.nu.transfers[s.t];
    row.erase(std::remove(row.begin(), row.end(), TransferEntry{xv(1), xv(1), s.r1, s.r1}), row.end());
    std::sort(row.begin(), row.end());
  }
  NuConfig c = random_config(r, P, sz);
  if (r.chance(60)) {
    const auto& s = specials[r.below(specials.size())];
    while (c.size() < 3) c.push_back(Vec(P));
    c[0].inc(s.p2);
    c[1].inc(s.p3);
    c[1].inc(s.r1, Count(r.range(0, sz.tokens)));
    c[2].inc(s.p4);
  }
  d.nu_init = canonical(std::move(c));
  d.nu_target = canonical({nonzero_vec(r, P, 1, 25)});
  return d;
}

Document random_eos(Rng& r, const SizeParams& sz) {
  Document d;
  d.kind = Formalism::EOS;
  EOS& e = d.eos;
  std::size_t nobj = r.range(1, std::max<std::size_t>(1, sz.objects));
  for (std::size_t k = 0; k < nobj; ++k) {
    PetriNet o;
    o.name = num("N", k);
    std::string pfx = "n" + std::to_string(k + 1);
    std::size_t op = r.range(1, 2), ot = r.range(1, 2);
    for (std::size_t p = 0; p < op; ++p) o.add_place(num((pfx + "p").c_str(), p));
    for (std::size_t t = 0; t < ot; ++t) {
      o.add_transition(num((pfx + "t").c_str(), t));
      Vec pre = random_vec(r, op, 1, 50), post = random_vec(r, op, 1, 50);
      if (pre.is_zero() && post.is_zero()) pre.set(r.below(op), 1);
      for (std::size_t p = 0; p < op; ++p) {
        if (pre[p]) o.add_pre(p, t, pre[p]);
        if (post[p]) o.add_post(t, p, post[p]);
      }
    }
    e.add_object(std::move(o));
  }
  std::size_t P = std::max<std::size_t>(1, sz.places);
  for (std::size_t p = 0; p < P; ++p) e.add_place(num("p", p), r.below(e.objects.size()));
  std::vector<std::size_t> plain;
  std::size_t T = std::max<std::size_t>(1, sz.transitions);
  for (std::size_t t = 0; t < T; ++t) {
    auto ti = e.add_transition(num("t", t));
    plain.push_back(ti);
    Vec pre = nonzero_vec(r, P, 1, 40), post = random_vec(r, P, 1, 40);
    for (std::size_t p = 0; p < P; ++p) {
      if (pre[p]) e.system.add_pre(p, ti);
      if (post[p]) e.system.add_post(ti, p);
    }
    if (sz.conservative)
      for (std::size_t ty : destroyed_types(e, ti)) {
        std::vector<std::size_t> same;
        for (std::size_t p = 0; p < P; ++p)
          if (e.typing[p] == ty) same.push_back(p);
        e.system.add_post(ti, same[r.below(same.size())]);
      }
  }
  std::vector<std::size_t> idle_cands;
  for (std::size_t p = 0; p < P; ++p)
    if (e.typing[p] != kBlack && e.objects[e.typing[p]].num_transitions()) idle_cands.push_back(e.idle(p));
  std::size_t nev = r.range(1, std::max<std::size_t>(1, sz.events));
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < nev; ++i) {
    std::size_t t;
    if (i < plain.size() && (idle_cands.empty() || r.chance(75))) {
      t = plain[i];
    } else if (!idle_cands.empty()) {
      t = idle_cands[r.below(idle_cands.size())];
    } else {
      break;
    }
    if (sz.normalized && std::find(used.begin(), used.end(), t) != used.end()) continue;
    used.push_back(t);
    Event ev = e.empty_event(t);
    if (auto ip = e.idle_of[t]) {
      auto ty = e.typing[*ip];
      ev.theta[ty][r.below(ev.theta[ty].size())] = 1;
    } else if (!(sz.normalized && !destroyed_types(e, t).empty())) {
      std::set<std::size_t> in, out;
      for (std::size_t p = 0; p < P; ++p) {
        if (e.system.pre(t)[p]) in.insert(e.typing[p]);
        if (e.system.post(t)[p]) out.insert(e.typing[p]);
      }
      for (std::size_t ty : in)
        if (ty != kBlack && out.count(ty))
          for (auto& c : ev.theta[ty])
            if (r.chance(35)) c = 1;
    }
    e.events.push_back(std::move(ev));
  }
  auto token = [&](std::uint64_t& budget) {
    std::size_t p = r.below(P);
    Vec inner(e.type_of(p).num_places());
    for (std::size_t q = 0; q < inner.size() && budget > 1; ++q)
      if (r.chance(50)) {
        Count c = Count(r.range(1, std::min<std::uint64_t>(2, budget - 1)));
        inner.set(q, c);
        budget -= c;
      }
    if (budget) --budget;
    return NestedToken{p, inner};
  };
  std::uint64_t budget = std::max<std::uint64_t>(1, sz.max_marking);
  NestedMarking init;
  std::size_t ntok = r.range(1, 3);
  for (std::size_t i = 0; i < ntok && budget; ++i) init.push_back(token(budget));
  d.eos_init = nm_canon(std::move(init));
  std::uint64_t tb = 2;
  d.eos_target = NestedMarking{token(tb)};
  return d;
}

}  // namespace

Document random_instance(Formalism kind, std::uint64_t seed, const SizeParams& size) {
  Rng r(seed * 0x9E3779B97F4A7C15ull + std::uint64_t(kind) + 1);
  Document d;
  switch (kind) {
    case Formalism::PN: d = random_pn(r, size); break;
    case Formalism::NuPN:
    case Formalism::CNuPN: d = random_nu(r, kind, size); break;
    case Formalism::RNuPN: d = random_rnu(r, size); break;
    case Formalism::EOS: d = random_eos(r, size); break;
  }
  d.name = std::string("random-") + formalism_name(kind) + "-" + std::to_string(seed);
  d.pn.name = d.nu.base.name = d.eos.name = d.name;
  return d;
}

}  // namespace nwn
