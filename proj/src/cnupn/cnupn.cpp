#include "nwn/cnupn.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nwn {

std::size_t CNuPN::add_transition(const std::string& t) {
  auto i = base.add_transition(t);
  transfers.resize(base.transitions().size());
  return i;
}

void CNuPN::add_transfer(std::size_t t, TransferEntry e) {
  transfers.resize(base.transitions().size());
  transfers.at(t).push_back(e);
}

std::vector<TransferEntry> CNuPN::selective(std::size_t t) const {
  std::vector<TransferEntry> out;
  if (t < transfers.size())
    for (const auto& e : transfers[t])
      if (!e.identity()) out.push_back(e);
  return out;
}

void fill_identity_defaults(CNuPN& net) {
  net.transfers.resize(net.base.transitions().size());
  for (std::size_t t = 0; t < net.transfers.size(); ++t) {
    std::set<std::pair<Var, std::size_t>> has;
    for (const auto& e : net.transfers[t]) has.insert({e.xi, e.p});
    for (Var v : net.base.trans(t).vars) {
      if (v.kind != VarKind::Std) continue;
      for (std::size_t p = 0; p < net.base.num_places(); ++p)
        if (!has.count({v, p})) net.transfers[t].push_back({v, v, p, p});
    }
    std::sort(net.transfers[t].begin(), net.transfers[t].end());
  }
}

CNuPN lift(const NuPN& base) {
  CNuPN c{base, {}};
  fill_identity_defaults(c);
  return c;
}

std::vector<Violation> validate_transfer(const CNuPN& net) {
  std::vector<Violation> out;
  const auto& P = net.base.places();
  for (std::size_t t = 0; t < net.base.transitions().size(); ++t) {
    const auto& tr = net.base.trans(t);
    const auto& entries = t < net.transfers.size() ? net.transfers[t] : std::vector<TransferEntry>{};
    std::map<std::tuple<Var, Var, std::size_t>, std::set<std::size_t>> rows;
    std::map<std::pair<Var, std::size_t>, std::set<Var>> targets;
    for (const auto& e : entries) {
      for (Var v : {e.xi, e.xj}) {
        auto s = tr.slot(v);
        if (!s || v.kind != VarKind::Std)
          out.push_back({tr.name, "unknown-variable", var_name(v) + " is not a standard variable of the transition"});
      }
      if (e.p >= P.size() || e.q >= P.size()) {
        out.push_back({tr.name, "unknown-place", "transfer row outside the place set"});
        continue;
      }
      rows[{e.xi, e.xj, e.p}].insert(e.q);
      targets[{e.xi, e.p}].insert(e.xj);
    }
    for (const auto& [k, qs] : rows)
      if (qs.size() > 1)
        out.push_back({tr.name, "row-multiple-ones",
                       "G(" + var_name(std::get<0>(k)) + "," + var_name(std::get<1>(k)) + ")[" +
                           P[std::get<2>(k)] + "] has more than one 1"});
    for (const auto& [k, xs] : targets)
      if (xs.size() > 1)
        out.push_back({tr.name, "multi-target",
                       "row " + P[k.second] + " of " + var_name(k.first) + " feeds several variables"});
    for (Var v : tr.vars) {
      if (v.kind != VarKind::Std) continue;
      for (std::size_t p = 0; p < P.size(); ++p)
        if (!targets.count({v, p}))
          out.push_back({tr.name, "missing-default", "no row for " + var_name(v) + " at " + P[p]});
    }
  }
  return out;
}

static std::map<Var, std::size_t> binding(const NuTransition& tr, const NuMode& e) {
  std::map<Var, std::size_t> b;
  std::size_t k = 0;
  for (Var v : tr.vars)
    if (v.kind == VarKind::Std) b[v] = e.inst[k++];
  return b;
}

StagedFire cnupn_fire_staged(const CNuPN& net, const NuConfig& m, std::size_t t, const NuMode& e) {
  if (!nupn_mode_enabled(net.base, m, t, e))
    fail(Errc::ModeNotEnabled, "mode not enabled for '" + net.base.trans(t).name + "'");
  const auto& tr = net.base.trans(t);
  auto b = binding(tr, e);
  StagedFire s;
  s.stage1 = m;
  for (std::size_t i = 0; i < tr.vars.size(); ++i)
    if (tr.vars[i].kind == VarKind::Std) s.stage1[b[tr.vars[i]]] = s.stage1[b[tr.vars[i]]] - tr.pre[i];
  s.stage2 = s.stage1;
  for (const auto& [v, inst] : b) s.stage2[inst] = Vec(net.base.num_places());
  if (t < net.transfers.size())
    for (const auto& en : net.transfers[t]) {
      Count c = s.stage1[b.at(en.xi)][en.p];
      if (c) s.stage2[b.at(en.xj)].inc(en.q, c);
    }
  s.final = s.stage2;
  for (std::size_t i = 0; i < tr.vars.size(); ++i) {
    if (tr.vars[i].kind == VarKind::Std) {
      auto& tup = s.final[b[tr.vars[i]]];
      tup = tup + tr.post[i];
    } else {
      s.final.push_back(tr.post[i]);
    }
  }
  return s;
}

NuConfig cnupn_fire(const CNuPN& net, const NuConfig& m, std::size_t t, const NuMode& e) {
  return cnupn_fire_staged(net, m, t, e).final;
}

const SpecialTransition* RnuMeta::find(std::size_t t) const {
  for (const auto& s : special)
    if (s.t == t) return &s;
  return nullptr;
}

static std::optional<std::size_t> unit_place(const Vec& v) {
  if (v.total() != 1) return std::nullopt;
  for (std::size_t p = 0; p < v.size(); ++p)
    if (v[p]) return p;
  return std::nullopt;
}

RnuCheck is_rnupn(const CNuPN& net) {
  RnuCheck r;
  auto bad = [&](const std::string& t, const std::string& why) {
    r.ok = false;
    r.report = "transition '" + t + "': " + why;
    return r;
  };
  for (std::size_t t = 0; t < net.base.transitions().size(); ++t) {
    auto sel = net.selective(t);
    const auto& tr = net.base.trans(t);
    if (sel.empty()) continue;
    if (sel.size() != 1) return bad(tr.name, "more than one selective transfer");
    if (tr.vars != std::vector<Var>{xv(0), xv(1), xv(2)}) return bad(tr.name, "variables are not exactly x0 x1 x2");
    auto p2 = unit_place(tr.pre[0]), p5 = unit_place(tr.post[0]);
    auto p3 = unit_place(tr.pre[1]), p3o = unit_place(tr.post[1]);
    auto p4 = unit_place(tr.pre[2]), p4o = unit_place(tr.post[2]);
    if (!p2 || !p5) return bad(tr.name, "x0 must consume one token and produce one token");
    if (!p3 || p3 != p3o) return bad(tr.name, "x1 must read exactly one place");
    if (!p4 || p4 != p4o) return bad(tr.name, "x2 must read exactly one place");
    std::set<std::size_t> quad{*p2, *p3, *p4, *p5};
    if (quad.size() != 4) return bad(tr.name, "flow places are not distinct");
    const auto& g = sel[0];
    if (g.xi != xv(1) || g.xj != xv(2)) return bad(tr.name, "transfer is not from x1 to x2");
    if (quad.count(g.p) || quad.count(g.q)) return bad(tr.name, "renamed places overlap the flow places");
    r.meta.special.push_back({t, g.p, g.q, *p2, *p3, *p4, *p5});
  }
  auto v = validate_transfer(net);
  if (!v.empty()) return bad(v[0].element, v[0].condition);
  r.ok = true;
  return r;
}

NuConfig rnupn_fire_direct(const CNuPN& net, const RnuMeta& meta, const NuConfig& m, std::size_t t,
                           const NuMode& e) {
  const auto* s = meta.find(t);
  if (!s) return nupn_fire(net.base, m, t, e);
  NuConfig out = nupn_fire(net.base, m, t, e);
  std::size_t i1 = e.inst[1], i2 = e.inst[2];
  Count moved = out[i1][s->r1];
  Vec a = out[i1] - scale(delta(s->r1, net.base.num_places()), moved);
  Vec b = out[i2] + scale(delta(s->r2, net.base.num_places()), moved);
  out[i1] = a;
  out[i2] = b;
  return out;
}

CNuPN pn_as_cnupn(const PetriNet& pn) {
  NuPN n;
  n.name = pn.name;
  for (const auto& p : pn.places()) n.add_place(p);
  for (std::size_t t = 0; t < pn.num_transitions(); ++t) {
    auto ti = n.add_transition(pn.transitions()[t]);
    n.ensure_var(ti, xv(1));
    for (std::size_t p = 0; p < pn.num_places(); ++p) {
      if (pn.pre(t)[p]) n.add_pre(p, ti, xv(1), pn.pre(t)[p]);
      if (pn.post(t)[p]) n.add_post(ti, p, xv(1), pn.post(t)[p]);
    }
  }
  return lift(n);
}

}  // namespace nwn
