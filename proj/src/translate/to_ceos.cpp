#include <algorithm>
#include <map>

#include "build.hpp"

namespace nwn {

using detail::EosBuild;
using detail::gen;

namespace {

struct ObjectNet {
  std::size_t index = 0;
  std::map<std::pair<std::size_t, Var>, std::size_t> tx;
  std::vector<std::size_t> add, check, rem;
};

ObjectNet build_object(EOS& eos, Provenance& prov, const NuPN& net, const RnuMeta* meta) {
  PetriNet nd;
  nd.name = gen("ND");
  ObjectNet o;
  for (const auto& p : net.places()) {
    nd.add_place(p);
    prov.push_back({p, "object-place", "ND", p});
  }
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    if (meta && meta->find(t)) continue;
    const auto& tr = net.trans(t);
    for (std::size_t i = 0; i < tr.vars.size(); ++i) {
      auto name = gen(tr.name + "/" + var_name(tr.vars[i]));
      auto ot = nd.add_transition(name);
      prov.push_back({name, "object-transition", "ND", tr.name});
      for (std::size_t p = 0; p < net.num_places(); ++p) {
        if (tr.pre[i][p]) nd.add_pre(p, ot, tr.pre[i][p]);
        if (tr.post[i][p]) nd.add_post(ot, p, tr.post[i][p]);
      }
      o.tx[{t, tr.vars[i]}] = ot;
    }
  }
  if (meta) {
    for (std::size_t p = 0; p < net.num_places(); ++p) {
      const auto& pn = net.places()[p];
      auto a = nd.add_transition(gen("add(" + pn + ")"));
      auto c = nd.add_transition(gen("check(" + pn + ")"));
      auto r = nd.add_transition(gen("rem(" + pn + ")"));
      nd.add_post(a, p);
      nd.add_pre(p, c);
      nd.add_post(c, p);
      nd.add_pre(p, r);
      for (auto* n : {"add(", "check(", "rem("})
        prov.push_back({gen(std::string(n) + pn + ")"), "object-transition", "injected", pn});
      o.add.push_back(a);
      o.check.push_back(c);
      o.rem.push_back(r);
    }
  }
  prov.push_back({nd.name, "object-net", "ND", net.name});
  o.index = eos.add_object(std::move(nd));
  return o;
}

void standard_block(EosBuild& b, const NuPN& net, std::size_t t, const ObjectNet& o, std::size_t sim,
                    std::size_t select_tran) {
  const auto& tr = net.trans(t);
  const std::string T = tr.name;
  const std::size_t N = o.index;
  if (tr.vars.empty()) {
    auto skip = b.trans(gen(T + "/skip"), "skip", T);
    b.in(select_tran, skip);
    b.out(skip, select_tran);
    b.event(skip);
    return;
  }
  const std::size_t n = tr.vars.size();
  std::vector<std::size_t> sel_place(n), sel_t(n), selected(n, 0), run(n);
  sel_place[0] = select_tran;
  for (std::size_t i = 1; i < n; ++i)
    sel_place[i] = b.place(gen(T + "/select_" + var_name(tr.vars[i])), kBlack, "select", T);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = var_name(tr.vars[i]);
    if (tr.vars[i].kind == VarKind::Std) selected[i] = b.place(gen(T + "/selected_" + v), N, "selected", T);
    run[i] = b.place(gen(T + "/run_" + v), kBlack, "run", T);
  }
  auto report = b.place(gen(T + "/report"), kBlack, "report", T);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = var_name(tr.vars[i]);
    sel_t[i] = b.trans(gen(T + "/t_select_" + v), "select", T);
    b.in(sel_place[i], sel_t[i]);
    if (tr.vars[i].kind == VarKind::Std) {
      b.in(sim, sel_t[i]);
      b.out(sel_t[i], selected[i]);
    }
    if (i + 1 < n) {
      b.out(sel_t[i], sel_place[i + 1]);
    } else {
      for (std::size_t j = 0; j < n; ++j) b.out(sel_t[i], run[j]);
    }
    b.event(sel_t[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto f = b.trans(gen(T + "/t_fire_" + var_name(tr.vars[i])), "fire", T);
    if (tr.vars[i].kind == VarKind::Std) b.in(selected[i], f);
    b.in(run[i], f);
    b.out(f, sim);
    b.out(f, report);
    b.event(f, {{N, o.tx.at({t, tr.vars[i]})}});
  }
  auto done = b.trans(gen(T + "/t_done"), "done", T);
  b.in(report, done, Count(n));
  b.out(done, select_tran);
  b.event(done);
}

struct GadgetPlaces {
  std::size_t ready_x1, copy_x1, copy_x2, trash, run_tran, tran_done;
};

void transfer_gadgets(EosBuild& b, const std::string& T, const std::vector<std::string>& places,
                      const ObjectNet& o, std::size_t r1, std::size_t r2, const GadgetPlaces& g) {
  auto running = b.place(gen(T + "/running_tran"), kBlack, "transfer", T);
  for (std::size_t i = 0; i < places.size(); ++i) {
    const auto& pi = places[i];
    const bool to_x2 = i == r1;
    const std::size_t j = to_x2 ? r2 : i;
    const std::size_t copy = to_x2 ? g.copy_x2 : g.copy_x1;
    auto s = b.place(gen(T + "/s_" + pi), kBlack, "transfer(" + pi + ")", T);
    auto rem = b.trans(gen(T + "/t_rem_" + pi), "transfer(" + pi + ")", T);
    b.in(g.ready_x1, rem);
    b.in(g.run_tran, rem);
    b.out(rem, g.ready_x1);
    b.out(rem, s);
    b.out(rem, running);
    b.event(rem, {{o.index, o.rem[i]}});
    auto add = b.trans(gen(T + "/t_add_" + pi), "transfer(" + pi + ")", T);
    b.in(s, add);
    b.in(running, add);
    b.in(copy, add);
    b.out(add, copy);
    b.out(add, g.run_tran);
    b.event(add, {{o.index, o.add[j]}});
  }
  auto stop = b.trans(gen(T + "/t_stop_tran"), "transfer", T);
  b.in(g.run_tran, stop);
  b.in(g.ready_x1, stop);
  b.in(g.trash, stop);
  b.out(stop, g.trash);
  b.out(stop, g.tran_done, 2);
  b.event(stop);
}

void special_block(EosBuild& b, const NuPN& net, const SpecialTransition& s, const ObjectNet& o, std::size_t sim,
                   std::size_t select_tran, std::size_t trash) {
  const std::string T = net.trans(s.t).name;
  const std::size_t N = o.index;
  auto ready_x0 = b.place(gen(T + "/ready_x0"), N, "special", T);
  auto ready_x1 = b.place(gen(T + "/ready_x1"), N, "special", T);
  auto copy_x1 = b.place(gen(T + "/copy_x1"), N, "special", T);
  auto copy_x2 = b.place(gen(T + "/copy_x2"), N, "special", T);
  auto selected_x0 = b.place(gen(T + "/selected_x0"), kBlack, "special", T);
  auto selected_x1 = b.place(gen(T + "/selected_x1"), kBlack, "special", T);
  auto selected_x2 = b.place(gen(T + "/selected_x2"), kBlack, "special", T);
  auto run_x0 = b.place(gen(T + "/run_x0"), kBlack, "special", T);
  auto run_tran = b.place(gen(T + "/run_tran"), kBlack, "transfer", T);
  auto tran_done = b.place(gen(T + "/tran_done"), kBlack, "transfer", T);
  auto report = b.place(gen(T + "/report"), kBlack, "report", T);

  auto s0 = b.trans(gen(T + "/t_select_x0"), "special", T);
  b.in(select_tran, s0);
  b.in(sim, s0);
  b.out(s0, ready_x0);
  b.out(s0, selected_x0);
  b.event(s0, {{N, o.rem[s.p2]}, {N, o.add[s.p5]}});
  auto s1 = b.trans(gen(T + "/t_select_x1"), "special", T);
  b.in(selected_x0, s1);
  b.in(sim, s1);
  b.out(s1, ready_x1);
  b.out(s1, selected_x1);
  b.event(s1, {{N, o.check[s.p3]}});
  auto s2 = b.trans(gen(T + "/t_select_x2"), "special", T);
  b.in(selected_x1, s2);
  b.in(sim, s2);
  b.out(s2, copy_x2);
  b.out(s2, selected_x2);
  b.event(s2, {{N, o.check[s.p4]}});
  auto en = b.trans(gen(T + "/t_enabling"), "special", T);
  b.in(selected_x2, en);
  b.out(en, run_x0);
  b.out(en, run_tran);
  b.out(en, copy_x1);
  b.event(en);
  auto m0 = b.trans(gen(T + "/t_move_x0"), "special", T);
  b.in(ready_x0, m0);
  b.in(run_x0, m0);
  b.out(m0, sim);
  b.out(m0, report);
  b.event(m0);
  transfer_gadgets(b, T, net.places(), o, s.r1, s.r2, {ready_x1, copy_x1, copy_x2, trash, run_tran, tran_done});
  for (auto [name, from] : {std::pair{"/t_move_x1", copy_x1}, std::pair{"/t_move_x2", copy_x2}}) {
    auto m = b.trans(gen(T + name), "special", T);
    b.in(tran_done, m);
    b.in(from, m);
    b.out(m, sim);
    b.out(m, report);
    b.event(m);
  }
  auto done = b.trans(gen(T + "/t_done"), "done", T);
  b.in(report, done, 3);
  b.out(done, select_tran);
  b.event(done);
}

NupnToCeos compile(const NuPN& net, const RnuMeta* meta) {
  NupnToCeos r;
  r.target.name = gen("ceos/" + net.name);
  auto o = build_object(r.target, r.prov, net, meta);
  r.object = o.index;
  EosBuild b{r.target, r.prov};
  r.sim = b.place(gen("sim"), o.index, "sim", "");
  r.select_tran = b.place(gen("selectTran"), kBlack, "selectTran", "");
  if (meta) r.trash = b.place(gen("trash"), o.index, "trash", "");
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    if (meta) {
      if (const auto* s = meta->find(t)) {
        special_block(b, net, *s, o, r.sim, r.select_tran, *r.trash);
        continue;
      }
    }
    standard_block(b, net, t, o, r.sim, r.select_tran);
  }
  return r;
}

}  // namespace

NestedMarking NupnToCeos::encode(const NuConfig& m) const {
  NestedMarking out;
  for (const auto& v : canonical(m)) out.push_back({sim, v});
  out.push_back({select_tran, Vec()});
  if (trash) out.push_back({*trash, Vec(target.objects[object].num_places())});
  return nm_canon(std::move(out));
}

std::optional<NuConfig> NupnToCeos::decode(const NestedMarking& m) const {
  NuConfig c;
  std::size_t sel = 0, tr = 0;
  for (const auto& t : m) {
    if (t.place == sim) {
      c.push_back(t.inner);
    } else if (t.place == select_tran) {
      ++sel;
    } else if (trash && t.place == *trash && t.inner.is_zero()) {
      ++tr;
    } else {
      return std::nullopt;
    }
  }
  if (sel != 1 || tr != (trash ? 1u : 0u)) return std::nullopt;
  return canonical(std::move(c));
}

NupnToCeos nupn_to_ceos(const NuPN& net) {
  auto v = nupn_validate(net);
  if (!v.empty()) fail(Errc::InvalidSource, "invalid source net: " + v[0].element + ": " + v[0].condition);
  return compile(net, nullptr);
}

NupnToCeos rnupn_to_ceos(const CNuPN& net) {
  auto chk = is_rnupn(net);
  if (!chk.ok) fail(Errc::NotRnu, chk.report);
  auto v = nupn_validate(net.base);
  if (!v.empty()) fail(Errc::NotRnu, "invalid base net: " + v[0].element + ": " + v[0].condition);
  return compile(net.base, &chk.meta);
}

GadgetAssembly transfer_gadget_assembly(const std::vector<std::string>& places, std::size_t r1, std::size_t r2) {
  if (r1 >= places.size() || r2 >= places.size()) fail(Errc::IndexOutOfRange, "gadget place index");
  NuPN n;
  n.name = "gadget";
  for (const auto& p : places) n.add_place(p);
  GadgetAssembly g;
  Provenance prov;
  RnuMeta meta;
  auto o = build_object(g.eos, prov, n, &meta);
  g.object = o.index;
  EosBuild b{g.eos, prov};
  const std::string T = "gadget";
  g.ready_x1 = b.place(gen(T + "/ready_x1"), o.index, "special", T);
  g.copy_x1 = b.place(gen(T + "/copy_x1"), o.index, "special", T);
  g.copy_x2 = b.place(gen(T + "/copy_x2"), o.index, "special", T);
  g.trash = b.place(gen("trash"), o.index, "trash", T);
  g.run_tran = b.place(gen(T + "/run_tran"), kBlack, "transfer", T);
  g.tran_done = b.place(gen(T + "/tran_done"), kBlack, "transfer", T);
  transfer_gadgets(b, T, places, o, r1, r2, {g.ready_x1, g.copy_x1, g.copy_x2, g.trash, g.run_tran, g.tran_done});
  return g;
}

NestedMarking GadgetAssembly::initial(const Vec& m1, const Vec& m2, const Vec& m3) const {
  std::size_t dim = eos.objects[object].num_places();
  for (const auto* v : {&m1, &m2, &m3})
    if (v->size() != dim) fail(Errc::DomainMismatch, "gadget marking dimension");
  return nm_canon({{ready_x1, m1}, {copy_x1, Vec(dim)}, {copy_x2, m2}, {trash, m3}, {run_tran, Vec()}});
}

}  // namespace nwn
