#include <algorithm>
#include <map>

#include "build.hpp"

namespace nwn {

using detail::gen;
using detail::NetBuild;

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Blocks {
  // Object-place copies followed by the Id place.
  std::vector<std::size_t> places;
  std::size_t id = 0;
};

struct Compiler {
  const EOS& eos;
  CeosToCnupn& r;
  NetBuild b;
  std::vector<Blocks> block;
  std::map<std::size_t, Blocks> merged, updated;
  const Var xcs = xv(0);

  Compiler(const EOS& e, CeosToCnupn& out) : eos(e), r(out), b{out.target, out.prov} {}

  std::size_t add_place(const std::string& name, const std::string& tag, const std::string& src,
                        std::optional<std::pair<std::size_t, std::size_t>> blk = std::nullopt) {
    auto p = b.place(name, tag, src);
    r.block.resize(p + 1);
    r.block[p] = blk;
    return p;
  }

  Blocks make_block(const std::string& prefix, std::size_t type, const std::string& tag, const std::string& src,
                    std::optional<std::size_t> sys_place) {
    Blocks bl;
    const auto& N = eos.objects[type];
    for (std::size_t q = 0; q < N.num_places(); ++q) {
      std::optional<std::pair<std::size_t, std::size_t>> at;
      if (sys_place) at = std::pair{*sys_place, q};
      bl.places.push_back(add_place(prefix + "/" + N.places()[q], tag, src, at));
    }
    std::optional<std::pair<std::size_t, std::size_t>> at;
    if (sys_place) at = std::pair{*sys_place, npos};
    bl.id = add_place(prefix + "/Id", tag, src, at);
    return bl;
  }

  const Blocks& merged_of(std::size_t n) {
    if (!merged.count(n)) merged[n] = make_block(gen("merged/" + eos.objects[n].name), n, "N-merged", eos.objects[n].name, {});
    return merged[n];
  }
  const Blocks& updated_of(std::size_t n) {
    if (!updated.count(n))
      updated[n] = make_block(gen("updated/" + eos.objects[n].name), n, "N-updated", eos.objects[n].name, {});
    return updated[n];
  }

  // One serialized phase for the objects of type n consumed and produced by the event.
  void type_phase(const Event& ev, std::size_t n, std::size_t ctrl_in, std::size_t ctrl_out) {
    const auto& S = eos.system;
    const auto& N = eos.objects[n];
    const std::string tau = S.transitions()[ev.sys_t];
    const std::string pre = gen(tau + "/" + N.name);
    const auto& mer = merged_of(n);
    const auto& upd = updated_of(n);
    const std::size_t dim = N.num_places();

    // merging
    auto p_merged = add_place(pre + "/merged", "e-merging", tau);
    auto t_merge = b.trans(pre + "/merge", "e-merging", tau);
    b.pre(ctrl_in, t_merge, xcs);
    b.post(t_merge, p_merged, xcs);
    std::uint32_t next_var = 1;
    std::optional<Var> target;
    for (std::size_t ph = 0; ph < S.num_places(); ++ph) {
      if (eos.typing[ph] != n) continue;
      for (Count k = 0; k < S.pre(ev.sys_t)[ph]; ++k) {
        Var x = xv(next_var++);
        if (!target) target = x;
        b.pre(block[ph].id, t_merge, x);
        for (std::size_t q = 0; q < dim; ++q) b.chan(t_merge, x, block[ph].places[q], *target, mer.places[q]);
      }
    }
    if (!target) {
      b.post(t_merge, mer.id, nuv(1));
    } else {
      b.post(t_merge, mer.id, *target);
    }

    // updating
    std::vector<std::size_t> fired;
    auto p_select = add_place(pre + "/select", "e-updating", tau);
    auto p_fin = add_place(pre + "/finishing", "e-updating", tau);
    auto t_init = b.trans(pre + "/init", "e-updating", tau);
    b.pre(p_merged, t_init, xcs);
    b.post(t_init, p_select, xcs);
    auto t_fin = b.trans(pre + "/fin", "e-updating", tau);
    b.pre(p_select, t_fin, xcs);
    b.post(t_fin, p_fin, xcs);
    for (std::size_t ot = 0; ot < N.num_transitions(); ++ot) {
      Count k = ev.theta[n][ot];
      if (!k) continue;
      const auto& tn = N.transitions()[ot];
      auto p_fire = add_place(pre + "/fire/" + tn, "e-updating", tau);
      auto p_fired = add_place(pre + "/fired/" + tn, "e-updating", tau);
      b.post(t_init, p_fire, xcs, k);
      b.pre(p_fired, t_fin, xcs, k);
      auto te = b.trans(pre + "/t/" + tn, "e-updating", tau);
      b.pre(p_fire, te, xcs);
      b.post(te, p_fired, xcs);
      b.read(mer.id, te, xv(1));
      for (std::size_t q = 0; q < dim; ++q) {
        if (N.pre(ot)[q]) b.pre(mer.places[q], te, xv(1), N.pre(ot)[q]);
        if (N.post(ot)[q]) b.post(te, upd.places[q], xv(1), N.post(ot)[q]);
      }
    }
    b.pre(mer.id, t_fin, xv(1));
    b.post(t_fin, upd.id, xv(1));
    for (std::size_t q = 0; q < dim; ++q) b.chan(t_fin, xv(1), mer.places[q], xv(1), upd.places[q]);

    // distributing
    std::vector<std::size_t> slots;
    for (std::size_t ph = 0; ph < S.num_places(); ++ph)
      if (eos.typing[ph] == n)
        for (Count k = 0; k < S.post(ev.sys_t)[ph]; ++k) slots.push_back(ph);
    const std::size_t cnt = slots.size();
    auto p_new = add_place(pre + "/new", "e-id-creation", tau);
    auto t_id = b.trans(pre + "/id", "e-id-creation", tau);
    b.pre(p_fin, t_id, xcs);
    for (std::size_t i = 0; i < cnt; ++i) b.post(t_id, p_new, nuv(std::uint32_t(i + 1)));
    std::size_t ctrl;
    std::optional<std::size_t> p_transfer;
    auto transfer_place = [&] {
      if (!p_transfer) p_transfer = add_place(pre + "/transferring", "e-transfer", tau);
      return *p_transfer;
    };
    if (cnt >= 2) {
      ctrl = add_place(pre + "/ided", "e-id-creation", tau);
    } else {
      ctrl = transfer_place();
    }
    b.post(t_id, ctrl, xcs);
    for (std::size_t i = 1; i < cnt; ++i) {
      const std::string tag = "e-move(" + std::to_string(i) + ")";
      const std::string mp = pre + "/move" + std::to_string(i);
      auto moving = add_place(mp + "/moving", tag, tau);
      auto rename = add_place(mp + "/rename", tag, tau);
      auto t_move = b.trans(mp, tag, tau);
      b.pre(ctrl, t_move, xcs);
      b.post(t_move, moving, xcs);
      b.pre(p_new, t_move, xv(1));
      b.post(t_move, rename, xv(1));
      const auto& dst = block[slots[i - 1]];
      for (std::size_t q = 0; q < dim; ++q) {
        auto tq = b.trans(mp + "/" + N.places()[q], tag, tau);
        b.read(moving, tq, xcs);
        b.pre(upd.places[q], tq, xv(1));
        b.read(rename, tq, xv(2));
        b.post(tq, dst.places[q], xv(2));
      }
      auto next = i + 1 < cnt ? add_place(mp + "/next", tag, tau) : transfer_place();
      auto t_moved = b.trans(mp + "/moved", tag, tau);
      b.pre(moving, t_moved, xcs);
      b.post(t_moved, next, xcs);
      b.pre(rename, t_moved, xv(1));
      b.post(t_moved, dst.id, xv(1));
      ctrl = next;
    }
    const auto& last = block[slots.back()];
    auto t_tr = b.trans(pre + "/transfer", "e-transfer", tau);
    b.pre(ctrl, t_tr, xcs);
    b.post(t_tr, ctrl_out, xcs);
    b.pre(upd.id, t_tr, xv(1));
    b.pre(p_new, t_tr, xv(2));
    b.post(t_tr, last.id, xv(2));
    for (std::size_t q = 0; q < dim; ++q) b.chan(t_tr, xv(1), upd.places[q], xv(2), last.places[q]);
  }

  void event(const Event& ev) {
    const auto& S = eos.system;
    const std::string tau = S.transitions()[ev.sys_t];
    std::vector<std::size_t> involved;
    for (std::size_t n = 0; n < eos.objects.size(); ++n) {
      bool in = false, out = false;
      for (std::size_t ph = 0; ph < S.num_places(); ++ph) {
        if (eos.typing[ph] != n) continue;
        in = in || S.pre(ev.sys_t)[ph];
        out = out || S.post(ev.sys_t)[ph];
      }
      if (in || out) {
        involved.push_back(n);
        continue;
      }
      const auto& N = eos.objects[n];
      if (!pn_pre_of(N, ev.theta[n]).is_zero() || !pn_post_of(N, ev.theta[n]).is_zero()) return;
    }
    if (involved.empty()) {
      auto t = b.trans(gen(tau + "/skip"), "e-skip", tau);
      b.pre(r.init, t, xcs);
      b.post(t, r.init, xcs);
      return;
    }
    std::size_t ctrl = r.init;
    for (std::size_t k = 0; k < involved.size(); ++k) {
      std::size_t out = r.init;
      if (k + 1 < involved.size())
        out = add_place(gen(tau + "/handoff" + std::to_string(k + 1)), "handoff", tau);
      type_phase(ev, involved[k], ctrl, out);
      ctrl = out;
    }
  }

  void run() {
    const auto& S = eos.system;
    for (std::size_t ph = 0; ph < S.num_places(); ++ph)
      block.push_back(make_block(gen("block/" + S.places()[ph]), eos.typing[ph], "p-block", S.places()[ph], ph));
    r.init = add_place(gen("init"), "control", "");
    for (const auto& ev : eos.events) event(ev);
    fill_identity_defaults(r.target);
  }
};

}  // namespace

CeosToCnupn ceos_to_cnupn(const EOS& eos) {
  auto rep = eos_validate(eos);
  if (!rep.violations.empty())
    fail(Errc::ValidationError, rep.violations[0].element + ": " + rep.violations[0].condition);
  if (!rep.conservative) fail(Errc::NotConservative, "transition '" + eos.system.transitions()[rep.non_conservative[0]] + "' destroys a type");
  std::string why;
  if (!eos_normalized(eos, &why)) fail(Errc::NotNormalized, why);
  CeosToCnupn r;
  r.target.base.name = gen("cnupn/" + eos.name);
  for (std::size_t p = 0; p < eos.system.num_places(); ++p) r.place_dims.push_back(eos.type_of(p).num_places());
  Compiler c(eos, r);
  c.run();
  r.source_places = eos.system.num_places();
  return r;
}

NuConfig CeosToCnupn::encode(const NestedMarking& m) const {
  const std::size_t dim = target.base.num_places();
  std::vector<std::vector<std::size_t>> where(source_places);
  std::vector<std::size_t> id(source_places, npos);
  for (std::size_t p = 0; p < block.size(); ++p) {
    if (!block[p]) continue;
    auto [sp, q] = *block[p];
    if (q == npos) {
      id[sp] = p;
    } else {
      if (where[sp].size() <= q) where[sp].resize(q + 1, npos);
      where[sp][q] = p;
    }
  }
  NuConfig out;
  for (const auto& tok : m) {
    if (tok.place >= source_places) fail(Errc::IndexOutOfRange, "system place index");
    Vec v(dim);
    for (std::size_t q = 0; q < tok.inner.size(); ++q)
      if (tok.inner[q]) v.set(where[tok.place].at(q), tok.inner[q]);
    v.set(id[tok.place], 1);
    out.push_back(std::move(v));
  }
  out.push_back(delta(init, dim));
  return canonical(std::move(out));
}

bool CeosToCnupn::at_init(const NuConfig& c) const { return decode(c).has_value(); }

std::optional<NestedMarking> CeosToCnupn::decode(const NuConfig& c) const {
  const std::size_t dim = target.base.num_places();
  NestedMarking out;
  std::size_t controls = 0;
  for (const auto& v : c) {
    if (v.is_zero()) continue;
    if (v == delta(init, dim)) {
      ++controls;
      continue;
    }
    std::optional<std::size_t> sp;
    for (std::size_t p = 0; p < dim; ++p) {
      if (!v[p]) continue;
      if (!block[p]) return std::nullopt;
      if (sp && *sp != block[p]->first) return std::nullopt;
      sp = block[p]->first;
    }
    Vec inner(place_dims.at(*sp));
    bool has_id = false;
    for (std::size_t p = 0; p < dim; ++p) {
      if (!block[p] || block[p]->first != *sp) continue;
      auto q = block[p]->second;
      if (q == npos) {
        if (v[p] != 1) return std::nullopt;
        has_id = true;
      } else {
        inner.set(q, v[p]);
      }
    }
    if (!has_id) return std::nullopt;
    out.push_back({*sp, std::move(inner)});
  }
  if (controls != 1) return std::nullopt;
  return nm_canon(std::move(out));
}

}  // namespace nwn
