#include <algorithm>
#include <map>
#include <set>

#include "build.hpp"

namespace nwn {

using detail::gen;
using detail::NetBuild;

namespace {

struct Plan {
  std::vector<TransferEntry> order;
  bool helper = false;
};

// Direct renaming needs distinct tuples and an order in which every source
// cell is emptied before another entry writes into it.
Plan plan_for(const CNuPN& net, std::size_t t) {
  auto sel = net.selective(t);
  std::sort(sel.begin(), sel.end(), [](const TransferEntry& a, const TransferEntry& b) {
    return std::tie(a.xi, a.p, a.xj, a.q) < std::tie(b.xi, b.p, b.xj, b.q);
  });
  Plan plan;
  for (const auto& e : sel)
    if (e.xi == e.xj) {
      plan.helper = true;
      plan.order = sel;
      return plan;
    }
  const std::size_t k = sel.size();
  std::vector<std::vector<std::size_t>> succ(k);
  std::vector<std::size_t> indeg(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && sel[j].xj == sel[i].xi && sel[j].q == sel[i].p) {
        succ[i].push_back(j);
        ++indeg[j];
      }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < k; ++i)
    if (!indeg[i]) ready.insert(i);
  while (!ready.empty()) {
    auto i = *ready.begin();
    ready.erase(ready.begin());
    plan.order.push_back(sel[i]);
    for (auto j : succ[i])
      if (!--indeg[j]) ready.insert(j);
  }
  if (plan.order.size() != k) {
    plan.helper = true;
    plan.order = sel;
  }
  return plan;
}

Var shift(Var v) { return v.kind == VarKind::Std ? xv(v.index + 1) : v; }

}  // namespace

CnupnToRnupn cnupn_to_rnupn(const CNuPN& net) {
  auto v = nupn_validate(net.base);
  auto w = validate_transfer(net);
  v.insert(v.end(), w.begin(), w.end());
  if (!v.empty()) fail(Errc::InvalidSource, "invalid source net: " + v[0].element + ": " + v[0].condition);

  const auto& src = net.base;
  const std::size_t T = src.transitions().size();
  CnupnToRnupn r;
  r.target.base.name = gen("rnupn/" + src.name);
  r.source_places = src.num_places();
  NetBuild b{r.target, r.prov};

  std::vector<Plan> plans;
  std::set<std::uint32_t> std_vars;
  std::size_t max_bar = 0;
  for (std::size_t t = 0; t < T; ++t) {
    plans.push_back(plan_for(net, t));
    r.k.push_back(plans.back().order.size());
    r.helper.push_back(plans.back().helper);
    if (plans.back().helper) max_bar = std::max(max_bar, plans.back().order.size());
    for (Var x : src.trans(t).vars)
      if (x.kind == VarKind::Std) std_vars.insert(x.index);
  }

  for (const auto& p : src.places()) b.place(p, "source", p);
  std::map<std::uint32_t, std::size_t> mark;
  for (auto i : std_vars) mark[i] = b.place(gen("mark/x" + std::to_string(i)), "mark", "x" + std::to_string(i));
  std::optional<std::size_t> helper_mark;
  if (max_bar) helper_mark = b.place(gen("mark/helper"), "mark", "helper");
  std::vector<std::size_t> bar;
  for (std::size_t i = 1; i <= max_bar; ++i) bar.push_back(b.place(gen("bar" + std::to_string(i)), "move", ""));
  std::vector<std::vector<std::size_t>> steps(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& name = src.trans(t).name;
    std::size_t k = plans[t].order.size();
    std::size_t inner = plans[t].helper ? 2 * k : k;
    for (std::size_t i = 1; i <= inner + 1; ++i)
      steps[t].push_back(b.place(gen(name + "/step" + std::to_string(i)), "control", name));
  }
  r.q_select = b.place(gen("q_select"), "control", "");
  const Var x0 = xv(0);

  for (std::size_t t = 0; t < T; ++t) {
    const auto& tr = src.trans(t);
    const auto& plan = plans[t];
    const std::string& name = tr.name;
    std::uint32_t max_std = 0, max_fresh = 0;
    for (Var x : tr.vars) {
      auto& m = x.kind == VarKind::Std ? max_std : max_fresh;
      m = std::max(m, x.index);
    }
    const Var helper_std = xv(max_std + 2);
    const Var helper_fresh = nuv(max_fresh + 1);

    auto pre = b.trans(gen(name + "/pre"), "pre", name);
    b.pre(r.q_select, pre, x0);
    b.post(pre, steps[t][0], x0);
    for (std::size_t i = 0; i < tr.vars.size(); ++i) {
      Var x = tr.vars[i];
      if (x.kind != VarKind::Std) continue;
      for (std::size_t p = 0; p < src.num_places(); ++p)
        if (tr.pre[i][p]) b.pre(p, pre, shift(x), tr.pre[i][p]);
      b.post(pre, mark.at(x.index), shift(x));
    }
    if (plan.helper) b.post(pre, *helper_mark, helper_fresh);

    std::size_t step = 0;
    auto special = [&](const std::string& n, const std::string& tag, std::size_t m1, std::size_t m2, std::size_t p,
                       std::size_t q) {
      auto s = b.trans(gen(name + "/" + n), tag, name);
      b.pre(steps[t][step], s, x0);
      b.post(s, steps[t][step + 1], x0);
      b.read(m1, s, xv(1));
      b.read(m2, s, xv(2));
      b.chan(s, xv(1), p, xv(2), q);
      ++step;
    };
    const auto& ord = plan.order;
    if (plan.helper) {
      for (std::size_t i = 0; i < ord.size(); ++i)
        special("move" + std::to_string(i + 1), "move", mark.at(ord[i].xi.index), *helper_mark, ord[i].p, bar[i]);
      for (std::size_t i = 0; i < ord.size(); ++i)
        special("rename" + std::to_string(i + 1), "rename", *helper_mark, mark.at(ord[i].xj.index), bar[i], ord[i].q);
    } else {
      for (std::size_t i = 0; i < ord.size(); ++i)
        special("rename" + std::to_string(i + 1), "rename", mark.at(ord[i].xi.index), mark.at(ord[i].xj.index),
                ord[i].p, ord[i].q);
    }

    auto post = b.trans(gen(name + "/post"), "post", name);
    b.pre(steps[t][step], post, x0);
    b.post(post, r.q_select, x0);
    for (std::size_t i = 0; i < tr.vars.size(); ++i) {
      Var x = tr.vars[i];
      if (x.kind == VarKind::Std) b.pre(mark.at(x.index), post, shift(x));
      b.n.base.ensure_var(post, shift(x));
      for (std::size_t p = 0; p < src.num_places(); ++p)
        if (tr.post[i][p]) b.post(post, p, shift(x), tr.post[i][p]);
    }
    if (plan.helper) b.pre(*helper_mark, post, helper_std);
  }
  fill_identity_defaults(r.target);
  auto chk = is_rnupn(r.target);
  if (!chk.ok) fail(Errc::NotRnu, "internal: generated net is not a rename net: " + chk.report);
  r.meta = chk.meta;
  return r;
}

NuConfig CnupnToRnupn::encode(const NuConfig& m) const {
  const std::size_t dim = target.base.num_places();
  NuConfig out;
  for (const auto& v : m) {
    if (v.size() != source_places) fail(Errc::DomainMismatch, "tuple dimension");
    Vec w = v;
    w.resize(dim);
    out.push_back(std::move(w));
  }
  out.push_back(delta(q_select, dim));
  return canonical(std::move(out));
}

bool CnupnToRnupn::at_select(const NuConfig& c) const { return decode(c).has_value(); }

std::optional<NuConfig> CnupnToRnupn::decode(const NuConfig& c) const {
  const std::size_t dim = target.base.num_places();
  NuConfig out;
  std::size_t controls = 0;
  for (const auto& v : c) {
    if (v == delta(q_select, dim)) {
      ++controls;
      continue;
    }
    for (std::size_t p = source_places; p < dim; ++p)
      if (v[p]) return std::nullopt;
    out.push_back(Vec(std::vector<Count>(v.data().begin(), v.data().begin() + long(source_places))));
  }
  if (controls != 1) return std::nullopt;
  return canonical(std::move(out));
}

}  // namespace nwn
