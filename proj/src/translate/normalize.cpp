#include <set>

#include "build.hpp"

namespace nwn {

using detail::EosBuild;
using detail::gen;

std::vector<std::string> destroy_set(const EOS& eos, const std::string& t) {
  std::vector<std::string> out;
  for (auto n : destroyed_types(eos, eos.system.transition(t))) out.push_back(eos.objects[n].name);
  return out;
}

static std::vector<std::pair<std::size_t, std::size_t>> theta_pairs(const Event& e) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t n = 0; n < e.theta.size(); ++n)
    for (std::size_t t = 0; t < e.theta[n].size(); ++t)
      for (Count k = 0; k < e.theta[n][t]; ++k) out.push_back({n, t});
  return out;
}

Normalized normalize_eos(const EOS& eos) {
  auto rep = eos_validate(eos);
  if (!rep.violations.empty())
    fail(Errc::ValidationError, rep.violations[0].element + ": " + rep.violations[0].condition);
  const auto& S = eos.system;
  std::vector<std::vector<std::size_t>> evs(S.num_transitions());
  for (std::size_t i = 0; i < eos.events.size(); ++i) evs[eos.events[i].sys_t].push_back(i);
  auto needs_split = [&](std::size_t ev) {
    const auto& e = eos.events[ev];
    return !event_autonomous(e) && !destroyed_types(eos, e.sys_t).empty();
  };

  Normalized r;
  EOS& out = r.target;
  out.name = eos.name;
  for (std::size_t n = 1; n < eos.objects.size(); ++n) out.add_object(eos.objects[n]);
  std::optional<std::size_t> enable_type;
  for (std::size_t i = 0; i < eos.events.size(); ++i)
    if (needs_split(i) && !enable_type) {
      PetriNet en;
      en.name = gen("enable");
      enable_type = out.add_object(std::move(en));
      r.prov.push_back({gen("enable"), "object-net", "enable", ""});
    }
  for (std::size_t p = 0; p < S.num_places(); ++p) out.add_place(S.places()[p], eos.typing[p]);
  EosBuild b{out, r.prov};

  auto copy_flow = [&](std::size_t from, std::size_t to) {
    for (std::size_t p = 0; p < S.num_places(); ++p) {
      if (S.pre(from)[p]) b.in(p, to, S.pre(from)[p]);
      if (S.post(from)[p]) b.out(to, p, S.post(from)[p]);
    }
  };

  for (std::size_t t = 0; t < S.num_transitions(); ++t) {
    const auto& tn = S.transitions()[t];
    const bool idle = eos.idle_of[t].has_value();
    if (evs[t].empty() && !idle) {
      copy_flow(t, out.add_transition(tn));
      continue;
    }
    for (std::size_t k = 0; k < evs[t].size(); ++k) {
      const auto& e = eos.events[evs[t][k]];
      const std::string name = k == 0 ? tn : gen(tn + "/copy" + std::to_string(k + 1));
      if (!needs_split(evs[t][k])) {
        std::size_t nt;
        if (k == 0) {
          nt = idle ? out.idle(*eos.idle_of[t]) : out.add_transition(tn);
          if (!idle) copy_flow(t, nt);
        } else {
          nt = b.trans(name, "copy", tn);
          copy_flow(t, nt);
        }
        b.event(nt, theta_pairs(e));
        continue;
      }
      std::set<std::size_t> consumed;
      for (std::size_t p = 0; p < S.num_places(); ++p)
        if (S.pre(t)[p]) consumed.insert(eos.typing[p]);
      auto en_pre = b.place(gen(name + "/enable_pre"), *enable_type, "enable", tn);
      auto en_post = b.place(gen(name + "/enable_post"), *enable_type, "enable", tn);
      std::vector<std::size_t> inter;
      for (auto n : consumed) inter.push_back(b.place(gen(name + "/inter/" + eos.objects[n].name), n, "inter", tn));
      auto tp = b.trans(gen(name + "/pre"), "split-pre", tn);
      auto tq = b.trans(gen(name + "/post"), "split-post", tn);
      for (std::size_t p = 0; p < S.num_places(); ++p) {
        if (S.pre(t)[p]) b.in(p, tp, S.pre(t)[p]);
        if (S.post(t)[p]) b.out(tq, p, S.post(t)[p]);
      }
      b.in(en_pre, tp);
      b.out(tp, en_post);
      for (auto i : inter) {
        b.out(tp, i);
        b.in(i, tq);
      }
      b.in(en_post, tq);
      b.out(tq, en_pre);
      b.event(tp, theta_pairs(e));
      b.event(tq);
      r.enable_pre.push_back(en_pre);
    }
  }
  return r;
}

NestedMarking Normalized::encode(const NestedMarking& m) const {
  NestedMarking out = m;
  for (auto p : enable_pre) out.push_back({p, Vec()});
  return nm_canon(std::move(out));
}

Closure conservative_closure(const EOS& eos) {
  std::string why;
  if (!eos_normalized(eos, &why)) fail(Errc::NotNormalized, why);
  Closure r;
  r.target = eos;
  EosBuild b{r.target, r.prov};
  for (std::size_t n = 0; n < eos.objects.size(); ++n)
    r.trash.push_back(b.place(gen("trash/" + eos.objects[n].name), n, "trash", eos.objects[n].name));
  for (std::size_t t = 0; t < eos.system.num_transitions(); ++t)
    for (auto n : destroyed_types(eos, t)) b.out(t, r.trash[n]);
  return r;
}

}  // namespace nwn
