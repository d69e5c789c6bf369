#include <set>
#include <sstream>

#include "nwn/explore.hpp"

namespace nwn {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Covered: return "covered";
    case Outcome::NotFound: return "not-found";
    case Outcome::Error: return "error";
  }
  return "?";
}

Expansion<Vec> PnSystem::successors(const Vec& s, const Limits&) const {
  Expansion<Vec> e;
  for (std::size_t t = 0; t < net_.num_transitions(); ++t)
    if (pn_enabled(net_, s, t)) e.next.push_back({net_.transitions()[t], pn_fire(net_, s, t)});
  return e;
}

NuSystem::NuSystem(const CNuPN& net, NuSemantics sem) : net_(net), sem_(sem) {
  if (sem == NuSemantics::RenameDirect) {
    auto r = is_rnupn(net);
    if (!r.ok) fail(Errc::NotRnu, r.report);
    meta_ = r.meta;
  }
}

std::string NuSystem::mode_label(std::size_t t, const NuConfig& s, const NuMode& e) const {
  const auto& tr = net_.base.trans(t);
  std::string out = tr.name;
  std::size_t k = 0;
  for (Var v : tr.vars)
    if (v.kind == VarKind::Std) out += " " + var_name(v) + "=" + to_string(s[e.inst[k++]]);
  return out;
}

Expansion<NuConfig> NuSystem::successors(const NuConfig& s, const Limits& lim) const {
  Expansion<NuConfig> e;
  for (std::size_t t = 0; t < net_.base.transitions().size(); ++t) {
    auto modes = nupn_modes(net_.base, s, t, {lim.max_modes, false});
    if (modes.overflow) e.truncated = true;
    std::set<std::string> seen;
    for (const auto& m : modes.modes) {
      auto label = mode_label(t, s, m);
      if (!seen.insert(label).second) continue;
      NuConfig next;
      switch (sem_) {
        case NuSemantics::Plain: next = nupn_fire(net_.base, s, t, m); break;
        case NuSemantics::Channel: next = cnupn_fire(net_, s, t, m); break;
        case NuSemantics::RenameDirect: next = rnupn_fire_direct(net_, meta_, s, t, m); break;
      }
      e.next.push_back({std::move(label), canonical(std::move(next))});
    }
  }
  return e;
}

bool NuSystem::covers(const NuConfig& big, const NuConfig& small) const { return tuple_embeds(small, big); }

std::size_t NuSystem::hash(const NuConfig& s) const {
  std::size_t h = s.size();
  for (const auto& v : s) h = hash_combine(h, hash_vec(v));
  return h;
}

std::uint64_t NuSystem::tokens(const NuConfig& s) const {
  std::uint64_t n = 0;
  for (const auto& v : s) n += v.total();
  return n;
}

std::string NuSystem::show(const NuConfig& s) const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << (i ? ", " : "") << "[";
    bool first = true;
    for (std::size_t p = 0; p < s[i].size(); ++p)
      if (s[i][p]) {
        os << (first ? "" : " ") << net_.base.places()[p];
        if (s[i][p] > 1) os << ":" << s[i][p];
        first = false;
      }
    os << "]";
  }
  os << "}";
  return os.str();
}

EosSystem::EosSystem(const EOS& eos) : eos_(eos), lossy_place_(eos.system.num_places(), false) {
  for (std::size_t t = 0; t < eos.system.num_transitions(); ++t) {
    auto d = destroyed_types(eos, t);
    for (std::size_t p = 0; p < eos.system.num_places(); ++p)
      if (eos.system.pre(t)[p] && std::find(d.begin(), d.end(), eos.typing[p]) != d.end()) lossy_place_[p] = true;
  }
}

Expansion<NestedMarking> EosSystem::successors(const NestedMarking& s, const Limits& lim) const {
  Expansion<NestedMarking> e;
  for (std::size_t ev = 0; ev < eos_.events.size(); ++ev) {
    auto modes = event_modes(eos_, ev, s, lim.max_modes);
    if (modes.overflow) e.truncated = true;
    const auto& tname = eos_.system.transitions()[eos_.events[ev].sys_t];
    for (const auto& m : modes.modes)
      e.next.push_back({std::to_string(ev) + ":" + tname + " " + nm_to_string(eos_, m.lambda) + " => " +
                            nm_to_string(eos_, m.rho),
                        nm_canon(eos_fire(eos_, s, ev, m))});
  }
  return e;
}

Expansion<NestedMarking> EosSystem::lossy(const NestedMarking& s, LossMode mode) const {
  Expansion<NestedMarking> e;
  if (mode == LossMode::None) return e;
  if (mode == LossMode::Exhaustive) {
    for (auto& m : lossy_successors(s)) e.next.push_back({"lossy:" + nm_to_string(eos_, m), std::move(m)});
    return e;
  }
  std::set<NestedMarking> seen;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!lossy_place_[s[i].place]) continue;
    for (std::size_t q = 0; q < s[i].inner.size(); ++q) {
      if (!s[i].inner[q]) continue;
      NestedMarking m = s;
      m[i].inner.set(q, m[i].inner[q] - 1);
      m = nm_canon(std::move(m));
      if (seen.insert(m).second) e.next.push_back({"lossy:" + nm_to_string(eos_, m), m});
    }
  }
  return e;
}

std::optional<std::size_t> EosSystem::event_of(const std::string& label) {
  auto colon = label.find(':');
  if (colon == std::string::npos || colon == 0) return std::nullopt;
  std::size_t v = 0;
  for (std::size_t i = 0; i < colon; ++i) {
    if (label[i] < '0' || label[i] > '9') return std::nullopt;
    v = v * 10 + std::size_t(label[i] - '0');
  }
  return v;
}

std::size_t concurrent_depth(const EOS& eos, const std::vector<std::string>& trace) {
  std::vector<std::size_t> ts, level;
  std::size_t height = 0;
  const auto& S = eos.system;
  auto dependent = [&](std::size_t a, std::size_t b) {
    for (std::size_t p = 0; p < S.num_places(); ++p) {
      bool ai = S.pre(a)[p], ao = S.post(a)[p], bi = S.pre(b)[p], bo = S.post(b)[p];
      if ((ai && bi) || (ai && bo) || (ao && bi)) return true;
    }
    return false;
  };
  for (const auto& label : trace) {
    auto ev = EosSystem::event_of(label);
    if (!ev) continue;
    std::size_t t = eos.events.at(*ev).sys_t, lv = 1;
    for (std::size_t j = 0; j < ts.size(); ++j)
      if (dependent(ts[j], t)) lv = std::max(lv, level[j] + 1);
    ts.push_back(t);
    level.push_back(lv);
    height = std::max(height, lv);
  }
  return height;
}

}  // namespace nwn
