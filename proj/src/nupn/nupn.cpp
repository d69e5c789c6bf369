#include "nwn/nupn.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace nwn {

std::string var_name(Var v) {
  return (v.kind == VarKind::Std ? "x" : "nu") + std::to_string(v.index);
}

std::optional<Var> parse_var(const std::string& s) {
  auto digits = [](const std::string& d) {
    return !d.empty() && d.size() < 9 && std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (s.size() > 1 && s[0] == 'x' && digits(s.substr(1))) return xv(std::stoul(s.substr(1)));
  if (s.size() > 2 && s.rfind("nu", 0) == 0 && digits(s.substr(2))) return nuv(std::stoul(s.substr(2)));
  return std::nullopt;
}

std::optional<std::size_t> NuTransition::slot(Var v) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == v) return i;
  return std::nullopt;
}

std::size_t NuTransition::num_std() const {
  std::size_t n = 0;
  for (Var v : vars) n += v.kind == VarKind::Std;
  return n;
}

bool operator==(const NuTransition& a, const NuTransition& b) {
  return a.name == b.name && a.vars == b.vars && a.pre == b.pre && a.post == b.post;
}

bool operator==(const NuPN& a, const NuPN& b) { return a.places_ == b.places_ && a.trans_ == b.trans_; }

std::size_t NuPN::add_place(const std::string& p) {
  if (find_place(p)) fail(Errc::ValidationError, "duplicate place '" + p + "'");
  places_.push_back(p);
  for (auto& t : trans_) {
    for (auto& v : t.pre) v.resize(places_.size());
    for (auto& v : t.post) v.resize(places_.size());
  }
  return places_.size() - 1;
}

std::size_t NuPN::add_transition(const std::string& t) {
  if (find_transition(t)) fail(Errc::ValidationError, "duplicate transition '" + t + "'");
  trans_.push_back(NuTransition{t, {}, {}, {}});
  return trans_.size() - 1;
}

std::size_t NuPN::ensure_var(std::size_t t, Var v) {
  auto& tr = trans_.at(t);
  if (auto s = tr.slot(v)) return *s;
  auto pos = std::lower_bound(tr.vars.begin(), tr.vars.end(), v) - tr.vars.begin();
  tr.vars.insert(tr.vars.begin() + pos, v);
  tr.pre.insert(tr.pre.begin() + pos, Vec(places_.size()));
  tr.post.insert(tr.post.begin() + pos, Vec(places_.size()));
  return pos;
}

void NuPN::add_pre(std::size_t p, std::size_t t, Var v, Count w) {
  auto s = ensure_var(t, v);
  trans_[t].pre[s].inc(p, w);
}

void NuPN::add_post(std::size_t t, std::size_t p, Var v, Count w) {
  auto s = ensure_var(t, v);
  trans_[t].post[s].inc(p, w);
}

std::optional<std::size_t> NuPN::find_place(const std::string& p) const {
  for (std::size_t i = 0; i < places_.size(); ++i)
    if (places_[i] == p) return i;
  return std::nullopt;
}

std::optional<std::size_t> NuPN::find_transition(const std::string& t) const {
  for (std::size_t i = 0; i < trans_.size(); ++i)
    if (trans_[i].name == t) return i;
  return std::nullopt;
}

std::size_t NuPN::place(const std::string& p) const {
  auto i = find_place(p);
  if (!i) fail(Errc::ResolutionError, "unknown place '" + p + "'");
  return *i;
}

std::size_t NuPN::transition(const std::string& t) const {
  auto i = find_transition(t);
  if (!i) fail(Errc::UnknownTransition, "unknown transition '" + t + "'");
  return *i;
}

const NuTransition& NuPN::trans(std::size_t t) const {
  if (t >= trans_.size()) fail(Errc::UnknownTransition, "transition index " + std::to_string(t));
  return trans_[t];
}

NuConfig canonical(NuConfig c) {
  c.erase(std::remove_if(c.begin(), c.end(), [](const Vec& v) { return v.is_zero(); }), c.end());
  std::sort(c.begin(), c.end());
  return c;
}

bool config_equal(const NuConfig& a, const NuConfig& b) { return canonical(a) == canonical(b); }

std::string config_to_string(const NuConfig& c) {
  std::ostringstream os;
  os << "{{";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << to_string(c[i]);
  os << "}}";
  return os.str();
}

std::vector<Violation> nupn_validate(const NuPN& net) {
  std::vector<Violation> out;
  for (const auto& t : net.transitions()) {
    for (std::size_t s = 0; s < t.vars.size(); ++s) {
      Var v = t.vars[s];
      if (v.kind == VarKind::Fresh && !t.pre[s].is_zero())
        out.push_back({t.name, "fresh-in-pre", var_name(v) + " labels an input arc"});
      if (v.kind == VarKind::Std && t.pre[s].is_zero() && !t.post[s].is_zero())
        out.push_back({t.name, "unbound-standard-out", var_name(v) + " labels an output arc but no input arc"});
      if (v.kind == VarKind::Std && t.pre[s].is_zero() && t.post[s].is_zero())
        out.push_back({t.name, "unused-standard", var_name(v) + " labels no arc"});
    }
  }
  return out;
}

static std::vector<std::size_t> std_slots(const NuTransition& tr) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < tr.vars.size(); ++i)
    if (tr.vars[i].kind == VarKind::Std) s.push_back(i);
  return s;
}

ModeList nupn_modes(const NuPN& net, const NuConfig& m, std::size_t t, const ModeOptions& opt) {
  const auto& tr = net.trans(t);
  auto slots = std_slots(tr);
  if (opt.strict && slots.size() > 1)
    fail(Errc::ValidationError, "transition '" + tr.name + "' binds several standard variables");
  std::vector<std::vector<std::size_t>> cand(slots.size());
  for (std::size_t k = 0; k < slots.size(); ++k)
    for (std::size_t i = 0; i < m.size(); ++i)
      if (leq(tr.pre[slots[k]], m[i])) cand[k].push_back(i);
  ModeList out;
  std::vector<std::size_t> cur(slots.size());
  std::vector<char> used(m.size(), 0);
  auto rec = [&](auto&& self, std::size_t k) -> bool {
    if (k == slots.size()) {
      if (out.modes.size() >= opt.cap) {
        out.overflow = true;
        return false;
      }
      out.modes.push_back(NuMode{cur});
      return true;
    }
    for (std::size_t i : cand[k]) {
      if (used[i]) continue;
      used[i] = 1;
      cur[k] = i;
      bool go = self(self, k + 1);
      used[i] = 0;
      if (!go) return false;
    }
    return true;
  };
  rec(rec, 0);
  return out;
}

bool nupn_mode_enabled(const NuPN& net, const NuConfig& m, std::size_t t, const NuMode& e) {
  const auto& tr = net.trans(t);
  auto slots = std_slots(tr);
  if (e.inst.size() != slots.size()) return false;
  std::set<std::size_t> seen;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (e.inst[k] >= m.size() || !seen.insert(e.inst[k]).second) return false;
    if (!leq(tr.pre[slots[k]], m[e.inst[k]])) return false;
  }
  return true;
}

NuConfig nupn_fire(const NuPN& net, const NuConfig& m, std::size_t t, const NuMode& e) {
  if (!nupn_mode_enabled(net, m, t, e))
    fail(Errc::ModeNotEnabled, "mode not enabled for '" + net.trans(t).name + "'");
  const auto& tr = net.trans(t);
  NuConfig out = m;
  std::size_t k = 0;
  for (std::size_t s = 0; s < tr.vars.size(); ++s) {
    if (tr.vars[s].kind == VarKind::Std) {
      auto& tup = out[e.inst[k++]];
      tup = (tup - tr.pre[s]) + tr.post[s];
    } else {
      out.push_back(tr.post[s]);
    }
  }
  return out;
}

}  // namespace nwn
