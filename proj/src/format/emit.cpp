#include <json.hpp>
#include <sstream>

#include "nwn/format.hpp"

namespace nwn {

namespace {

std::string entry(const std::string& place, Count c) { return c == 1 ? place : place + ":" + std::to_string(c); }

std::string flat_marking(const PetriNet& n, const Vec& m) {
  std::string out;
  for (std::size_t p = 0; p < m.size(); ++p)
    if (m[p]) out += (out.empty() ? "" : " ") + entry(n.places()[p], m[p]);
  return out;
}

std::string weighted(Count w, const std::string& s) { return w == 1 ? s : std::to_string(w) + "*" + s; }

void flat_net(std::ostringstream& os, const PetriNet& n, const std::vector<std::optional<std::size_t>>* idle) {
  if (n.num_places() && !idle) {
    os << "PLACES\n";
    for (const auto& p : n.places()) os << p << "\n";
  }
  bool any = false;
  for (std::size_t t = 0; t < n.num_transitions(); ++t) {
    if (idle && (*idle)[t]) continue;
    if (!any) os << "TRANS\n";
    any = true;
    os << n.transitions()[t] << "\n";
  }
  std::ostringstream arcs;
  for (std::size_t t = 0; t < n.num_transitions(); ++t) {
    if (idle && (*idle)[t]) continue;
    for (std::size_t p = 0; p < n.num_places(); ++p)
      if (n.pre(t)[p])
        arcs << n.places()[p] << " -> " << n.transitions()[t] << (n.pre(t)[p] == 1 ? "" : " : " + std::to_string(n.pre(t)[p]))
             << "\n";
    for (std::size_t p = 0; p < n.num_places(); ++p)
      if (n.post(t)[p])
        arcs << n.transitions()[t] << " -> " << n.places()[p]
             << (n.post(t)[p] == 1 ? "" : " : " + std::to_string(n.post(t)[p])) << "\n";
  }
  if (!arcs.str().empty()) os << "ARCS\n" << arcs.str();
}

void nu_net(std::ostringstream& os, const CNuPN& c, bool channels) {
  const NuPN& n = c.base;
  if (n.num_places()) {
    os << "PLACES\n";
    for (const auto& p : n.places()) os << p << "\n";
  }
  if (!n.transitions().empty()) {
    os << "TRANS\n";
    for (const auto& t : n.transitions()) {
      os << t.name;
      if (!t.vars.empty()) {
        os << " :";
        for (Var v : t.vars) os << " " << var_name(v);
      }
      os << "\n";
    }
  }
  std::ostringstream arcs;
  for (const auto& t : n.transitions()) {
    for (int dir = 0; dir < 2; ++dir)
      for (std::size_t p = 0; p < n.num_places(); ++p) {
        std::string label;
        for (std::size_t s = 0; s < t.vars.size(); ++s) {
          Count w = dir == 0 ? t.pre[s][p] : t.post[s][p];
          if (w) label += " " + weighted(w, var_name(t.vars[s]));
        }
        if (label.empty()) continue;
        if (dir == 0)
          arcs << n.places()[p] << " -> " << t.name << " :" << label << "\n";
        else
          arcs << t.name << " -> " << n.places()[p] << " :" << label << "\n";
      }
  }
  if (!arcs.str().empty()) os << "ARCS\n" << arcs.str();
  if (!channels) return;
  std::ostringstream ch;
  for (std::size_t t = 0; t < n.transitions().size(); ++t)
    for (const auto& e : c.selective(t))
      ch << n.trans(t).name << " : G(" << var_name(e.xi) << "," << var_name(e.xj) << ")[" << n.places()[e.p]
         << "] = " << n.places()[e.q] << "\n";
  if (!ch.str().empty()) os << "CHANNELS\n" << ch.str();
}

std::string event_text(const EOS& e, const Event& ev) {
  std::string out = e.system.transitions()[ev.sys_t];
  std::string rhs;
  for (std::size_t n = 0; n < ev.theta.size(); ++n)
    for (std::size_t t = 0; t < ev.theta[n].size(); ++t)
      if (ev.theta[n][t]) rhs += " " + weighted(ev.theta[n][t], e.objects[n].name + "." + e.objects[n].transitions()[t]);
  return rhs.empty() ? out : out + " :" + rhs;
}

std::string token_text(const EOS& e, const NestedToken& t) {
  std::string inner = flat_marking(e.type_of(t.place), t.inner);
  return "<" + e.system.places()[t.place] + (inner.empty() ? "" : " | " + inner) + ">";
}

}  // namespace

std::string pn_config_text(const PetriNet& net, const Vec& m) { return flat_marking(net, m); }

std::string nu_config_text(const NuPN& net, const NuConfig& c) {
  std::string out;
  for (const auto& v : c) {
    std::string t;
    for (std::size_t p = 0; p < v.size(); ++p)
      if (v[p]) t += (t.empty() ? "" : " ") + entry(net.places()[p], v[p]);
    out += (out.empty() ? "[" : " [") + t + "]";
  }
  return out;
}

std::string eos_config_text(const EOS& eos, const NestedMarking& m) {
  std::string out;
  for (const auto& t : m) out += (out.empty() ? "" : " ") + token_text(eos, t);
  return out;
}

std::string emit_doc(const Document& d) {
  std::ostringstream os;
  os << "nwn 1 " << formalism_name(d.kind) << "\n";
  if (!d.name.empty()) os << "name " << d.name << "\n";
  for (const auto& p : d.prov)
    os << "# prov " << p.id << " " << p.kind << " " << p.tag << " " << (p.source.empty() ? "-" : p.source) << "\n";
  auto section = [&](const char* kw, const std::vector<std::string>& lines) {
    os << kw << "\n";
    for (const auto& l : lines)
      if (!l.empty()) os << l << "\n";
  };
  switch (d.kind) {
    case Formalism::PN:
      flat_net(os, d.pn, nullptr);
      if (d.pn_init) section("INIT", {flat_marking(d.pn, *d.pn_init)});
      if (d.pn_target) section("TARGET", {flat_marking(d.pn, *d.pn_target)});
      break;
    case Formalism::EOS: {
      const EOS& e = d.eos;
      for (std::size_t n = 1; n < e.objects.size(); ++n) {
        os << "OBJECT " << e.objects[n].name << "\n";
        flat_net(os, e.objects[n], nullptr);
        os << "END\n";
      }
      if (e.system.num_places()) {
        os << "PLACES\n";
        for (std::size_t p = 0; p < e.system.num_places(); ++p)
          os << e.system.places()[p] << ":" << e.objects[e.typing[p]].name << "\n";
      }
      flat_net(os, e.system, &e.idle_of);
      if (!e.events.empty()) {
        os << "EVENTS\n";
        for (const auto& ev : e.events) os << event_text(e, ev) << "\n";
      }
      auto lines = [&](const NestedMarking& m) {
        std::vector<std::string> out;
        for (const auto& t : m) out.push_back(token_text(e, t));
        return out;
      };
      if (d.eos_init) section("INIT", lines(*d.eos_init));
      if (d.eos_target) section("TARGET", lines(*d.eos_target));
      break;
    }
    default: {
      nu_net(os, d.nu, d.kind != Formalism::NuPN);
      auto lines = [&](const NuConfig& c) {
        std::vector<std::string> out;
        for (const auto& v : canonical(c)) out.push_back(nu_config_text(d.nu.base, {v}));
        return out;
      };
      if (d.nu_init) section("INIT", lines(*d.nu_init));
      if (d.nu_target) section("TARGET", lines(*d.nu_target));
    }
  }
  return os.str();
}

namespace {

using J = nlohmann::ordered_json;

J flat_json(const PetriNet& n) {
  J j;
  j["name"] = n.name;
  j["places"] = n.places();
  j["transitions"] = n.transitions();
  J arcs = J::array();
  for (std::size_t t = 0; t < n.num_transitions(); ++t)
    for (std::size_t p = 0; p < n.num_places(); ++p) {
      if (n.pre(t)[p]) arcs.push_back({{"from", n.places()[p]}, {"to", n.transitions()[t]}, {"weight", n.pre(t)[p]}});
      if (n.post(t)[p]) arcs.push_back({{"from", n.transitions()[t]}, {"to", n.places()[p]}, {"weight", n.post(t)[p]}});
    }
  j["arcs"] = arcs;
  return j;
}

J named_vec(const std::vector<std::string>& names, const Vec& v) {
  J j = J::object();
  for (std::size_t p = 0; p < v.size(); ++p)
    if (v[p]) j[names[p]] = v[p];
  return j;
}

}  // namespace

std::string emit_json(const Document& d) {
  J j;
  j["format"] = "nwn";
  j["version"] = 1;
  j["kind"] = formalism_name(d.kind);
  j["name"] = d.name;
  J prov = J::array();
  for (const auto& p : d.prov) prov.push_back({{"id", p.id}, {"kind", p.kind}, {"tag", p.tag}, {"source", p.source}});
  j["provenance"] = prov;
  switch (d.kind) {
    case Formalism::PN:
      j["net"] = flat_json(d.pn);
      if (d.pn_init) j["init"] = named_vec(d.pn.places(), *d.pn_init);
      if (d.pn_target) j["target"] = named_vec(d.pn.places(), *d.pn_target);
      break;
    case Formalism::EOS: {
      const EOS& e = d.eos;
      J objs = J::array();
      for (std::size_t n = 1; n < e.objects.size(); ++n) objs.push_back(flat_json(e.objects[n]));
      j["objects"] = objs;
      j["system"] = flat_json(e.system);
      J typing = J::object();
      for (std::size_t p = 0; p < e.system.num_places(); ++p) typing[e.system.places()[p]] = e.objects[e.typing[p]].name;
      j["typing"] = typing;
      J evs = J::array();
      for (const auto& ev : e.events) {
        J th = J::object();
        for (std::size_t n = 0; n < ev.theta.size(); ++n)
          for (std::size_t t = 0; t < ev.theta[n].size(); ++t)
            if (ev.theta[n][t]) th[e.objects[n].name + "." + e.objects[n].transitions()[t]] = ev.theta[n][t];
        evs.push_back({{"transition", e.system.transitions()[ev.sys_t]}, {"theta", th}});
      }
      j["events"] = evs;
      auto marking = [&](const NestedMarking& m) {
        J a = J::array();
        for (const auto& t : m)
          a.push_back({{"place", e.system.places()[t.place]}, {"inner", named_vec(e.type_of(t.place).places(), t.inner)}});
        return a;
      };
      if (d.eos_init) j["init"] = marking(*d.eos_init);
      if (d.eos_target) j["target"] = marking(*d.eos_target);
      break;
    }
    default: {
      const NuPN& n = d.nu.base;
      J net;
      net["places"] = n.places();
      J ts = J::array();
      for (std::size_t t = 0; t < n.transitions().size(); ++t) {
        const auto& tr = n.trans(t);
        J vars = J::array();
        for (std::size_t s = 0; s < tr.vars.size(); ++s)
          vars.push_back({{"var", var_name(tr.vars[s])},
                          {"pre", named_vec(n.places(), tr.pre[s])},
                          {"post", named_vec(n.places(), tr.post[s])}});
        J ch = J::array();
        for (const auto& e : d.nu.selective(t))
          ch.push_back({{"from_var", var_name(e.xi)},
                        {"to_var", var_name(e.xj)},
                        {"from_place", n.places()[e.p]},
                        {"to_place", n.places()[e.q]}});
        ts.push_back({{"name", tr.name}, {"vars", vars}, {"channels", ch}});
      }
      net["transitions"] = ts;
      j["net"] = net;
      auto config = [&](const NuConfig& c) {
        J a = J::array();
        for (const auto& v : c) a.push_back(named_vec(n.places(), v));
        return a;
      };
      if (d.nu_init) j["init"] = config(*d.nu_init);
      if (d.nu_target) j["target"] = config(*d.nu_target);
    }
  }
  return j.dump(2) + "\n";
}

namespace {

std::string q(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void dot_flat(std::ostringstream& os, const PetriNet& n, const std::string& prefix, const std::string& indent) {
  for (const auto& p : n.places()) os << indent << q(prefix + p) << " [shape=circle,label=" << q(p) << "];\n";
  for (const auto& t : n.transitions()) os << indent << q(prefix + t) << " [shape=box,label=" << q(t) << "];\n";
  for (std::size_t t = 0; t < n.num_transitions(); ++t)
    for (std::size_t p = 0; p < n.num_places(); ++p) {
      if (n.pre(t)[p])
        os << indent << q(prefix + n.places()[p]) << " -> " << q(prefix + n.transitions()[t])
           << (n.pre(t)[p] > 1 ? " [label=" + q(std::to_string(n.pre(t)[p])) + "]" : "") << ";\n";
      if (n.post(t)[p])
        os << indent << q(prefix + n.transitions()[t]) << " -> " << q(prefix + n.places()[p])
           << (n.post(t)[p] > 1 ? " [label=" + q(std::to_string(n.post(t)[p])) + "]" : "") << ";\n";
    }
}

}  // namespace

std::string emit_dot(const Document& d) {
  std::ostringstream os;
  os << "digraph " << q(d.name.empty() ? "net" : d.name) << " {\n";
  switch (d.kind) {
    case Formalism::PN: dot_flat(os, d.pn, "", "  "); break;
    case Formalism::EOS:
      dot_flat(os, d.eos.system, "", "  ");
      for (std::size_t n = 1; n < d.eos.objects.size(); ++n) {
        os << "  subgraph " << q("cluster_" + d.eos.objects[n].name) << " {\n    label=" << q(d.eos.objects[n].name)
           << ";\n";
        dot_flat(os, d.eos.objects[n], d.eos.objects[n].name + ".", "    ");
        os << "  }\n";
      }
      break;
    default: {
      const NuPN& n = d.nu.base;
      for (const auto& p : n.places()) os << "  " << q(p) << " [shape=circle];\n";
      for (std::size_t t = 0; t < n.transitions().size(); ++t) {
        const auto& tr = n.trans(t);
        os << "  " << q(tr.name) << " [shape=box];\n";
        for (std::size_t p = 0; p < n.num_places(); ++p) {
          std::string in, out;
          for (std::size_t s = 0; s < tr.vars.size(); ++s) {
            if (tr.pre[s][p]) in += (in.empty() ? "" : " ") + weighted(tr.pre[s][p], var_name(tr.vars[s]));
            if (tr.post[s][p]) out += (out.empty() ? "" : " ") + weighted(tr.post[s][p], var_name(tr.vars[s]));
          }
          if (!in.empty()) os << "  " << q(n.places()[p]) << " -> " << q(tr.name) << " [label=" << q(in) << "];\n";
          if (!out.empty()) os << "  " << q(tr.name) << " -> " << q(n.places()[p]) << " [label=" << q(out) << "];\n";
        }
        for (const auto& e : d.nu.selective(t))
          os << "  " << q(n.places()[e.p]) << " -> " << q(n.places()[e.q]) << " [style=dashed,label="
             << q(tr.name + ": " + var_name(e.xi) + "->" + var_name(e.xj)) << "];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

bool doc_equal(const Document& a, const Document& b) {
  if (a.kind != b.kind || a.name != b.name || a.prov != b.prov) return false;
  switch (a.kind) {
    case Formalism::PN: return a.pn == b.pn && a.pn_init == b.pn_init && a.pn_target == b.pn_target;
    case Formalism::EOS:
      return eos_equal(a.eos, b.eos) && a.eos.events.size() == b.eos.events.size() && a.eos_init == b.eos_init &&
             a.eos_target == b.eos_target;
    default: {
      CNuPN x = a.nu, y = b.nu;
      fill_identity_defaults(x);
      fill_identity_defaults(y);
      auto cfg = [](const std::optional<NuConfig>& c) {
        return c ? std::optional<NuConfig>(canonical(*c)) : std::nullopt;
      };
      return x == y && cfg(a.nu_init) == cfg(b.nu_init) && cfg(a.nu_target) == cfg(b.nu_target);
    }
  }
}

}  // namespace nwn
