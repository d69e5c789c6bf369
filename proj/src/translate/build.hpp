#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nwn/translate.hpp"

namespace nwn::detail {

// Appends system elements to an EOS while recording their provenance.
struct EosBuild {
  EOS& e;
  Provenance& prov;

  std::size_t place(const std::string& name, std::size_t type, const std::string& tag, const std::string& src) {
    auto p = e.add_place(name, type);
    prov.push_back({name, "place", tag, src});
    prov.push_back({idle_name(name), "idle", tag, src});
    return p;
  }
  std::size_t trans(const std::string& name, const std::string& tag, const std::string& src) {
    auto t = e.add_transition(name);
    prov.push_back({name, "transition", tag, src});
    return t;
  }
  void in(std::size_t p, std::size_t t, Count w = 1) { e.system.add_pre(p, t, w); }
  void out(std::size_t t, std::size_t p, Count w = 1) { e.system.add_post(t, p, w); }
  void event(std::size_t t, const std::vector<std::pair<std::size_t, std::size_t>>& obj = {}) { e.add_event(t, obj); }
};

// Appends places and transitions to a channel net while recording provenance.
struct NetBuild {
  CNuPN& n;
  Provenance& prov;

  std::size_t place(const std::string& name, const std::string& tag, const std::string& src) {
    auto p = n.base.add_place(name);
    prov.push_back({name, "place", tag, src});
    return p;
  }
  std::size_t trans(const std::string& name, const std::string& tag, const std::string& src) {
    auto t = n.add_transition(name);
    prov.push_back({name, "transition", tag, src});
    return t;
  }
  void pre(std::size_t p, std::size_t t, Var v, Count w = 1) { n.base.add_pre(p, t, v, w); }
  void post(std::size_t t, std::size_t p, Var v, Count w = 1) { n.base.add_post(t, p, v, w); }
  void read(std::size_t p, std::size_t t, Var v) {
    pre(p, t, v);
    post(t, p, v);
  }
  void chan(std::size_t t, Var from, std::size_t p, Var to, std::size_t q) {
    n.base.ensure_var(t, from);
    n.base.ensure_var(t, to);
    n.add_transfer(t, {from, to, p, q});
  }
};

inline std::string gen(const std::string& s) { return std::string(kGenPrefix) + s; }

}  // namespace nwn::detail
