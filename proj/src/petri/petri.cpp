#include "nwn/petri.hpp"

#include <sstream>

namespace nwn {

std::size_t PetriNet::add_place(const std::string& p) {
  if (pidx_.count(p)) fail(Errc::ValidationError, "duplicate place '" + p + "'");
  if (tidx_.count(p)) fail(Errc::ValidationError, "name '" + p + "' used for place and transition");
  std::size_t i = places_.size();
  places_.push_back(p);
  pidx_.emplace(p, i);
  for (auto& v : pre_) v.resize(i + 1);
  for (auto& v : post_) v.resize(i + 1);
  return i;
}

std::size_t PetriNet::add_transition(const std::string& t) {
  if (tidx_.count(t)) fail(Errc::ValidationError, "duplicate transition '" + t + "'");
  if (pidx_.count(t)) fail(Errc::ValidationError, "name '" + t + "' used for place and transition");
  std::size_t i = trans_.size();
  trans_.push_back(t);
  tidx_.emplace(t, i);
  pre_.emplace_back(places_.size());
  post_.emplace_back(places_.size());
  return i;
}

void PetriNet::add_pre(std::size_t p, std::size_t t, Count w) { pre_.at(t).inc(p, w); }
void PetriNet::add_post(std::size_t t, std::size_t p, Count w) { post_.at(t).inc(p, w); }

std::optional<std::size_t> PetriNet::find_place(std::string_view p) const {
  auto it = pidx_.find(p);
  if (it == pidx_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> PetriNet::find_transition(std::string_view t) const {
  auto it = tidx_.find(t);
  if (it == tidx_.end()) return std::nullopt;
  return it->second;
}

std::size_t PetriNet::place(std::string_view p) const {
  auto i = find_place(p);
  if (!i) fail(Errc::ResolutionError, "unknown place '" + std::string(p) + "'");
  return *i;
}

std::size_t PetriNet::transition(std::string_view t) const {
  auto i = find_transition(t);
  if (!i) fail(Errc::UnknownTransition, "unknown transition '" + std::string(t) + "'");
  return *i;
}

PetriNet empty_net() {
  PetriNet n;
  n.name = "BLACK";
  return n;
}

bool pn_enabled(const PetriNet& net, const Vec& m, std::size_t t) {
  if (t >= net.num_transitions()) fail(Errc::UnknownTransition, "transition index " + std::to_string(t));
  return leq(net.pre(t), m);
}

Vec pn_fire(const PetriNet& net, const Vec& m, std::size_t t) {
  if (!pn_enabled(net, m, t)) fail(Errc::NotEnabled, "transition '" + net.transitions()[t] + "' not enabled");
  return (m - net.pre(t)) + net.post(t);
}

Vec pn_fire(const PetriNet& net, const Vec& m, std::string_view t) {
  return pn_fire(net, m, net.transition(t));
}

static Vec sum_of(const PetriNet& net, const std::vector<Count>& tc, bool pre) {
  Vec out(net.num_places());
  for (std::size_t t = 0; t < tc.size(); ++t)
    if (tc[t]) out = out + scale(pre ? net.pre(t) : net.post(t), tc[t]);
  return out;
}

Vec pn_pre_of(const PetriNet& net, const std::vector<Count>& tc) { return sum_of(net, tc, true); }
Vec pn_post_of(const PetriNet& net, const std::vector<Count>& tc) { return sum_of(net, tc, false); }

Vec marking_of(const PetriNet& net, const std::map<std::string, Count>& counts) {
  Vec m(net.num_places());
  for (const auto& [p, c] : counts) m.inc(net.place(p), c);
  return m;
}

std::string marking_to_string(const PetriNet& net, const Vec& m) {
  if (net.num_places() == 0) return "ε";
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (std::size_t p = 0; p < m.size(); ++p)
    if (m[p]) {
      os << (first ? "" : ",") << net.places()[p] << ':' << m[p];
      first = false;
    }
  os << '}';
  return os.str();
}

}  // namespace nwn
