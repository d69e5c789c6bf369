#pragma once

// Elementary object systems: a system net whose tokens carry object-net markings.

#include <optional>
#include <string>
#include <vector>

#include "nwn/nupn.hpp"
#include "nwn/petri.hpp"

namespace nwn {

inline constexpr std::size_t kBlack = 0;

struct Event {
  std::size_t sys_t = 0;
  // theta[N][t] is the multiplicity of object transition t of net N.
  std::vector<std::vector<Count>> theta;
  friend bool operator==(const Event&, const Event&) = default;
};

class EOS {
 public:
  EOS();

  std::string name;
  PetriNet system;
  // objects[kBlack] is the empty net.
  std::vector<PetriNet> objects;
  std::vector<std::size_t> typing;
  // Per system transition: the place it idles on, if any.
  std::vector<std::optional<std::size_t>> idle_of;
  std::vector<Event> events;

  std::size_t add_object(PetriNet net);
  std::optional<std::size_t> find_object(const std::string& name) const;
  std::size_t object(const std::string& name) const;
  // Adds a system place together with its idle transition id(p).
  std::size_t add_place(const std::string& p, std::size_t type);
  std::size_t add_transition(const std::string& t);
  std::size_t idle(std::size_t p) const;
  std::size_t add_event(std::size_t sys_t, const std::vector<std::pair<std::size_t, std::size_t>>& object_ts = {});
  Event empty_event(std::size_t sys_t) const;

  const PetriNet& type_of(std::size_t sys_place) const { return objects.at(typing.at(sys_place)); }
};

std::string idle_name(const std::string& p);
bool eos_equal(const EOS& a, const EOS& b);

struct NestedToken {
  std::size_t place = 0;
  Vec inner;
  friend bool operator==(const NestedToken&, const NestedToken&) = default;
  friend auto operator<=>(const NestedToken&, const NestedToken&) = default;
};

// Kept sorted; equal tokens appear as repeated entries.
using NestedMarking = std::vector<NestedToken>;

NestedMarking nm_canon(NestedMarking m);
NestedMarking nm_add(const NestedMarking& a, const NestedMarking& b);
// Multiset difference; requires b included in a.
NestedMarking nm_sub(const NestedMarking& a, const NestedMarking& b);
bool nm_includes(const NestedMarking& big, const NestedMarking& small);
std::size_t nm_hash(const NestedMarking& m);
std::uint64_t nm_tokens(const NestedMarking& m);
std::string nm_to_string(const EOS& eos, const NestedMarking& m);
NestedToken make_token(const EOS& eos, const std::string& place, const std::map<std::string, Count>& inner);

struct EosReport {
  std::vector<Violation> violations;
  bool conservative = true;
  std::vector<std::size_t> non_conservative;
};

EosReport eos_validate(const EOS& eos);

// Object nets consumed by t but not produced back.
std::vector<std::size_t> destroyed_types(const EOS& eos, std::size_t t);
// Each system transition occurs in at most one event, and destroying ones
// only in system-autonomous events.
bool eos_normalized(const EOS& eos, std::string* why = nullptr);
bool event_autonomous(const Event& e);

struct Projection {
  bool system = true;
  std::size_t object = 0;
};

Vec project(const EOS& eos, const NestedMarking& m, Projection which);

struct EventMode {
  NestedMarking lambda, rho;
  friend bool operator==(const EventMode&, const EventMode&) = default;
};

struct EventModeList {
  std::vector<EventMode> modes;
  bool overflow = false;
};

EventModeList event_modes(const EOS& eos, std::size_t event, const NestedMarking& m, std::size_t cap = 1'000'000);
bool event_phi(const EOS& eos, std::size_t event, const EventMode& mode);
NestedMarking eos_fire(const EOS& eos, const NestedMarking& m, std::size_t event, const EventMode& mode);

bool leq_f(const NestedMarking& a, const NestedMarking& b);
std::vector<NestedMarking> lossy_successors(const NestedMarking& m);

}  // namespace nwn
