#pragma once

// Nets whose tokens are data tuples, with standard and fresh variables.

#include <optional>
#include <string>
#include <vector>

#include "nwn/ms.hpp"

namespace nwn {

enum class VarKind { Std, Fresh };

struct Var {
  VarKind kind = VarKind::Std;
  std::uint32_t index = 0;
  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

inline Var xv(std::uint32_t i) { return {VarKind::Std, i}; }
inline Var nuv(std::uint32_t i) { return {VarKind::Fresh, i}; }
std::string var_name(Var v);
std::optional<Var> parse_var(const std::string& s);

struct NuTransition {
  std::string name;
  // Standard variables first, then fresh ones, each by index.
  std::vector<Var> vars;
  std::vector<Vec> pre, post;

  std::optional<std::size_t> slot(Var v) const;
  std::size_t num_std() const;
};

class NuPN {
 public:
  std::string name;

  std::size_t add_place(const std::string& p);
  std::size_t add_transition(const std::string& t);
  // Returns the slot of v in transition t, creating it if needed.
  std::size_t ensure_var(std::size_t t, Var v);
  void add_pre(std::size_t p, std::size_t t, Var v, Count w = 1);
  void add_post(std::size_t t, std::size_t p, Var v, Count w = 1);

  std::optional<std::size_t> find_place(const std::string& p) const;
  std::optional<std::size_t> find_transition(const std::string& t) const;
  std::size_t place(const std::string& p) const;
  std::size_t transition(const std::string& t) const;

  const std::vector<std::string>& places() const { return places_; }
  std::size_t num_places() const { return places_.size(); }
  const std::vector<NuTransition>& transitions() const { return trans_; }
  const NuTransition& trans(std::size_t t) const;

  friend bool operator==(const NuPN& a, const NuPN& b);

 private:
  std::vector<std::string> places_;
  std::vector<NuTransition> trans_;
};

bool operator==(const NuTransition& a, const NuTransition& b);

// A configuration is a multiset of tuples, stored as a list of instances.
using NuConfig = std::vector<Vec>;

// Sorted with zero tuples removed; zero tuples can never be selected.
NuConfig canonical(NuConfig c);
bool config_equal(const NuConfig& a, const NuConfig& b);
std::string config_to_string(const NuConfig& c);

// inst[i] is the tuple instance bound to the i-th standard variable.
struct NuMode {
  std::vector<std::size_t> inst;
  friend bool operator==(const NuMode&, const NuMode&) = default;
};

struct Violation {
  std::string element;
  std::string condition;
  std::string detail;
};

std::vector<Violation> nupn_validate(const NuPN& net);

struct ModeOptions {
  std::size_t cap = 1'000'000;
  // Reject transitions whose standard variables could bind the same value twice.
  bool strict = false;
};

struct ModeList {
  std::vector<NuMode> modes;
  bool overflow = false;
};

ModeList nupn_modes(const NuPN& net, const NuConfig& m, std::size_t t, const ModeOptions& opt = {});
bool nupn_mode_enabled(const NuPN& net, const NuConfig& m, std::size_t t, const NuMode& e);
NuConfig nupn_fire(const NuPN& net, const NuConfig& m, std::size_t t, const NuMode& e);

}  // namespace nwn
