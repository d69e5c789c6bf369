#pragma once

// Channel nets: tuple nets with per-transition transfer matrices, and the
// rename fragment with its closed-form step.

#include <string>
#include <vector>

#include "nwn/nupn.hpp"
#include "nwn/petri.hpp"

namespace nwn {

// One unit entry of a transfer matrix: G(xi, xj)[p] = delta_q.
struct TransferEntry {
  Var xi, xj;
  std::size_t p = 0, q = 0;
  bool identity() const { return xi == xj && p == q; }
  friend bool operator==(const TransferEntry&, const TransferEntry&) = default;
  friend auto operator<=>(const TransferEntry&, const TransferEntry&) = default;
};

struct CNuPN {
  NuPN base;
  // Indexed by transition; sparse unit rows.
  std::vector<std::vector<TransferEntry>> transfers;

  std::size_t add_transition(const std::string& t);
  void add_transfer(std::size_t t, TransferEntry e);
  // Selective entries of t, i.e. all non-identity rows.
  std::vector<TransferEntry> selective(std::size_t t) const;
  friend bool operator==(const CNuPN&, const CNuPN&) = default;
};

// Adds G(x,x)[p] = delta_p for every (x, p) with no outgoing row.
void fill_identity_defaults(CNuPN& net);
CNuPN lift(const NuPN& base);

// Checks row shape, single target and default rows.
std::vector<Violation> validate_transfer(const CNuPN& net);

struct StagedFire {
  NuConfig stage1;  // preconditions removed
  NuConfig stage2;  // transfers applied
  NuConfig final;   // postconditions and fresh tuples added
};

StagedFire cnupn_fire_staged(const CNuPN& net, const NuConfig& m, std::size_t t, const NuMode& e);
NuConfig cnupn_fire(const CNuPN& net, const NuConfig& m, std::size_t t, const NuMode& e);

struct SpecialTransition {
  std::size_t t = 0;
  std::size_t r1 = 0, r2 = 0;
  std::size_t p2 = 0, p3 = 0, p4 = 0, p5 = 0;
};

struct RnuMeta {
  std::vector<SpecialTransition> special;
  const SpecialTransition* find(std::size_t t) const;
};

struct RnuCheck {
  bool ok = false;
  RnuMeta meta;
  std::string report;
};

RnuCheck is_rnupn(const CNuPN& net);
NuConfig rnupn_fire_direct(const CNuPN& net, const RnuMeta& meta, const NuConfig& m, std::size_t t,
                           const NuMode& e);

CNuPN pn_as_cnupn(const PetriNet& pn);

}  // namespace nwn
