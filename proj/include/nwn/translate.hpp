#pragma once

// Net-to-net compilers. Each returns the target net, an encoder for
// configurations and a provenance table naming the gadget of every
// generated element.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nwn/cnupn.hpp"
#include "nwn/eos.hpp"

namespace nwn {

inline constexpr const char* kGenPrefix = "@gen/";

struct ProvEntry {
  std::string id;
  std::string kind;  // place, idle, transition, object-place, object-transition, object-net
  std::string tag;
  std::string source;
  friend bool operator==(const ProvEntry&, const ProvEntry&) = default;
};

using Provenance = std::vector<ProvEntry>;

std::map<std::string, std::size_t> count_by_tag(const Provenance& prov, const std::string& kind);
const ProvEntry* find_prov(const Provenance& prov, const std::string& id);

// Every transition occurs in exactly one event (copies per extra event) and
// destroying transitions are system-autonomous (pre/post split).
struct Normalized {
  EOS target;
  Provenance prov;
  std::vector<std::size_t> enable_pre;
  NestedMarking encode(const NestedMarking& m) const;
};

Normalized normalize_eos(const EOS& eos);
std::vector<std::string> destroy_set(const EOS& eos, const std::string& t);

struct Closure {
  EOS target;
  Provenance prov;
  std::vector<std::size_t> trash;  // per object net
  NestedMarking encode(const NestedMarking& m) const { return m; }
};

Closure conservative_closure(const EOS& eos);

struct NupnToCeos {
  EOS target;
  Provenance prov;
  std::size_t sim = 0, select_tran = 0, object = 0;
  std::optional<std::size_t> trash;
  NestedMarking encode(const NuConfig& m) const;
  // Inverse of encode on configurations of the encoded shape.
  std::optional<NuConfig> decode(const NestedMarking& m) const;
};

NupnToCeos nupn_to_ceos(const NuPN& net);
NupnToCeos rnupn_to_ceos(const CNuPN& net);

// The isolated transfer gadgets of one special transition.
struct GadgetAssembly {
  EOS eos;
  std::size_t object = 0;
  std::size_t ready_x1 = 0, copy_x1 = 0, copy_x2 = 0, trash = 0, run_tran = 0, tran_done = 0;
  NestedMarking initial(const Vec& m1, const Vec& m2, const Vec& m3) const;
};

GadgetAssembly transfer_gadget_assembly(const std::vector<std::string>& places, std::size_t r1, std::size_t r2);

struct CeosToCnupn {
  CNuPN target;
  Provenance prov;
  std::size_t init = 0;
  std::size_t source_places = 0;
  // Per target place: (system place, object place) of a block place, or the
  // system place whose Id it is (object place = npos).
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> block;
  std::vector<std::size_t> place_dims;  // object-net dimension per system place
  NuConfig encode(const NestedMarking& m) const;
  bool at_init(const NuConfig& c) const;
  std::optional<NestedMarking> decode(const NuConfig& c) const;
};

CeosToCnupn ceos_to_cnupn(const EOS& eos);

struct CnupnToRnupn {
  CNuPN target;
  Provenance prov;
  RnuMeta meta;
  std::size_t source_places = 0;
  std::size_t q_select = 0;
  std::vector<std::size_t> k;  // selective transfers per source transition
  std::vector<bool> helper;    // per source transition
  NuConfig encode(const NuConfig& m) const;
  bool at_select(const NuConfig& c) const;
  std::optional<NuConfig> decode(const NuConfig& c) const;
};

CnupnToRnupn cnupn_to_rnupn(const CNuPN& net);

}  // namespace nwn
