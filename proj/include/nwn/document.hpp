#pragma once

// A net of any formalism together with optional initial and target configurations.

#include <optional>
#include <string>
#include <string_view>

#include "nwn/cnupn.hpp"
#include "nwn/eos.hpp"
#include "nwn/petri.hpp"
#include "nwn/translate.hpp"

namespace nwn {

enum class Formalism { PN, NuPN, CNuPN, RNuPN, EOS };

inline const char* formalism_name(Formalism f) {
  switch (f) {
    case Formalism::PN: return "pn";
    case Formalism::NuPN: return "nupn";
    case Formalism::CNuPN: return "cnupn";
    case Formalism::RNuPN: return "rnupn";
    case Formalism::EOS: return "eos";
  }
  return "?";
}

inline std::optional<Formalism> parse_formalism(std::string_view s) {
  for (auto f : {Formalism::PN, Formalism::NuPN, Formalism::CNuPN, Formalism::RNuPN, Formalism::EOS})
    if (s == formalism_name(f)) return f;
  return std::nullopt;
}

inline bool is_nu(Formalism f) { return f == Formalism::NuPN || f == Formalism::CNuPN || f == Formalism::RNuPN; }

struct Document {
  Formalism kind = Formalism::PN;
  std::string name;
  PetriNet pn;
  // For nupn documents only the base net is meaningful.
  CNuPN nu;
  EOS eos;
  std::optional<Vec> pn_init, pn_target;
  std::optional<NuConfig> nu_init, nu_target;
  std::optional<NestedMarking> eos_init, eos_target;
  Provenance prov;
};

}  // namespace nwn
