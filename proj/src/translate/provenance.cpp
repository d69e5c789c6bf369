#include "nwn/translate.hpp"

namespace nwn {

std::map<std::string, std::size_t> count_by_tag(const Provenance& prov, const std::string& kind) {
  std::map<std::string, std::size_t> out;
  for (const auto& e : prov)
    if (e.kind == kind) ++out[e.tag];
  return out;
}

const ProvEntry* find_prov(const Provenance& prov, const std::string& id) {
  for (const auto& e : prov)
    if (e.id == id) return &e;
  return nullptr;
}

}  // namespace nwn
