#include "nwn/explore.hpp"

namespace nwn {

namespace {

void need(bool ok, const std::string& what) {
  if (!ok) fail(Errc::InvalidSource, what);
}

}  // namespace

Document translate_doc(const std::string& kind, const Document& src) {
  Document d;
  d.name = src.name.empty() ? kind : src.name + "." + kind;
  auto opt = [](const auto& o, auto f) -> std::optional<decltype(f(*o))> {
    if (o) return f(*o);
    return std::nullopt;
  };
  if (kind == "pn2cnupn") {
    need(src.kind == Formalism::PN, "pn2cnupn needs a pn document");
    d.kind = Formalism::CNuPN;
    d.nu = pn_as_cnupn(src.pn);
    auto enc = [](const Vec& m) { return canonical({m}); };
    d.nu_init = opt(src.pn_init, enc);
    d.nu_target = opt(src.pn_target, enc);
  } else if (kind == "nupn2ceos" || kind == "rnupn2ceos") {
    need(is_nu(src.kind), kind + " needs a nu document");
    auto tr = kind == "nupn2ceos" ? nupn_to_ceos(src.nu.base) : rnupn_to_ceos(src.nu);
    d.kind = Formalism::EOS;
    d.eos = tr.target;
    d.prov = tr.prov;
    auto enc = [&](const NuConfig& m) { return tr.encode(m); };
    d.eos_init = opt(src.nu_init, enc);
    d.eos_target = opt(src.nu_target, enc);
  } else if (kind == "cnupn2rnupn") {
    need(is_nu(src.kind), "cnupn2rnupn needs a nu document");
    auto tr = cnupn_to_rnupn(src.nu);
    d.kind = Formalism::RNuPN;
    d.nu = tr.target;
    d.prov = tr.prov;
    auto enc = [&](const NuConfig& m) { return canonical(tr.encode(m)); };
    d.nu_init = opt(src.nu_init, enc);
    d.nu_target = opt(src.nu_target, enc);
  } else if (kind == "ceos2cnupn") {
    need(src.kind == Formalism::EOS, "ceos2cnupn needs an eos document");
    auto tr = ceos_to_cnupn(src.eos);
    d.kind = Formalism::CNuPN;
    d.nu = tr.target;
    d.prov = tr.prov;
    auto enc = [&](const NestedMarking& m) { return canonical(tr.encode(m)); };
    d.nu_init = opt(src.eos_init, enc);
    d.nu_target = opt(src.eos_target, enc);
  } else if (kind == "closure" || kind == "normalize") {
    need(src.kind == Formalism::EOS, kind + " needs an eos document");
    d.kind = Formalism::EOS;
    if (kind == "closure") {
      auto tr = conservative_closure(src.eos);
      d.eos = tr.target;
      d.prov = tr.prov;
      d.eos_init = src.eos_init;
    } else {
      auto tr = normalize_eos(src.eos);
      d.eos = tr.target;
      d.prov = tr.prov;
      d.eos_init = opt(src.eos_init, [&](const NestedMarking& m) { return tr.encode(m); });
    }
    d.eos_target = src.eos_target;
  } else {
    fail(Errc::Usage, "unknown translation kind '" + kind + "'");
  }
  d.pn.name = d.nu.base.name = d.eos.name = d.name;
  return d;
}

}  // namespace nwn

namespace nwn {

const std::vector<std::string>& cross_kinds() {
  static const std::vector<std::string> k = {"pn2cnupn",   "nupn2ceos",  "cnupn2rnupn",
                                             "ceos2cnupn", "rnupn2ceos", "closure"};
  return k;
}

KindSpec kind_spec(const std::string& kind) {
  SizeParams sz;
  if (kind == "pn2cnupn") return {Formalism::PN, sz};
  if (kind == "nupn2ceos") return {Formalism::NuPN, sz};
  if (kind == "cnupn2rnupn") return {Formalism::CNuPN, sz};
  if (kind == "rnupn2ceos") return {Formalism::RNuPN, sz};
  if (kind == "closure") return {Formalism::EOS, sz};
  if (kind == "ceos2cnupn") {
    sz.places = 3;
    sz.conservative = true;
    return {Formalism::EOS, sz};
  }
  fail(Errc::Usage, "unknown kind '" + kind + "'");
}

}  // namespace nwn
