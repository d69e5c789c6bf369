#pragma once

// Line-oriented .nwn documents: parser, canonical emitter, JSON mirror and
// DOT structure export.

#include <string>
#include <string_view>

#include "nwn/document.hpp"

namespace nwn {

struct Diagnostic {
  Errc code = Errc::SyntaxError;
  std::size_t line = 0, col = 0;  // 1-based; 0 when not tied to a position
  std::string message;
  std::string to_string() const;
};

class FormatError : public Error {
 public:
  explicit FormatError(Diagnostic d) : Error(d.code, d.to_string()), diag_(std::move(d)) {}
  const Diagnostic& diag() const { return diag_; }

 private:
  Diagnostic diag_;
};

// Throws FormatError carrying SyntaxError, ResolutionError or ValidationError.
Document parse_doc(std::string_view text);
// Reads INIT and TARGET sections (header optional) against the net of base.
Document parse_overlay(std::string_view text, const Document& base);
std::string emit_doc(const Document& doc);
std::string emit_json(const Document& doc);
std::string emit_dot(const Document& doc);

// Structural equality: nets, configurations and provenance.
bool doc_equal(const Document& a, const Document& b);

// Configuration printers in document syntax.
std::string pn_config_text(const PetriNet& net, const Vec& m);
std::string nu_config_text(const NuPN& net, const NuConfig& c);
std::string eos_config_text(const EOS& eos, const NestedMarking& m);

}  // namespace nwn
