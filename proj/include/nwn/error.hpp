#pragma once

#include <stdexcept>
#include <string>

namespace nwn {

enum class Errc {
  DomainMismatch,
  Overflow,
  IndexOutOfRange,
  NotEnabled,
  UnknownTransition,
  ModeNotEnabled,
  UnknownEvent,
  UnknownObjectNet,
  NotNormalized,
  NotConservative,
  InvalidSource,
  NotRnu,
  OrderUnavailable,
  StepNotEnabled,
  SyntaxError,
  ResolutionError,
  ValidationError,
  Usage,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace nwn
