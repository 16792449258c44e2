#pragma once

#include <stdexcept>
#include <string>

namespace vdp {

/// Invalid parameters or configuration supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A serialized message or transcript could not be decoded.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A protocol message arrived outside the phase in which it is legal.
class PhaseError : public std::logic_error {
 public:
  explicit PhaseError(const std::string& what) : std::logic_error(what) {}
};

/// Raised when a public check fails mid-protocol and the session must stop.
/// Carries the identity of the party whose message failed the check.
class ProtocolAbort : public std::runtime_error {
 public:
  ProtocolAbort(std::string blamed, std::string phase, const std::string& detail)
      : std::runtime_error("abort in " + phase + " blaming " + blamed + ": " + detail),
        blamed_party(std::move(blamed)),
        phase_name(std::move(phase)),
        detail_text(detail) {}

  std::string blamed_party;
  std::string phase_name;
  std::string detail_text;
};

}  // namespace vdp
