#pragma once

#include <stdexcept>
#include <string>

namespace edgesplit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value violates its documented constraints.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// Profiling measured zero total time, so weights cannot be normalized.
class ProfileDegenerateError : public Error {
 public:
  using Error::Error;
};

class UnknownFixtureError : public Error {
 public:
  using Error::Error;
};

/// A profile or scenario document violates its schema. `where()` holds the
/// field path (e.g. "compute_weights[3]") or a "line L, column C" location.
class DocumentError : public Error {
 public:
  DocumentError(std::string where, std::string message)
      : Error(where.empty() ? message : where + ": " + message),
        where_(std::move(where)),
        message_(std::move(message)) {}
  const std::string& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string where_;
  std::string message_;
};

class InvalidSplitError : public Error {
 public:
  using Error::Error;
};

/// fit_rates found no sample exercising the named node.
class RateFitCoverageError : public Error {
 public:
  RateFitCoverageError(std::string node, const std::string& what)
      : Error(what), node_(std::move(node)) {}
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

class EmptyCandidateSpaceError : public Error {
 public:
  using Error::Error;
};

class ProbeSpaceError : public Error {
 public:
  using Error::Error;
};

/// A single transport operation (one RTT measurement, one frame) failed.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Every repeat for one probe size failed on a hop.
class LinkProbeTransportError : public Error {
 public:
  LinkProbeTransportError(std::string hop, const std::string& what)
      : Error(what), hop_(std::move(hop)) {}
  const std::string& hop() const noexcept { return hop_; }

 private:
  std::string hop_;
};

class UnknownHopError : public Error {
 public:
  using Error::Error;
};

/// Raised by an environment when it cannot complete an inference.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

class InitializationError : public Error {
 public:
  InitializationError(std::string phase, const std::string& what)
      : Error("initialization phase " + phase + ": " + what), phase_(std::move(phase)) {}
  const std::string& phase() const noexcept { return phase_; }

 private:
  std::string phase_;
};

/// A steady-state window failed part way; the scheduler state is untouched.
class WindowAbortedError : public Error {
 public:
  using Error::Error;
};

class FramingError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgesplit
