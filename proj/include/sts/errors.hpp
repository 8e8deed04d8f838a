#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sts {

// Root of every error the library raises. Run-level failures derive from it so
// the driver can report them with distinct termination reasons.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Refinement would push the finest spacing below the configured floor.
class ResolutionFloorReached : public Error {
 public:
  using Error::Error;
};

// A stage of a superstep produced NaN or Inf.
class InstabilityDetected : public Error {
 public:
  InstabilityDetected(const std::string& what, int stage)
      : Error(what), stage_(stage) {}
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

// The surface-diffusion radius touched the pinch-detection threshold.
class PinchOffReached : public Error {
 public:
  PinchOffReached(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

// The exact flow of u' = u^p escapes to infinity inside a reaction substep.
class ReactionBlowUp : public Error {
 public:
  ReactionBlowUp(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NewtonDivergence : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sts
