#pragma once

#include <stdexcept>
#include <string>

namespace ethrisk {

// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometry / Frenet frame.
class DegeneratePath : public Error {
 public:
  using Error::Error;
};
class PoseOffCorridor : public Error {
 public:
  using Error::Error;
};
class OutOfPathRange : public Error {
 public:
  using Error::Error;
};

// Collision stage.
class SingularCovariance : public Error {
 public:
  using Error::Error;
};

// Planner.
class DegenerateHorizon : public Error {
 public:
  using Error::Error;
};

// Ethics.
class EmptyRiskSet : public Error {
 public:
  using Error::Error;
};
class ModeMismatch : public Error {
 public:
  using Error::Error;
};

// Replay.
class BufferUnderfilled : public Error {
 public:
  using Error::Error;
};

// Scenario / config files. Both map to CLI exit code 2.
class ParseError : public Error {
 public:
  using Error::Error;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Metrics / logs.
class EmptyInput : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

// Raised by the episode runner; wraps the original message with the step index.
class StepError : public Error {
 public:
  StepError(int step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace ethrisk
