#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gazescale {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// geometry
class PointBehindViewPlane : public Error {
 public:
  PointBehindViewPlane() : Error("point is not in front of the view plane") {}
};

class SphereEnclosesViewer : public Error {
 public:
  SphereEnclosesViewer() : Error("sphere encloses the viewer") {}
};

class DegenerateVector : public Error {
 public:
  DegenerateVector() : Error("degenerate (zero-length) vector") {}
};

class DegenerateRegion : public Error {
 public:
  DegenerateRegion() : Error("degenerate region (zero area or zero radius)") {}
};

// filtering / interaction
class NonMonotonicTimestamp : public Error {
 public:
  explicit NonMonotonicTimestamp(double prev, double now)
      : Error("timestamp " + std::to_string(now) + " does not follow " + std::to_string(prev)) {}
};

class MissingTrackingData : public Error {
 public:
  explicit MissingTrackingData(const std::string& what) : Error("missing tracking data: " + what) {}
};

class KindMismatch : public Error {
 public:
  KindMismatch() : Error("control input kind does not match the scaling session") {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("invalid config: " + what) {}
};

// trace I/O
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A record with a missing, unknown or ill-typed field. Trace loading rethrows
// it as a ParseError carrying the line number.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class SchemaVersionMismatch : public Error {
 public:
  explicit SchemaVersionMismatch(int found)
      : Error("unsupported schema_version " + std::to_string(found)) {}
};

// synthesis / metrics
class InfeasibleTarget : public Error {
 public:
  explicit InfeasibleTarget(const std::string& what) : Error("infeasible target: " + what) {}
};

class EmptyInput : public Error {
 public:
  EmptyInput() : Error("empty input") {}
};

}  // namespace gazescale
