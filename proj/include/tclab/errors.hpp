#pragma once

#include <stdexcept>
#include <string>

namespace tclab {

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  DegenerateCone,
  QuadratureNotConverged,
  FormUndefined,
  EmptyRestriction,
  NotRadialChart,
  Undersampled,
  TruncationTail,
  LipschitzTooLarge,
  SupportEscapesCylinder,
  NoConvergence,
  NotGraph,
  ExcessTooLarge,
  VertexTooClose,
  InvalidConstants,
  NotSemicalibrated,
  TubesOverlap,
  MassLeak,
  ParseError,
  ConfigError,
  ScenarioError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace tclab
