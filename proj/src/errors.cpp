#include "tclab/errors.hpp"

namespace tclab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DegenerateCone: return "DegenerateCone";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::FormUndefined: return "FormUndefined";
    case ErrorCode::EmptyRestriction: return "EmptyRestriction";
    case ErrorCode::NotRadialChart: return "NotRadialChart";
    case ErrorCode::Undersampled: return "Undersampled";
    case ErrorCode::TruncationTail: return "TruncationTail";
    case ErrorCode::LipschitzTooLarge: return "LipschitzTooLarge";
    case ErrorCode::SupportEscapesCylinder: return "SupportEscapesCylinder";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotGraph: return "NotGraph";
    case ErrorCode::ExcessTooLarge: return "ExcessTooLarge";
    case ErrorCode::VertexTooClose: return "VertexTooClose";
    case ErrorCode::InvalidConstants: return "InvalidConstants";
    case ErrorCode::NotSemicalibrated: return "NotSemicalibrated";
    case ErrorCode::TubesOverlap: return "TubesOverlap";
    case ErrorCode::MassLeak: return "MassLeak";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ScenarioError: return "ScenarioError";
  }
  return "Unknown";
}

}  // namespace tclab
