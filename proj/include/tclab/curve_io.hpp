#pragma once

#include "tclab/currents.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace tclab {

/// Curve spec: {"Q", "n", "rho", "orientation", and "samples" or "fourier"}.
/// Throws ParseError on malformed input.
WindingCurve curve_from_json(const nlohmann::json& j);

/// Emits the representation the curve was built from, so that a spec read and
/// written again reproduces every number bit for bit.
nlohmann::json curve_to_json(const WindingCurve& z);

WindingCurve read_curve_file(const std::string& path);
void write_curve_file(const std::string& path, const WindingCurve& z);

}  // namespace tclab
