#pragma once

#include <string>

#include "gbht/boosting.hpp"

namespace gbht {

/// Serializes the full model (initial density, components, step sizes,
/// mixture weights, NLL trace, config snapshot) as versioned JSON. Floats
/// round-trip exactly, so a reloaded model reproduces densities to within
/// 1e-15 relative.
void save_model(const GbhtModel& model, const std::string& path);

/// Throws std::runtime_error on an unsupported format version or any schema
/// violation (missing field, wrong type, inconsistent sizes, truncation).
GbhtModel load_model(const std::string& path);

/// The config snapshot as a serialized JSON object, the same form embedded
/// in model files; callers can splice it into reports without pulling a
/// JSON dependency through this header.
std::string config_json_string(const GbhtConfig& cfg);

}  // namespace gbht
