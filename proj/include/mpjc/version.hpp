#pragma once

namespace mpjc {

// Engine version reported by the CLI and embedded in run manifests.
inline constexpr const char* engine_version = "1.0.0";

// Version of the scenario-config schema accepted by the CLI.
inline constexpr int config_schema_version = 1;

}  // namespace mpjc
