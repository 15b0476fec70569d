#pragma once

namespace blochlab {

inline constexpr const char* kArtifactName = "blochlab";
inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace blochlab
