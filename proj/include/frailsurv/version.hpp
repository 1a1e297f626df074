#pragma once

namespace frailsurv {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace frailsurv
