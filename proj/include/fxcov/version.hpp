#pragma once

namespace fxcov {

inline constexpr const char* kVersion = "0.1.0";

}
