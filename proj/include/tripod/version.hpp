#pragma once

namespace tripod {

inline constexpr const char* version_string = "0.1.0";

}
