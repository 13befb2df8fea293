#pragma once

namespace plgc {

inline constexpr const char* version = "0.1.0";

}  // namespace plgc
