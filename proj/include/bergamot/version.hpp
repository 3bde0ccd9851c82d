#pragma once

namespace bergamot {

inline constexpr const char* kVersion = "0.1.0";

} // namespace bergamot
