#pragma once

namespace gyrosim {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace gyrosim
