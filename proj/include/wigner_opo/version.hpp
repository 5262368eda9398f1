#pragma once

namespace wigner_opo {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchema = 1;

}  // namespace wigner_opo
