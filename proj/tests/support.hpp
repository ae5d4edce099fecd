#pragma once

#include <optional>
#include <string>

#include "csbb/error.hpp"

namespace support {

/// The code of the csbb::Error thrown by `fn`, or nullopt when it returns.
template <typename F>
std::optional<csbb::ErrorCode> error_code(F&& fn) {
  try {
    fn();
  } catch (const csbb::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string data_path(const std::string& name) { return std::string(CSBB_DATA_DIR) + "/" + name; }

}  // namespace support
