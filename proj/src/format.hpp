#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "toelanczos/error.hpp"

namespace toel {

/// Round-trip text for a double.
inline std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes through a temporary file and renames it into place.
inline void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw Error(ErrorCode::io, "cannot open " + tmp + " for writing");
    os << text;
    if (!os) throw Error(ErrorCode::io, "write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io, "cannot rename " + tmp + ": " + ec.message());
}

}  // namespace toel
