#pragma once

#include <filesystem>
#include <string>

#include "dictsel/types.hpp"

namespace dictsel {

// Plain-text matrix format:
//   line 1: "<rows> <cols>"
//   then <rows> lines of <cols> whitespace-separated decimal values
// Writes use %.17g so a read-back reproduces every double bit-exactly.

Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& A);

// format a double with round-trip precision (shared by all file writers)
std::string fmt_full(double v);

}  // namespace dictsel
