#include "dictsel/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dictsel {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file: " + path.string());

  long long rows = -1, cols = -1;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw IoError("bad matrix header in " + path.string() +
                  " (want \"rows cols\")");
  if (rows == 0 || cols == 0)
    throw IoError("empty matrix in " + path.string());

  // entries go through strtod, not operator>>: savetxt-style files spell out
  // "nan"/"inf", which the stream would reject with a misleading message
  Matrix A(rows, cols);
  std::string tok;
  for (long long i = 0; i < rows; ++i)
    for (long long j = 0; j < cols; ++j) {
      if (!(in >> tok))
        throw IoError("matrix " + path.string() + " ends early at entry (" +
                      std::to_string(i) + "," + std::to_string(j) + ")");
      char* end = nullptr;
      A(i, j) = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size())
        throw IoError("matrix " + path.string() + " has a bad entry '" + tok +
                      "' at (" + std::to_string(i) + "," + std::to_string(j) +
                      ")");
    }
  if (in >> tok)
    throw IoError("matrix " + path.string() + " has trailing data");

  if (!A.allFinite())
    throw NumericError("matrix " + path.string() + " has non-finite entries");
  return A;
}

void write_matrix(const std::filesystem::path& path, const Matrix& A) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix file: " + path.string());
  out << A.rows() << ' ' << A.cols() << '\n';
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      if (j) out << ' ';
      out << fmt_full(A(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dictsel
