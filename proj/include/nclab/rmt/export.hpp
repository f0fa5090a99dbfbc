#pragma once

#include <cstring>
#include <istream>
#include <ostream>

#include "nclab/rmt/matrix.hpp"

namespace nclab {

// Binary matrix layout, little-endian:
//   bytes 0-3   magic "NCLM"
//   bytes 4-7   uint32 format version (1)
//   bytes 8-15  uint64 rows
//   bytes 16-23 uint64 cols
//   then rows*cols entries in row-major order, each two float64 (re, im).

inline void write_matrix_binary(std::ostream& os, const CMatrix& a) {
  const std::uint32_t version = 1;
  const std::uint64_t rows = static_cast<std::uint64_t>(a.rows()), cols = static_cast<std::uint64_t>(a.cols());
  os.write("NCLM", 4);
  os.write(reinterpret_cast<const char*>(&version), sizeof version);
  os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v[2] = {a(i, j).real(), a(i, j).imag()};
      os.write(reinterpret_cast<const char*>(v), sizeof v);
    }
  if (!os) throw Error(ErrorKind::io, "matrix write failed");
}

inline CMatrix read_matrix_binary(std::istream& is) {
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t rows = 0, cols = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  is.read(reinterpret_cast<char*>(&rows), sizeof rows);
  is.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!is || std::memcmp(magic, "NCLM", 4) != 0 || version != 1)
    throw Error(ErrorKind::parse, "not an NCLM v1 matrix file");
  CMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      double v[2];
      is.read(reinterpret_cast<char*>(v), sizeof v);
      a(i, j) = Complex(v[0], v[1]);
    }
  if (!is) throw Error(ErrorKind::io, "truncated matrix file");
  return a;
}

/// CSV "index,eigenvalue".
inline void write_spectrum_csv(std::ostream& os, const RVector& eig) {
  os << "index,eigenvalue\n";
  os.precision(17);
  for (Eigen::Index k = 0; k < eig.size(); ++k) os << k << ',' << eig(k) << '\n';
}

}  // namespace nclab
