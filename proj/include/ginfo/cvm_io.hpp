#pragma once

// Plain-text covariance files:
//
//   # ginfo-cvm ordering=<mode-interleaved|block-xp|party-block-xp> modes=<n>
//   <2n rows of 2n numbers, 17 significant digits>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "ginfo/symplectic_core.hpp"

namespace ginfo {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (r.ec != std::errc{}) fail(ErrorKind::Domain, "cannot format number");
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size())
    fail(ErrorKind::InvalidArgument, "not a number: '" + tok + "'");
  return v;
}

inline void write_cvm(std::ostream& os, const CovarianceMatrix& cvm) {
  os << "# ginfo-cvm ordering=" << to_string(cvm.ordering()) << " modes=" << cvm.modes() << '\n';
  const Matrix& m = cvm.matrix();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << format_double(m(i, j));
    os << '\n';
  }
}

inline void write_cvm_file(const std::string& path, const CovarianceMatrix& cvm) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  write_cvm(f, cvm);
  if (!f) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

inline CovarianceMatrix read_cvm(std::istream& is, const NumericPolicy& pol = default_policy) {
  std::string header;
  if (!std::getline(is, header)) fail(ErrorKind::InvalidArgument, "empty covariance file");
  std::istringstream hs(header);
  std::string hash, tag, ord_kv, modes_kv;
  hs >> hash >> tag >> ord_kv >> modes_kv;
  if (hash != "#" || tag != "ginfo-cvm" || ord_kv.rfind("ordering=", 0) != 0 || modes_kv.rfind("modes=", 0) != 0)
    fail(ErrorKind::InvalidArgument, "malformed covariance header: '" + header + "'");
  const auto ordering = parse_ordering(ord_kv.substr(9));
  const double modes_d = parse_double(modes_kv.substr(6));
  const int modes = static_cast<int>(modes_d);
  if (modes < 1 || modes != modes_d) fail(ErrorKind::InvalidArgument, "mode count must be a positive integer");

  const Index dim = 2 * modes;
  Matrix m(dim, dim);
  std::string line;
  Index row = 0;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (row == dim) fail(ErrorKind::InvalidArgument, "more rows than the declared mode count");
    std::istringstream ls(line);
    std::string tok;
    Index col = 0;
    while (ls >> tok) {
      if (col == dim) fail(ErrorKind::InvalidArgument, "row " + std::to_string(row + 1) + " has too many entries");
      m(row, col++) = parse_double(tok);
    }
    if (col != dim) fail(ErrorKind::InvalidArgument, "row " + std::to_string(row + 1) + " has too few entries");
    ++row;
  }
  if (row != dim) fail(ErrorKind::InvalidArgument, "fewer rows than the declared mode count");
  return CovarianceMatrix::make(std::move(m), ordering, pol);
}

inline CovarianceMatrix read_cvm_file(const std::string& path, const NumericPolicy& pol = default_policy) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path + "'");
  return read_cvm(f, pol);
}

}  // namespace ginfo
