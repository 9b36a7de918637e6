#pragma once

// Dataset files: one JSON header line, then N row-major n×n little-endian float64 matrices,
// then N little-endian int64 labels when has_labels is set.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "frechet/error.hpp"
#include "frechet/spd.hpp"
#include "frechet/synth.hpp"

namespace frechet {

inline constexpr int kFormatVersion = 1;

namespace detail {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <typename T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is, std::uint64_t& offset) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (is.gcount() != static_cast<std::streamsize>(sizeof(T)))
    fail(ErrorCode::ParseError, "payload truncated at byte offset " + std::to_string(offset + is.gcount()));
  offset += sizeof(T);
  return to_little(v);
}

}  // namespace detail

inline void save_dataset(const std::string& path, const std::vector<SpdMatrix>& points, const std::vector<int>* labels,
                         const nlohmann::json& provenance = nlohmann::json::object()) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "refusing to save an empty dataset");
  const int n = points.front().dim();
  if (labels && labels->size() != points.size()) fail(ErrorCode::DimMismatch, "labels and points differ in length");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  const nlohmann::json header = {{"format_version", kFormatVersion},
                                 {"n", n},
                                 {"N", points.size()},
                                 {"has_labels", labels != nullptr},
                                 {"provenance", provenance}};
  os << header.dump() << '\n';
  for (const auto& p : points) {
    check_same_dim(n, p.dim());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) detail::put<double>(os, p(i, j));
  }
  if (labels)
    for (int l : *labels) detail::put<std::int64_t>(os, l);
  if (!os) fail(ErrorCode::IoError, "write to " + path + " failed");
}

inline void save_dataset(const std::string& path, const LabeledDataset& ds) {
  save_dataset(path, ds.points, ds.labels.empty() ? nullptr : &ds.labels, ds.provenance);
}

struct LoadOptions {
  bool validate = true;  ///< symmetric + positive-definite check per matrix
};

struct LoadedDataset {
  std::vector<SpdMatrix> points;
  std::vector<int> labels;  ///< empty when the file carries none
  nlohmann::json provenance;
  int n = 0;
};

inline LoadedDataset load_dataset(const std::string& path, const LoadOptions& options = {}) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) fail(ErrorCode::ParseError, "missing header at byte offset 0");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, "header is not valid JSON at byte offset " + std::to_string(e.byte));
  }
  LoadedDataset out;
  std::uint64_t count = 0;
  bool has_labels = false;
  try {
    if (header.at("format_version").get<int>() != kFormatVersion)
      fail(ErrorCode::ParseError, "unsupported format_version at byte offset 0");
    out.n = header.at("n").get<int>();
    count = header.at("N").get<std::uint64_t>();
    has_labels = header.at("has_labels").get<bool>();
    out.provenance = header.value("provenance", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad header field at byte offset 0: ") + e.what());
  }
  if (out.n < 1) fail(ErrorCode::ParseError, "header n must be positive");

  std::uint64_t offset = line.size() + 1;
  out.points.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    Eigen::MatrixXd m(out.n, out.n);
    for (int i = 0; i < out.n; ++i)
      for (int j = 0; j < out.n; ++j) m(i, j) = detail::get<double>(is, offset);
    if (!options.validate) {
      out.points.push_back(SpdMatrix::unchecked(std::move(m)));
      continue;
    }
    try {
      out.points.emplace_back(m);
    } catch (const Error& e) {
      std::string msg = e.what();
      if (m.allFinite())
        msg = "min eigenvalue " + std::to_string(detail::eigenvalues_sym(symmetrize(m)).minCoeff()) + "; " + msg;
      throw Error(e.code(), "matrix " + std::to_string(k) + ": " + msg);
    }
  }
  if (has_labels) {
    out.labels.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
      const auto l = detail::get<std::int64_t>(is, offset);
      if (l < 0 || l > std::numeric_limits<int>::max())
        fail(ErrorCode::ParseError, "label " + std::to_string(k) + " out of range at byte offset " +
                                        std::to_string(offset - sizeof(std::int64_t)));
      out.labels.push_back(static_cast<int>(l));
    }
  }
  if (is.peek() != std::char_traits<char>::eof())
    fail(ErrorCode::ParseError, "trailing bytes after payload at byte offset " + std::to_string(offset));
  return out;
}

/// Unit diagonal, strict upper triangle from `entries` (row-major), mirrored, then + eps·Id.
inline SpdMatrix complete_upper_triangular(const std::vector<double>& entries, int n, double eps = 1e-6) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be positive");
  const std::size_t expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  if (entries.size() != expected)
    fail(ErrorCode::DimMismatch, "expected " + std::to_string(expected) + " strict upper entries, got " +
                                     std::to_string(entries.size()));
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!std::isfinite(entries[k])) fail(ErrorCode::NonFinite, "entry " + std::to_string(k) + " is not finite");
      a(i, j) = entries[k++];
    }
  a.triangularView<Eigen::StrictlyLower>() = a.transpose().triangularView<Eigen::StrictlyLower>();
  a = symmetrize(a) + eps * Eigen::MatrixXd::Identity(n, n);
  const double lo = detail::eigenvalues_sym(a).minCoeff();
  if (!(lo > 0.0))
    fail(ErrorCode::NotPositiveDefinite,
         "completed matrix has min eigenvalue " + std::to_string(lo) + "; increase eps");
  return SpdMatrix(std::move(a));
}

/// One matrix per non-empty line: n(n-1)/2 comma-separated strict-upper entries.
inline std::vector<SpdMatrix> load_upper_triangular_csv(const std::string& path, int n, double eps = 1e-6) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::IoError, "cannot open " + path);
  std::vector<SpdMatrix> out;
  std::string line;
  std::uint64_t offset = 0;
  while (std::getline(is, line)) {
    const std::uint64_t line_start = offset;
    offset += line.size() + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> entries;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        entries.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad number '" + cell + "' on line starting at byte offset " +
                                        std::to_string(line_start));
      }
    }
    try {
      out.push_back(complete_upper_triangular(entries, n, eps));
    } catch (const Error& e) {
      throw Error(e.code(), "row " + std::to_string(out.size()) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace frechet
