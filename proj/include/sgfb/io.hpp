#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sgfb/basis.hpp"
#include "sgfb/denoise.hpp"
#include "sgfb/design.hpp"
#include "sgfb/error.hpp"
#include "sgfb/filterbank.hpp"

namespace sgfb::io {

static_assert(std::endian::native == std::endian::little, "cache format assumes a little-endian host");

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes via a temporary file in the same directory, then renames.
inline void write_atomic(const std::filesystem::path& path, std::string_view data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) {
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  return out;
}

inline double parse_double(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

inline bool skippable(const std::string& line) {
  const auto b = line.find_first_not_of(" \t");
  return b == std::string::npos || line[b] == '#';
}

}  // namespace detail

// -- signals: one value per line, optional "# n=<N>" header -------------------

inline std::string format_signal(const Eigen::VectorXd& f) {
  std::string out = "# n=" + std::to_string(f.size()) + "\n";
  for (Eigen::Index i = 0; i < f.size(); ++i) out += format_double(f(i)) + "\n";
  return out;
}

inline Eigen::VectorXd parse_signal(std::string_view text) {
  std::vector<double> vals;
  std::optional<std::size_t> declared;
  std::size_t line_no = 0;
  for (const auto& line : detail::split_lines(text)) {
    ++line_no;
    if (detail::skippable(line)) {
      const auto p = line.find("n=");
      if (!vals.empty() || p == std::string::npos) continue;
      declared = static_cast<std::size_t>(detail::parse_double(line.substr(p + 2), line_no));
      continue;
    }
    vals.push_back(detail::parse_double(detail::split_csv(line).at(0), line_no));
  }
  if (declared && *declared != vals.size()) {
    throw ParseError("signal header declares n=" + std::to_string(*declared) + " but has " +
                     std::to_string(vals.size()) + " values");
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// -- subband coefficients: channel,index,value ---------------------------------

inline std::string format_coefficients(const SubbandCoefficients& c) {
  std::string out = "channel,index,value\n";
  for (std::size_t m = 0; m < c.channels.size(); ++m) {
    for (Eigen::Index i = 0; i < c.channels[m].size(); ++i) {
      out += std::to_string(m) + "," + std::to_string(i) + "," + format_double(c.channels[m](i)) + "\n";
    }
  }
  return out;
}

inline SubbandCoefficients parse_coefficients(std::string_view text) {
  std::map<std::size_t, std::map<std::size_t, double>> cells;
  std::size_t line_no = 0;
  for (const auto& line : detail::split_lines(text)) {
    ++line_no;
    if (detail::skippable(line) || line.rfind("channel", 0) == 0) continue;
    const auto f = detail::split_csv(line);
    if (f.size() != 3) throw ParseError("line " + std::to_string(line_no) + ": expected channel,index,value");
    const auto m = static_cast<std::size_t>(detail::parse_double(f[0], line_no));
    const auto i = static_cast<std::size_t>(detail::parse_double(f[1], line_no));
    if (!cells[m].emplace(i, detail::parse_double(f[2], line_no)).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate coefficient");
    }
  }
  SubbandCoefficients out;
  std::size_t expect_m = 0;
  for (const auto& [m, row] : cells) {
    if (m != expect_m++) throw ParseError("coefficient channels are not contiguous from 0");
    Eigen::VectorXd v(static_cast<Eigen::Index>(row.size()));
    std::size_t expect_i = 0;
    for (const auto& [i, val] : row) {
      if (i != expect_i) throw ParseError("coefficient indices are not contiguous from 0");
      v(static_cast<Eigen::Index>(expect_i++)) = val;
    }
    out.channels.push_back(std::move(v));
  }
  return out;
}

// -- kernel sets: one row per channel, N columns --------------------------------

inline std::string format_kernels(const KernelSet& ks) {
  std::string out;
  for (const auto& h : ks.analysis) {
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      if (i) out += ',';
      out += format_double(h(i));
    }
    out += '\n';
  }
  return out;
}

/// Synthesis = analysis; c^2 is re-measured from the responses.
inline KernelSet parse_kernels(std::string_view text) {
  KernelSet ks;
  std::size_t line_no = 0;
  for (const auto& line : detail::split_lines(text)) {
    ++line_no;
    if (detail::skippable(line)) continue;
    const auto f = detail::split_csv(line);
    Eigen::VectorXd h(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) h(static_cast<Eigen::Index>(i)) = detail::parse_double(f[i], line_no);
    ks.analysis.push_back(h);
    ks.synthesis.push_back(std::move(h));
  }
  if (ks.analysis.empty()) throw ParseError("kernel file is empty");
  ks.validate();
  ks.pr_constant_sq = measured_pr_constant(ks);
  return ks;
}

/// lambda, H_0, ..., H_{M-1}
inline std::string format_filter_plot(const Eigen::VectorXd& lambdas, const KernelSet& ks) {
  std::string out = "lambda";
  for (std::size_t m = 0; m < ks.channels(); ++m) out += ",H" + std::to_string(m);
  out += '\n';
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    out += format_double(lambdas(i));
    for (const auto& h : ks.analysis) out += "," + format_double(h(i));
    out += '\n';
  }
  return out;
}

// -- denoising table ------------------------------------------------------------

inline std::string format_denoise_csv(const DenoiseResult& r) {
  std::string out = "method";
  for (double s : r.sigma_list) out += ",sigma=" + format_double(s);
  out += '\n';
  auto row = [&](const DenoiseRow& d) {
    out += d.name;
    for (double v : d.mean_snr) out += "," + format_double(v);
    out += '\n';
  };
  row(r.noisy);
  for (const auto& m : r.methods) row(m);
  return out;
}

inline std::string format_denoise_table(const DenoiseResult& r) {
  std::ostringstream os;
  os << std::left << std::setw(18) << "sigma/RMS";
  for (double s : r.sigma_list) os << std::right << std::setw(10) << std::setprecision(4) << s;
  os << '\n';
  auto row = [&](const DenoiseRow& d) {
    os << std::left << std::setw(18) << d.name;
    for (double v : d.mean_snr) os << std::right << std::setw(10) << std::fixed << std::setprecision(2) << v;
    os << std::defaultfloat << '\n';
  };
  row(r.noisy);
  for (const auto& m : r.methods) row(m);
  return os.str();
}

// -- eigendecomposition cache -----------------------------------------------------
//
// Layout (little-endian):
//   "SGFB1" | kind:u8 | N:u64 | hash:u64 | lambdas: N x f64 | U: N*N x f64 (column-major)

inline constexpr std::string_view kCacheMagic = "SGFB1";

/// FNV-1a over the kind tag, N and the operator's entries (column-major bytes).
inline std::uint64_t operator_hash(const Eigen::MatrixXd& op, VariationKind kind) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const auto k = static_cast<std::uint8_t>(kind);
  const auto n = static_cast<std::uint64_t>(op.rows());
  mix(&k, 1);
  mix(&n, 8);
  mix(op.data(), static_cast<std::size_t>(op.size()) * sizeof(double));
  return h;
}

inline std::string encode_cache(const SpectralBasis& b, std::uint64_t hash) {
  const auto n = static_cast<std::uint64_t>(b.n());
  std::string out(kCacheMagic);
  out.push_back(static_cast<char>(static_cast<std::uint8_t>(b.kind())));
  auto put = [&out](const void* p, std::size_t len) { out.append(static_cast<const char*>(p), len); };
  put(&n, 8);
  put(&hash, 8);
  put(b.lambdas().data(), n * sizeof(double));
  put(b.U().data(), n * n * sizeof(double));
  return out;
}

struct CacheEntry {
  VariationKind kind;
  std::uint64_t hash;
  SpectralBasis basis;
};

inline std::optional<CacheEntry> decode_cache(std::string_view data) {
  constexpr std::size_t header = 5 + 1 + 8 + 8;
  if (data.size() < header || data.substr(0, 5) != kCacheMagic) return std::nullopt;
  const auto kind_tag = static_cast<std::uint8_t>(data[5]);
  if (kind_tag > 2) return std::nullopt;
  std::uint64_t n = 0, hash = 0;
  std::memcpy(&n, data.data() + 6, 8);
  std::memcpy(&hash, data.data() + 14, 8);
  if (n == 0 || n > (1u << 16)) return std::nullopt;
  if (data.size() != header + (n + n * n) * sizeof(double)) return std::nullopt;
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::VectorXd lam(ni);
  Eigen::MatrixXd u(ni, ni);
  std::memcpy(lam.data(), data.data() + header, n * sizeof(double));
  std::memcpy(u.data(), data.data() + header + n * sizeof(double), n * n * sizeof(double));
  const auto kind = static_cast<VariationKind>(kind_tag);
  return CacheEntry{kind, hash, SpectralBasis(kind, std::move(lam), std::move(u))};
}

inline std::filesystem::path cache_path(const std::filesystem::path& dir, std::uint64_t hash, VariationKind kind) {
  char name[64];
  std::snprintf(name, sizeof name, "%016llx-%s.sgfbeig", static_cast<unsigned long long>(hash),
                std::string(to_string(kind)).c_str());
  return dir / name;
}

/// Loads the basis from `cache_dir` when a file with a matching operator hash
/// exists; otherwise computes it and writes the cache. A file whose stored
/// hash or size does not check out is reported on `warn` and recomputed.
inline SpectralBasis cached_basis(const Graph& g, VariationKind kind,
                                  const std::optional<std::filesystem::path>& cache_dir,
                                  std::ostream& warn = std::cerr) {
  const Eigen::MatrixXd op = variation_operator(g, kind);
  if (!cache_dir) return basis_from_operator(op, kind);

  const auto hash = operator_hash(op, kind);
  const auto path = cache_path(*cache_dir, hash, kind);
  if (std::filesystem::exists(path)) {
    auto entry = decode_cache(read_text(path));
    if (entry && entry->hash == hash && entry->kind == kind && entry->basis.n() == g.n()) {
      return std::move(entry->basis);
    }
    warn << "warning: eigen cache " << path.string() << " is corrupt or stale; recomputing\n";
  }
  SpectralBasis b = basis_from_operator(op, kind);
  std::filesystem::create_directories(*cache_dir);
  write_atomic(path, encode_cache(b, hash));
  return b;
}

}  // namespace sgfb::io
