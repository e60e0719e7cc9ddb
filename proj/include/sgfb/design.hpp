#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "sgfb/error.hpp"
#include "sgfb/sampling.hpp"

namespace sgfb {

// ---------------------------------------------------------------------------
// Classical linear-phase filter sets
// ---------------------------------------------------------------------------

/// M real FIR filters of length L = M*K, one per row of `taps`. Even-indexed
/// rows are symmetric, odd-indexed rows anti-symmetric.
struct ClassicalFilterSet {
  std::size_t m_channels = 0;
  std::size_t overlap = 1;  // K
  Eigen::MatrixXd taps;     // M x L

  std::size_t length() const { return static_cast<std::size_t>(taps.cols()); }

  /// Max deviation from the even/odd symmetry pattern.
  double symmetry_residual() const {
    double worst = 0.0;
    const auto len = taps.cols();
    for (Eigen::Index m = 0; m < taps.rows(); ++m) {
      const double s = (m % 2 == 0) ? 1.0 : -1.0;
      for (Eigen::Index n = 0; n < len; ++n) {
        worst = std::max(worst, std::abs(taps(m, n) - s * taps(m, len - 1 - n)));
      }
    }
    return worst;
  }
};

/// H_m(w) = sum_n h_m[n] e^{-j w n}
inline std::complex<double> dtft(const ClassicalFilterSet& fs, std::size_t m, double omega) {
  std::complex<double> acc{0.0, 0.0};
  const auto row = static_cast<Eigen::Index>(m);
  for (Eigen::Index n = 0; n < fs.taps.cols(); ++n) {
    acc += fs.taps(row, n) * std::polar(1.0, -omega * static_cast<double>(n));
  }
  return acc;
}

/// Delay-compensated response: e^{j(L-1)w/2} H_m(w) for even m, -j e^{j(L-1)w/2} H_m(w)
/// for odd m. Real up to rounding for a valid linear-phase set. Defined for any real w.
inline std::complex<double> amplitude_response_complex(const ClassicalFilterSet& fs, std::size_t m,
                                                       double omega) {
  const double half = 0.5 * static_cast<double>(fs.length() - 1);
  std::complex<double> r = std::polar(1.0, half * omega) * dtft(fs, m, omega);
  if (m % 2 == 1) r *= std::complex<double>(0.0, -1.0);
  return r;
}

inline void check_omega(double omega) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (!(omega >= 0.0 && omega <= two_pi)) {
    throw DimensionError("frequency must lie in [0, 2pi]");
  }
}

inline std::complex<double> frequency_response(const ClassicalFilterSet& fs, std::size_t m,
                                               double omega) {
  check_omega(omega);
  if (m >= fs.m_channels) throw DimensionError("channel index out of range");
  return dtft(fs, m, omega);
}

/// Real amplitude R_m(w); throws if the imaginary residue exceeds tol.
inline double amplitude_response(const ClassicalFilterSet& fs, std::size_t m, double omega,
                                 double tol = 1e-10) {
  check_omega(omega);
  if (m >= fs.m_channels) throw DimensionError("channel index out of range");
  const auto r = amplitude_response_complex(fs, m, omega);
  if (std::abs(r.imag()) > tol) {
    throw ValidationError("amplitude response not real: filter set is not linear phase");
  }
  return r.real();
}

struct ClassicalPrReport {
  double max_residual_eq13 = 0.0;  // |sum_m G*_m H_m - c^2|
  double max_residual_eq14 = 0.0;  // |sum_m G*_m(w) H_m(w + 2 pi p / M)|, p = 1..M-1
  double c_sq = 0.0;

  double max_residual() const { return std::max(max_residual_eq13, max_residual_eq14); }
};

/// Evaluates the classical PR and alias-cancellation sums on a uniform grid
/// over [0, 2pi), with synthesis = analysis.
inline ClassicalPrReport verify_classical_pr(const ClassicalFilterSet& fs, std::size_t grid_size) {
  if (grid_size < 64) throw DimensionError("verify_classical_pr: grid_size must be >= 64");
  const std::size_t m_ch = fs.m_channels;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  std::vector<double> diag(grid_size);
  ClassicalPrReport rep;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double w = two_pi * static_cast<double>(k) / static_cast<double>(grid_size);
    std::vector<std::complex<double>> h(m_ch);
    for (std::size_t m = 0; m < m_ch; ++m) h[m] = dtft(fs, m, w);
    double d = 0.0;
    for (std::size_t m = 0; m < m_ch; ++m) d += std::norm(h[m]);
    diag[k] = d;
    for (std::size_t p = 1; p < m_ch; ++p) {
      const double ws = w + two_pi * static_cast<double>(p) / static_cast<double>(m_ch);
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t m = 0; m < m_ch; ++m) acc += std::conj(h[m]) * dtft(fs, m, ws);
      rep.max_residual_eq14 = std::max(rep.max_residual_eq14, std::abs(acc));
    }
  }
  double sum = 0.0;
  for (double d : diag) sum += d;
  rep.c_sq = sum / static_cast<double>(grid_size);
  for (double d : diag) rep.max_residual_eq13 = std::max(rep.max_residual_eq13, std::abs(d - rep.c_sq));
  return rep;
}

namespace detail {

// Orthonormal type-II cosine basis; row k is c_k cos(pi k (n + 1/2) / M).
inline Eigen::MatrixXd dct2_matrix(std::size_t m) {
  const auto mm = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd c(mm, mm);
  for (Eigen::Index k = 0; k < mm; ++k) {
    const double ck = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(m));
    for (Eigen::Index n = 0; n < mm; ++n) {
      c(k, n) = ck * std::cos(std::numbers::pi * static_cast<double>(k) *
                              (static_cast<double>(n) + 0.5) / static_cast<double>(m));
    }
  }
  return c;
}

// Orthonormal type-IV cosine basis.
inline Eigen::MatrixXd dct4_matrix(std::size_t m) {
  const auto mm = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd c(mm, mm);
  const double s = std::sqrt(2.0 / static_cast<double>(m));
  for (Eigen::Index k = 0; k < mm; ++k) {
    for (Eigen::Index n = 0; n < mm; ++n) {
      c(k, n) = s * std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) *
                             (static_cast<double>(n) + 0.5) / static_cast<double>(m));
    }
  }
  return c;
}

inline void require_even_channels(std::size_t m) {
  if (m < 2 || m % 2 != 0) {
    throw DimensionError("channel count must be even and >= 2, got " + std::to_string(m));
  }
}

inline void validate_classical(const ClassicalFilterSet& fs, double pr_tol) {
  if (fs.symmetry_residual() > 1e-12) {
    throw ValidationError("filter set violates the even/odd symmetry pattern");
  }
  if (verify_classical_pr(fs, 256).max_residual() > pr_tol) {
    throw ValidationError("filter set fails classical perfect reconstruction");
  }
}

}  // namespace detail

/// K = 1 set: rows of the orthonormal M-point DCT-II.
inline ClassicalFilterSet dct_filter_set(std::size_t m) {
  detail::require_even_channels(m);
  ClassicalFilterSet fs{m, 1, detail::dct2_matrix(m)};
  detail::validate_classical(fs, 1e-12);
  return fs;
}

/// K = 2 lapped orthogonal transform, L = 2M:
///   P = 1/2 [ A      A Z  ]      A = De - Do
///           [ J A   -J A Z ]     Z = C2 C4^T  (fast-LOT rotation, size M/2)
/// Columns of the left half are symmetric, right half anti-symmetric; channels
/// interleave the two halves so even channels are symmetric.
inline ClassicalFilterSet lot_filter_set(std::size_t m) {
  detail::require_even_channels(m);
  if (m < 4) throw DimensionError("LOT needs M >= 4");
  const auto mm = static_cast<Eigen::Index>(m);
  const auto half = mm / 2;
  const Eigen::MatrixXd c = detail::dct2_matrix(m);

  Eigen::MatrixXd a(mm, half);
  for (Eigen::Index i = 0; i < half; ++i) a.col(i) = (c.row(2 * i) - c.row(2 * i + 1)).transpose();
  const Eigen::MatrixXd ja = a.colwise().reverse();
  const Eigen::MatrixXd z =
      detail::dct2_matrix(m / 2) * detail::dct4_matrix(m / 2).transpose();
  const Eigen::MatrixXd az = a * z;
  const Eigen::MatrixXd jaz = ja * z;

  Eigen::MatrixXd taps(mm, 2 * mm);
  for (Eigen::Index i = 0; i < half; ++i) {
    taps.row(2 * i) << 0.5 * a.col(i).transpose(), 0.5 * ja.col(i).transpose();
    taps.row(2 * i + 1) << 0.5 * az.col(i).transpose(), -0.5 * jaz.col(i).transpose();
  }
  ClassicalFilterSet fs{m, 2, std::move(taps)};
  detail::validate_classical(fs, 1e-10);
  return fs;
}

// ---------------------------------------------------------------------------
// Graph-frequency warp
// ---------------------------------------------------------------------------

enum class AlphaBase { kPaperEigenvalue, kTiledEigenvalue, kTiledRank };

inline std::string_view to_string(AlphaBase b) {
  switch (b) {
    case AlphaBase::kPaperEigenvalue: return "paper";
    case AlphaBase::kTiledEigenvalue: return "tiled-eig";
    case AlphaBase::kTiledRank: return "tiled-rank";
  }
  return "?";
}

inline AlphaBase parse_alpha_base(std::string_view s) {
  if (s == "paper") return AlphaBase::kPaperEigenvalue;
  if (s == "tiled-eig") return AlphaBase::kTiledEigenvalue;
  if (s == "tiled-rank") return AlphaBase::kTiledRank;
  throw ParseError("unknown alpha base '" + std::string(s) + "'");
}

struct AlphaMap {
  Eigen::VectorXd alphas;
  AlphaBase base = AlphaBase::kTiledEigenvalue;
  std::size_t m_channels = 2;
};

/// Max violation of the alias-pair relations
///   same-parity blocks q, q' at offset r:     a[q'B+r] - a[qB+r]       = pi (q'-q) / M
///   opposite-parity blocks, offsets r, B-1-r: a[qB+r] + a[q'B+B-1-r]   = pi (q+q'+1) / M
inline double alpha_relation_residual(const AlphaMap& map) {
  const auto n = static_cast<std::size_t>(map.alphas.size());
  const std::size_t m = map.m_channels;
  const std::size_t b = n / m;
  const double pi_m = std::numbers::pi / static_cast<double>(m);
  double worst = 0.0;
  for (std::size_t q = 0; q < m; ++q) {
    for (std::size_t qp = 0; qp < m; ++qp) {
      for (std::size_t r = 0; r < b; ++r) {
        const double ai = map.alphas(static_cast<Eigen::Index>(q * b + r));
        if ((q + qp) % 2 == 0) {
          const double aj = map.alphas(static_cast<Eigen::Index>(qp * b + r));
          const double want = pi_m * (static_cast<double>(qp) - static_cast<double>(q));
          worst = std::max(worst, std::abs((aj - ai) - want));
        } else {
          const double aj = map.alphas(static_cast<Eigen::Index>(qp * b + (b - 1 - r)));
          const double want = pi_m * static_cast<double>(q + qp + 1);
          worst = std::max(worst, std::abs((ai + aj) - want));
        }
      }
    }
  }
  return worst;
}

/// Warp eigenvalue index i = qB + r (B = N/M) to a classical frequency:
///   q even: pi q / M       + beta[r]
///   q odd:  pi (q+1) / M   - beta[B-1-r]
/// with beta from the chosen base. Any finite beta satisfies the alias-pair
/// relations; the base only controls band placement.
inline AlphaMap build_alpha_map(const Eigen::VectorXd& lambdas, std::size_t m, AlphaBase base) {
  FoldSpec{static_cast<std::size_t>(lambdas.size()), m, Parity::kEven}.validate();
  const auto n = static_cast<std::size_t>(lambdas.size());
  const std::size_t b = n / m;
  const double pi = std::numbers::pi;
  const double md = static_cast<double>(m);

  Eigen::VectorXd beta(static_cast<Eigen::Index>(b));
  auto tiled_rank = [&] {
    for (std::size_t r = 0; r < b; ++r) {
      beta(static_cast<Eigen::Index>(r)) =
          (pi / md) * (static_cast<double>(r) + 0.5) / static_cast<double>(b);
    }
  };
  switch (base) {
    case AlphaBase::kPaperEigenvalue: {
      const double lmax = lambdas(lambdas.size() - 1);
      if (!(lmax != 0.0)) throw DimensionError("alpha map: lambda_max is zero");
      beta = pi * lambdas.head(static_cast<Eigen::Index>(b)) / lmax;
      break;
    }
    case AlphaBase::kTiledEigenvalue: {
      const double lo = lambdas(0);
      const double hi = lambdas(static_cast<Eigen::Index>(b - 1));
      const double scale = std::max({std::abs(lo), std::abs(hi), std::abs(lambdas(lambdas.size() - 1))});
      if (hi - lo > 1e-14 * std::max(scale, 1.0)) {
        beta = (pi / md) * (lambdas.head(static_cast<Eigen::Index>(b)).array() - lo) / (hi - lo);
      } else {
        tiled_rank();
      }
      break;
    }
    case AlphaBase::kTiledRank:
      tiled_rank();
      break;
  }

  AlphaMap map{Eigen::VectorXd(static_cast<Eigen::Index>(n)), base, m};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t q = i / b;
    const std::size_t r = i % b;
    const double qd = static_cast<double>(q);
    map.alphas(static_cast<Eigen::Index>(i)) =
        (q % 2 == 0) ? pi * qd / md + beta(static_cast<Eigen::Index>(r))
                     : pi * (qd + 1.0) / md - beta(static_cast<Eigen::Index>(b - 1 - r));
  }
  if (!map.alphas.allFinite() || alpha_relation_residual(map) > 1e-12) {
    throw ValidationError("alpha map violates the alias-pair relations");
  }
  return map;
}

// ---------------------------------------------------------------------------
// Graph spectral kernel sets
// ---------------------------------------------------------------------------

/// Analysis responses H_m(lambda_i) and synthesis responses G_m(lambda_i).
struct KernelSet {
  std::vector<Eigen::VectorXd> analysis;
  std::vector<Eigen::VectorXd> synthesis;
  double pr_constant_sq = 1.0;

  std::size_t channels() const { return analysis.size(); }
  std::size_t n() const { return analysis.empty() ? 0 : static_cast<std::size_t>(analysis[0].size()); }
  Parity parity(std::size_t m) const { return channel_parity(m); }

  void validate() const {
    if (analysis.size() != synthesis.size()) throw DimensionError("kernel set: channel mismatch");
    FoldSpec{n(), channels(), Parity::kEven}.validate();
    for (std::size_t m = 0; m < channels(); ++m) {
      if (static_cast<std::size_t>(analysis[m].size()) != n() ||
          static_cast<std::size_t>(synthesis[m].size()) != n()) {
        throw DimensionError("kernel set: response length mismatch");
      }
      if (!analysis[m].allFinite() || !synthesis[m].allFinite()) {
        throw ValidationError("kernel set: non-finite response");
      }
    }
  }
};

/// Mean over i of sum_m G_m(i) H_m(i): the diagonal of the transfer matrix.
inline double measured_pr_constant(const KernelSet& ks) {
  const auto n = static_cast<Eigen::Index>(ks.n());
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (std::size_t m = 0; m < ks.channels(); ++m) diag += ks.synthesis[m].cwiseProduct(ks.analysis[m]);
  return diag.mean();
}

/// Brick-wall partition of the eigenvalue indices into M contiguous blocks.
inline KernelSet ideal_kernels(std::size_t n, std::size_t m) {
  FoldSpec{n, m, Parity::kEven}.validate();
  KernelSet ks;
  const std::size_t b = n / m;
  for (std::size_t c = 0; c < m; ++c) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    h.segment(static_cast<Eigen::Index>(c * b), static_cast<Eigen::Index>(b)).setOnes();
    ks.analysis.push_back(h);
    ks.synthesis.push_back(std::move(h));
  }
  ks.pr_constant_sq = 1.0;
  return ks;
}

/// H_m(lambda_i) = R_m(alpha_i); synthesis equals analysis.
inline KernelSet convert_filter_set(const ClassicalFilterSet& fs, const AlphaMap& map) {
  if (fs.m_channels != map.m_channels) throw DimensionError("convert: channel count mismatch");
  const auto n = map.alphas.size();
  KernelSet ks;
  for (std::size_t m = 0; m < fs.m_channels; ++m) {
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto r = amplitude_response_complex(fs, m, map.alphas(i));
      if (std::abs(r.imag()) > 1e-10) {
        throw ValidationError("converted response has imaginary residue " +
                              std::to_string(std::abs(r.imag())));
      }
      h(i) = r.real();
    }
    ks.analysis.push_back(h);
    ks.synthesis.push_back(std::move(h));
  }
  ks.validate();
  ks.pr_constant_sq = measured_pr_constant(ks);
  return ks;
}

// ---------------------------------------------------------------------------
// Kernel recipes by name
// ---------------------------------------------------------------------------

enum class FilterKind { kIdeal, kDct, kLot };

inline std::string_view to_string(FilterKind k) {
  switch (k) {
    case FilterKind::kIdeal: return "ideal";
    case FilterKind::kDct: return "dct";
    case FilterKind::kLot: return "lot";
  }
  return "?";
}

inline FilterKind parse_filter_kind(std::string_view s) {
  if (s == "ideal") return FilterKind::kIdeal;
  if (s == "dct") return FilterKind::kDct;
  if (s == "lot") return FilterKind::kLot;
  throw ParseError("unknown filter kind '" + std::string(s) + "'");
}

struct KernelDesign {
  FilterKind kind = FilterKind::kIdeal;
  AlphaBase base = AlphaBase::kTiledEigenvalue;

  KernelSet make(const Eigen::VectorXd& lambdas, std::size_t m) const {
    const auto n = static_cast<std::size_t>(lambdas.size());
    switch (kind) {
      case FilterKind::kIdeal:
        return ideal_kernels(n, m);
      case FilterKind::kDct:
        return convert_filter_set(dct_filter_set(m), build_alpha_map(lambdas, m, base));
      case FilterKind::kLot:
        return convert_filter_set(lot_filter_set(m), build_alpha_map(lambdas, m, base));
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace sgfb
