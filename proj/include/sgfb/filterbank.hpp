#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgfb/basis.hpp"
#include "sgfb/design.hpp"
#include "sgfb/error.hpp"
#include "sgfb/sampling.hpp"

namespace sgfb {

/// M subband vectors of length N/M each.
struct SubbandCoefficients {
  std::vector<Eigen::VectorXd> channels;

  std::size_t total_size() const {
    std::size_t s = 0;
    for (const auto& c : channels) s += static_cast<std::size_t>(c.size());
    return s;
  }
  double energy() const {
    double e = 0.0;
    for (const auto& c : channels) e += c.squaredNorm();
    return e;
  }
};

namespace detail {

inline void check_subband_bases(const std::vector<Eigen::MatrixXd>& bases, std::size_t m,
                                std::size_t b) {
  if (bases.empty()) return;
  if (bases.size() != m) throw DimensionError("need one subband basis per channel");
  for (const auto& u : bases) {
    if (static_cast<std::size_t>(u.rows()) != b || static_cast<std::size_t>(u.cols()) != b) {
      throw DimensionError("subband basis must be (N/M) x (N/M)");
    }
    const double dev =
        (u.transpose() * u - Eigen::MatrixXd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-10) throw ValidationError("subband basis is not orthonormal");
  }
}

}  // namespace detail

/// Spectral-domain analysis: channel m = U1_m fold_m(H_m .* x). Empty
/// `subband_bases` means identity.
inline SubbandCoefficients analyze_spectrum(const KernelSet& ks, const Eigen::VectorXd& spectrum,
                                            const std::vector<Eigen::MatrixXd>& subband_bases = {}) {
  if (static_cast<std::size_t>(spectrum.size()) != ks.n()) {
    throw DimensionError("analyze: signal length does not match kernel length");
  }
  const std::size_t m_ch = ks.channels();
  SubbandCoefficients out;
  out.channels.reserve(m_ch);
  for (std::size_t m = 0; m < m_ch; ++m) {
    const FoldSpec spec{ks.n(), m_ch, channel_parity(m)};
    Eigen::VectorXd y = fold_down(spec, ks.analysis[m].cwiseProduct(spectrum));
    if (!subband_bases.empty()) y = subband_bases[m] * y;
    out.channels.push_back(std::move(y));
  }
  return out;
}

/// Spectral-domain synthesis: (1/c^2) sum_m G_m .* unfold_m(U1_m^T y_m).
inline Eigen::VectorXd synthesize_spectrum(const KernelSet& ks, const SubbandCoefficients& coeffs,
                                           const std::vector<Eigen::MatrixXd>& subband_bases = {}) {
  const std::size_t m_ch = ks.channels();
  if (coeffs.channels.size() != m_ch) throw DimensionError("synthesize: wrong channel count");
  const auto n = static_cast<Eigen::Index>(ks.n());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (std::size_t m = 0; m < m_ch; ++m) {
    const FoldSpec spec{ks.n(), m_ch, channel_parity(m)};
    if (static_cast<std::size_t>(coeffs.channels[m].size()) != spec.block()) {
      throw DimensionError("synthesize: channel " + std::to_string(m) + " has wrong length");
    }
    const Eigen::VectorXd y =
        subband_bases.empty() ? coeffs.channels[m] : Eigen::VectorXd(subband_bases[m].transpose() * coeffs.channels[m]);
    acc += ks.synthesis[m].cwiseProduct(unfold_up(spec, y));
  }
  return acc / ks.pr_constant_sq;
}

/// M-channel spectral graph filter bank. Immutable after construction.
class FilterBank {
 public:
  FilterBank(std::shared_ptr<const SpectralBasis> basis, KernelSet kernels,
             std::vector<Eigen::MatrixXd> subband_bases = {})
      : basis_(std::move(basis)), kernels_(std::move(kernels)), subband_bases_(std::move(subband_bases)) {
    if (!basis_) throw DimensionError("filter bank needs a basis");
    kernels_.validate();
    if (kernels_.n() != basis_->n()) throw DimensionError("kernel length does not match basis");
    if (!(kernels_.pr_constant_sq > 0.0)) throw ValidationError("PR constant must be positive");
    detail::check_subband_bases(subband_bases_, channels(), block());
  }

  FilterBank(const SpectralBasis& basis, KernelSet kernels, std::vector<Eigen::MatrixXd> subband_bases = {})
      : FilterBank(std::make_shared<const SpectralBasis>(basis), std::move(kernels), std::move(subband_bases)) {}

  const SpectralBasis& basis() const { return *basis_; }
  const KernelSet& kernels() const { return kernels_; }
  const std::vector<Eigen::MatrixXd>& subband_bases() const { return subband_bases_; }
  std::size_t n() const { return basis_->n(); }
  std::size_t channels() const { return kernels_.channels(); }
  std::size_t block() const { return n() / channels(); }

  SubbandCoefficients analyze(const Eigen::VectorXd& signal) const {
    return analyze_spectrum(kernels_, gft(*basis_, signal), subband_bases_);
  }

  Eigen::VectorXd synthesize(const SubbandCoefficients& coeffs) const {
    return igft(*basis_, synthesize_spectrum(kernels_, coeffs, subband_bases_));
  }

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  KernelSet kernels_;
  std::vector<Eigen::MatrixXd> subband_bases_;
};

// ---------------------------------------------------------------------------
// Perfect-reconstruction oracles
// ---------------------------------------------------------------------------

struct PrReport {
  double c_sq = 0.0;
  double max_offdiag = 0.0;
  double max_diag_dev = 0.0;
  double max_same_parity_residual = 0.0;
  double max_opposite_parity_residual = 0.0;

  double tolerance() const { return 1e-9 * c_sq; }
  bool holds() const { return c_sq > 0.0 && max_offdiag < tolerance() && max_diag_dev < tolerance(); }
};

inline constexpr std::size_t kDefaultDenseLimit = 4096;

/// T = sum_m diag(G_m) S_u,m U1_m^T U1_m S_d,m diag(H_m), built column by column.
inline Eigen::MatrixXd transfer_matrix(const KernelSet& ks,
                                       const std::vector<Eigen::MatrixXd>& subband_bases = {},
                                       std::size_t dense_limit = kDefaultDenseLimit) {
  ks.validate();
  const std::size_t n = ks.n();
  if (n > dense_limit) {
    throw DimensionError("transfer_matrix: N=" + std::to_string(n) + " exceeds dense limit " +
                         std::to_string(dense_limit));
  }
  const std::size_t m_ch = ks.channels();
  detail::check_subband_bases(subband_bases, m_ch, n / m_ch);
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(ni, ni);
  for (std::size_t m = 0; m < m_ch; ++m) {
    const FoldSpec spec{n, m_ch, channel_parity(m)};
    for (Eigen::Index j = 0; j < ni; ++j) {
      const double hj = ks.analysis[m](j);
      if (hj == 0.0) continue;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(ni);
      e(j) = hj;
      Eigen::VectorXd y = fold_down(spec, e);
      if (!subband_bases.empty()) y = subband_bases[m].transpose() * (subband_bases[m] * y);
      t.col(j) += ks.synthesis[m].cwiseProduct(unfold_up(spec, y));
    }
  }
  return t;
}

/// Scalar alias-cancellation residuals. Row i = qB + r, column q' is the
/// partner block:
///   same parity:     |sum_m G_m(i) H_m(q'B + r) - c^2 [q == q']|
///   opposite parity: |sum_m (-1)^m G_m(i) H_m(q'B + B-1-r)|
struct Theorem1Report {
  Eigen::MatrixXd residual;            // N x M
  std::vector<Eigen::Index> partner;   // partner(i * M + q') = column index j
  double c_sq = 0.0;
  double max_same_parity = 0.0;
  double max_opposite_parity = 0.0;

  double max_residual() const { return std::max(max_same_parity, max_opposite_parity); }
};

inline Theorem1Report verify_theorem1_scalar(const KernelSet& ks, std::size_t n, std::size_t m_ch) {
  ks.validate();
  if (ks.n() != n || ks.channels() != m_ch) throw DimensionError("verify_theorem1_scalar: size mismatch");
  const std::size_t b = n / m_ch;
  Theorem1Report rep;
  rep.c_sq = measured_pr_constant(ks);
  rep.residual = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m_ch));
  rep.partner.resize(n * m_ch);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t q = i / b;
    const std::size_t r = i % b;
    for (std::size_t qp = 0; qp < m_ch; ++qp) {
      const bool same = (q + qp) % 2 == 0;
      const std::size_t j = same ? qp * b + r : qp * b + (b - 1 - r);
      double acc = 0.0;
      for (std::size_t m = 0; m < m_ch; ++m) {
        const double sign = (!same && m % 2 == 1) ? -1.0 : 1.0;
        acc += sign * ks.synthesis[m](static_cast<Eigen::Index>(i)) * ks.analysis[m](static_cast<Eigen::Index>(j));
      }
      if (i == j) acc -= rep.c_sq;
      const double res = std::abs(acc);
      rep.residual(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(qp)) = res;
      rep.partner[i * m_ch + qp] = static_cast<Eigen::Index>(j);
      auto& slot = same ? rep.max_same_parity : rep.max_opposite_parity;
      slot = std::max(slot, res);
    }
  }
  return rep;
}

/// Dense check that sum_m T_m = c^2 I.
inline PrReport verify_pr(const KernelSet& ks, const std::vector<Eigen::MatrixXd>& subband_bases = {},
                          std::size_t dense_limit = kDefaultDenseLimit) {
  const Eigen::MatrixXd t = transfer_matrix(ks, subband_bases, dense_limit);
  PrReport rep;
  rep.c_sq = t.diagonal().mean();
  rep.max_diag_dev = (t.diagonal().array() - rep.c_sq).abs().maxCoeff();
  Eigen::MatrixXd off = t;
  off.diagonal().setZero();
  rep.max_offdiag = off.cwiseAbs().maxCoeff();
  const auto scalar = verify_theorem1_scalar(ks, ks.n(), ks.channels());
  rep.max_same_parity_residual = scalar.max_same_parity;
  rep.max_opposite_parity_residual = scalar.max_opposite_parity;
  return rep;
}

inline PrReport verify_pr(const FilterBank& fb, std::size_t dense_limit = kDefaultDenseLimit) {
  return verify_pr(fb.kernels(), fb.subband_bases(), dense_limit);
}

// ---------------------------------------------------------------------------
// Octave (dyadic) decomposition
// ---------------------------------------------------------------------------

/// subbands = [approximation, detail_L, ..., detail_1]; the channel-0 output of
/// each level is re-analyzed as a spectrum with the leading eigenvalues of the
/// original basis. noise_gain[s] is the factor by which white noise std in the
/// graph spectrum is scaled in subband s.
struct OctaveDecomposition {
  std::vector<Eigen::VectorXd> subbands;
  std::vector<double> noise_gain;
  std::vector<KernelSet> level_kernels;  // level 1 first

  std::size_t levels() const { return level_kernels.size(); }
};

inline OctaveDecomposition octave_decompose_spectrum(const Eigen::VectorXd& lambdas, std::size_t levels,
                                                     const Eigen::VectorXd& spectrum,
                                                     const KernelDesign& design) {
  const auto n = static_cast<std::size_t>(lambdas.size());
  if (levels < 1) throw DimensionError("octave: levels must be >= 1");
  if (levels >= 63 || n % (std::size_t{1} << levels) != 0) {
    throw DimensionError("octave: N must be divisible by 2^levels");
  }
  if (static_cast<std::size_t>(spectrum.size()) != n) throw DimensionError("octave: length mismatch");

  OctaveDecomposition out;
  std::vector<Eigen::VectorXd> details;
  std::vector<double> detail_gain;
  Eigen::VectorXd x = spectrum;
  double gain = 1.0;
  for (std::size_t level = 0; level < levels; ++level) {
    const auto len = x.size();
    KernelSet ks = design.make(lambdas.head(len), 2);
    const double c = std::sqrt(ks.pr_constant_sq);
    auto coeffs = analyze_spectrum(ks, x);
    gain *= c;
    details.push_back(std::move(coeffs.channels[1]));
    detail_gain.push_back(gain);
    x = std::move(coeffs.channels[0]);
    out.level_kernels.push_back(std::move(ks));
  }
  out.subbands.push_back(std::move(x));
  out.noise_gain.push_back(gain);
  for (std::size_t k = details.size(); k-- > 0;) {
    out.subbands.push_back(std::move(details[k]));
    out.noise_gain.push_back(detail_gain[k]);
  }
  return out;
}

inline Eigen::VectorXd octave_reconstruct_spectrum(const OctaveDecomposition& dec) {
  const std::size_t levels = dec.levels();
  if (dec.subbands.size() != levels + 1) throw DimensionError("octave: subband count mismatch");
  Eigen::VectorXd x = dec.subbands[0];
  for (std::size_t k = levels; k-- > 0;) {
    // level k (0-based) detail sits at subbands[levels - k]
    SubbandCoefficients c;
    c.channels = {x, dec.subbands[levels - k]};
    x = synthesize_spectrum(dec.level_kernels[k], c);
  }
  return x;
}

inline OctaveDecomposition octave_decompose(const SpectralBasis& basis, std::size_t levels,
                                            const Eigen::VectorXd& signal, const KernelDesign& design) {
  return octave_decompose_spectrum(basis.lambdas(), levels, gft(basis, signal), design);
}

inline Eigen::VectorXd octave_reconstruct(const SpectralBasis& basis, const OctaveDecomposition& dec) {
  return igft(basis, octave_reconstruct_spectrum(dec));
}

}  // namespace sgfb
