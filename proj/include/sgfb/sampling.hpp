#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>

#include "sgfb/basis.hpp"
#include "sgfb/error.hpp"

namespace sgfb {

enum class Parity { kEven, kOdd };

inline Parity channel_parity(std::size_t m) { return (m % 2 == 0) ? Parity::kEven : Parity::kOdd; }

/// Spectral folding operator [I J I J ...] (even parity) or [I -J I -J ...]
/// (odd parity) acting on length-n spectra with m_channels blocks.
struct FoldSpec {
  std::size_t n = 0;
  std::size_t m_channels = 2;
  Parity parity = Parity::kEven;

  std::size_t block() const { return n / m_channels; }

  void validate() const {
    if (m_channels < 2 || m_channels % 2 != 0) {
      throw DimensionError("channel count must be even and >= 2, got " + std::to_string(m_channels));
    }
    if (n == 0 || n % m_channels != 0) {
      throw DimensionError("N=" + std::to_string(n) + " is not divisible by M=" +
                           std::to_string(m_channels));
    }
  }
};

/// out[r] = sum_q s_q x[idx(q, r)]; odd blocks are read reversed and carry the
/// parity sign.
inline Eigen::VectorXd fold_down(const FoldSpec& spec, const Eigen::VectorXd& x) {
  spec.validate();
  if (static_cast<std::size_t>(x.size()) != spec.n) {
    throw DimensionError("fold_down: expected length " + std::to_string(spec.n));
  }
  const auto b = static_cast<Eigen::Index>(spec.block());
  const double odd_sign = spec.parity == Parity::kEven ? 1.0 : -1.0;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(b);
  for (std::size_t q = 0; q < spec.m_channels; ++q) {
    const auto base = static_cast<Eigen::Index>(q) * b;
    if (q % 2 == 0) {
      out += x.segment(base, b);
    } else {
      out += odd_sign * x.segment(base, b).reverse();
    }
  }
  return out;
}

/// Transpose of fold_down.
inline Eigen::VectorXd unfold_up(const FoldSpec& spec, const Eigen::VectorXd& y) {
  spec.validate();
  const auto b = static_cast<Eigen::Index>(spec.block());
  if (y.size() != b) {
    throw DimensionError("unfold_up: expected length " + std::to_string(spec.block()));
  }
  const double odd_sign = spec.parity == Parity::kEven ? 1.0 : -1.0;
  Eigen::VectorXd out(static_cast<Eigen::Index>(spec.n));
  for (std::size_t q = 0; q < spec.m_channels; ++q) {
    const auto base = static_cast<Eigen::Index>(q) * b;
    if (q % 2 == 0) {
      out.segment(base, b) = y;
    } else {
      out.segment(base, b) = odd_sign * y.reverse();
    }
  }
  return out;
}

/// f_d = U1 S_d U0^T f
inline Eigen::VectorXd downsample_spectral(const SpectralBasis& basis0, const SpectralBasis& basis1,
                                           const Eigen::VectorXd& signal) {
  if (basis1.n() == 0 || basis0.n() % basis1.n() != 0) {
    throw DimensionError("downsample_spectral: basis1 dimension must divide basis0 dimension");
  }
  const FoldSpec spec{basis0.n(), basis0.n() / basis1.n(), Parity::kEven};
  return igft(basis1, fold_down(spec, gft(basis0, signal)));
}

/// f_u = U0 S_u U1^T f_d
inline Eigen::VectorXd upsample_spectral(const SpectralBasis& basis1, const SpectralBasis& basis0,
                                         const Eigen::VectorXd& reduced) {
  if (basis1.n() == 0 || basis0.n() % basis1.n() != 0) {
    throw DimensionError("upsample_spectral: basis1 dimension must divide basis0 dimension");
  }
  const FoldSpec spec{basis0.n(), basis0.n() / basis1.n(), Parity::kEven};
  return igft(basis0, unfold_up(spec, gft(basis1, reduced)));
}

}  // namespace sgfb
