#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sgfb/error.hpp"
#include "sgfb/graph.hpp"

namespace sgfb {

enum class VariationKind { kCombinatorialLaplacian, kNormalizedLaplacian, kAdjacency };

inline std::string_view to_string(VariationKind k) {
  switch (k) {
    case VariationKind::kCombinatorialLaplacian: return "comb";
    case VariationKind::kNormalizedLaplacian: return "norm";
    case VariationKind::kAdjacency: return "adj";
  }
  return "?";
}

inline VariationKind parse_variation(std::string_view s) {
  if (s == "comb" || s == "combinatorial") return VariationKind::kCombinatorialLaplacian;
  if (s == "norm" || s == "normalized") return VariationKind::kNormalizedLaplacian;
  if (s == "adj" || s == "adjacency") return VariationKind::kAdjacency;
  throw ParseError("unknown variation kind '" + std::string(s) + "'");
}

/// Dense variation operator: D - A, I - D^{-1/2} A D^{-1/2}, or A.
inline Eigen::MatrixXd variation_operator(const Graph& g, VariationKind kind) {
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    adj(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = e.w;
    adj(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = e.w;
  }
  switch (kind) {
    case VariationKind::kAdjacency:
      return adj;
    case VariationKind::kCombinatorialLaplacian: {
      Eigen::MatrixXd lap = -adj;
      lap.diagonal() = adj.rowwise().sum();
      return lap;
    }
    case VariationKind::kNormalizedLaplacian: {
      const Eigen::VectorXd deg = adj.rowwise().sum();
      if ((deg.array() <= 0.0).any()) {
        throw DimensionError("normalized Laplacian undefined: graph has an isolated vertex");
      }
      const Eigen::VectorXd s = deg.array().rsqrt();
      Eigen::MatrixXd lap = -(s.asDiagonal() * adj * s.asDiagonal());
      lap.diagonal().array() += 1.0;
      return lap;
    }
  }
  throw std::logic_error("unreachable");
}

/// Orthonormal eigenbasis U with ascending eigenvalues. Immutable.
class SpectralBasis {
 public:
  SpectralBasis(VariationKind kind, Eigen::VectorXd lambdas, Eigen::MatrixXd u)
      : kind_(kind), lambdas_(std::move(lambdas)), u_(std::move(u)) {
    if (u_.rows() != u_.cols() || u_.rows() != lambdas_.size()) {
      throw DimensionError("basis: U must be n x n with n eigenvalues");
    }
    if (lambdas_.size() == 0) throw DimensionError("basis: empty");
  }

  /// Identity basis (spectral coordinates equal vertex coordinates).
  static SpectralBasis identity(std::size_t n, Eigen::VectorXd lambdas = {}) {
    const auto m = static_cast<Eigen::Index>(n);
    if (lambdas.size() == 0) lambdas = Eigen::VectorXd::LinSpaced(m, 0.0, static_cast<double>(n - 1));
    return SpectralBasis(VariationKind::kCombinatorialLaplacian, std::move(lambdas),
                         Eigen::MatrixXd::Identity(m, m));
  }

  std::size_t n() const { return static_cast<std::size_t>(lambdas_.size()); }
  VariationKind kind() const { return kind_; }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  const Eigen::MatrixXd& U() const { return u_; }
  double lambda_max() const { return lambdas_(lambdas_.size() - 1); }

 private:
  VariationKind kind_;
  Eigen::VectorXd lambdas_;
  Eigen::MatrixXd u_;
};

/// Flips each column so its largest-magnitude entry (lowest index on ties)
/// is non-negative.
inline void apply_sign_convention(Eigen::MatrixXd& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      const double a = std::abs(u(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (u(arg, c) < 0.0) u.col(c) = -u.col(c);
  }
}

inline SpectralBasis basis_from_operator(const Eigen::MatrixXd& op, VariationKind kind) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver did not converge");
  }
  Eigen::MatrixXd u = solver.eigenvectors();
  apply_sign_convention(u);
  return SpectralBasis(kind, solver.eigenvalues(), std::move(u));
}

/// Full dense eigendecomposition, O(N^3).
inline SpectralBasis build_basis(const Graph& g, VariationKind kind) {
  if (g.n() == 0) throw DimensionError("graph has no vertices");
  return basis_from_operator(variation_operator(g, kind), kind);
}

namespace detail {
inline void check_length(const SpectralBasis& b, Eigen::Index len, const char* what) {
  if (static_cast<std::size_t>(len) != b.n()) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(len) +
                         " does not match basis dimension " + std::to_string(b.n()));
  }
}
}  // namespace detail

inline Eigen::VectorXd gft(const SpectralBasis& b, const Eigen::VectorXd& signal) {
  detail::check_length(b, signal.size(), "gft");
  return b.U().transpose() * signal;
}

inline Eigen::VectorXd igft(const SpectralBasis& b, const Eigen::VectorXd& spectrum) {
  detail::check_length(b, spectrum.size(), "igft");
  return b.U() * spectrum;
}

/// U diag(kernel) U^T f
inline Eigen::VectorXd apply_spectral_filter(const SpectralBasis& b, const Eigen::VectorXd& kernel,
                                             const Eigen::VectorXd& signal) {
  detail::check_length(b, kernel.size(), "kernel");
  detail::check_length(b, signal.size(), "signal");
  return b.U() * kernel.cwiseProduct(b.U().transpose() * signal);
}

}  // namespace sgfb
