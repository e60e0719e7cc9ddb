#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sgfb/basis.hpp"
#include "sgfb/design.hpp"
#include "sgfb/error.hpp"
#include "sgfb/filterbank.hpp"
#include "sgfb/graph.hpp"

namespace sgfb {

/// f + n with n ~ N(0, sigma^2) i.i.d., deterministic in `seed`.
inline Eigen::VectorXd add_noise(const Eigen::VectorXd& signal, double sigma, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw DimensionError("noise sigma must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  Eigen::VectorXd out = signal;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += gauss(rng);
  return out;
}

/// BayesShrink-style threshold T = sigma^2 / sqrt(max(sigma_Y^2 - sigma^2, 0)),
/// sigma_Y^2 the raw second moment of the subband. Infinite T zeroes the band.
inline double bayes_threshold(const Eigen::VectorXd& band, double sigma) {
  if (sigma < 0.0) throw DimensionError("sigma must be non-negative");
  if (sigma == 0.0) return 0.0;
  const double var_y = band.size() == 0 ? 0.0 : band.squaredNorm() / static_cast<double>(band.size());
  const double sig2 = sigma * sigma;
  if (var_y <= sig2) return std::numeric_limits<double>::infinity();
  return sig2 / std::sqrt(var_y - sig2);
}

inline Eigen::VectorXd soft_threshold(const Eigen::VectorXd& band, double t) {
  if (std::isinf(t)) return Eigen::VectorXd::Zero(band.size());
  return band.unaryExpr([t](double c) { return std::copysign(std::max(std::abs(c) - t, 0.0), c); });
}

inline SubbandCoefficients subband_threshold(const SubbandCoefficients& coeffs, double sigma) {
  SubbandCoefficients out;
  out.channels.reserve(coeffs.channels.size());
  for (const auto& band : coeffs.channels) out.channels.push_back(soft_threshold(band, bayes_threshold(band, sigma)));
  return out;
}

inline constexpr double kSnrCapDb = 300.0;

/// 10 log10(|ref|^2 / |ref - est|^2), capped at 300 dB.
inline double snr_db(const Eigen::VectorXd& reference, const Eigen::VectorXd& estimate) {
  if (reference.size() != estimate.size()) throw DimensionError("snr_db: length mismatch");
  const double num = reference.squaredNorm();
  if (num == 0.0) throw DimensionError("snr_db: zero reference");
  const double den = (reference - estimate).squaredNorm();
  if (den == 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(num / den));
}

enum class SignalKind { kLowpassRandom, kPiecewise };

inline SignalKind parse_signal_kind(std::string_view s) {
  if (s == "lowpass") return SignalKind::kLowpassRandom;
  if (s == "piecewise") return SignalKind::kPiecewise;
  throw ParseError("unknown signal kind '" + std::string(s) + "'");
}

/// Unit-norm test signals.
///   lowpass: spectrum exp(-tau lambda_i) * (random sign), tau = 5 / lambda_max
///   piecewise: graph Voronoi cells around 4 random centers, each set to +-1
inline Eigen::VectorXd gen_test_signal(const SpectralBasis& basis, SignalKind kind, std::uint64_t seed,
                                       const Graph* graph = nullptr) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<Eigen::Index>(basis.n());
  Eigen::VectorXd f(n);
  if (kind == SignalKind::kLowpassRandom) {
    const double lmax = basis.lambda_max();
    const double tau = lmax > 0.0 ? 5.0 / lmax : 0.0;
    std::bernoulli_distribution coin(0.5);
    Eigen::VectorXd spec(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      spec(i) = (coin(rng) ? 1.0 : -1.0) * std::exp(-tau * basis.lambdas()(i));
    }
    f = igft(basis, spec);
  } else {
    if (graph == nullptr || graph->n() != basis.n()) {
      throw DimensionError("piecewise signal needs the graph");
    }
    constexpr std::size_t kClusters = 4;
    const std::size_t k = std::min<std::size_t>(kClusters, graph->n());
    std::vector<std::size_t> order(graph->n());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> level(k);
    std::bernoulli_distribution coin(0.5);
    for (auto& l : level) l = coin(rng) ? 1.0 : -1.0;
    // Guarantee two distinct levels so the signal is not constant.
    if (k > 1 && std::all_of(level.begin(), level.end(), [&](double l) { return l == level[0]; })) {
      level[k - 1] = -level[0];
    }
    const auto adj = graph->neighbors();
    std::vector<std::size_t> label(graph->n(), k);
    std::queue<std::size_t> q;
    for (std::size_t c = 0; c < k; ++c) {
      label[order[c]] = c;
      q.push(order[c]);
    }
    while (!q.empty()) {
      const auto x = q.front();
      q.pop();
      for (auto y : adj[x]) {
        if (label[y] == k) {
          label[y] = label[x];
          q.push(y);
        }
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto l = label[static_cast<std::size_t>(i)];
      f(i) = l == k ? 0.0 : level[l];
    }
  }
  const double norm = f.norm();
  if (norm == 0.0) throw NumericError("test signal vanished");
  return f / norm;
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

enum class DenoiseMethod { kGftBaseline, kGraphssIdeal, kGraphssDct, kGraphssLot, kGraphssOctave2 };

inline std::string_view to_string(DenoiseMethod m) {
  switch (m) {
    case DenoiseMethod::kGftBaseline: return "gft-baseline";
    case DenoiseMethod::kGraphssIdeal: return "graphss-ideal";
    case DenoiseMethod::kGraphssDct: return "graphss-dct";
    case DenoiseMethod::kGraphssLot: return "graphss-lot";
    case DenoiseMethod::kGraphssOctave2: return "graphss-octave2";
  }
  return "?";
}

inline DenoiseMethod parse_denoise_method(std::string_view s) {
  for (auto m : {DenoiseMethod::kGftBaseline, DenoiseMethod::kGraphssIdeal, DenoiseMethod::kGraphssDct,
                 DenoiseMethod::kGraphssLot, DenoiseMethod::kGraphssOctave2}) {
    if (to_string(m) == s) return m;
  }
  throw ParseError("unknown denoising method '" + std::string(s) + "'");
}

struct DenoiseConfig {
  // sigma values are multiples of the signal RMS (1/sqrt(N) for unit-norm signals)
  std::vector<double> sigma_list{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  std::size_t trials = 20;
  std::uint64_t base_seed = 1;
  std::size_t channels = 8;
  AlphaBase alpha_base = AlphaBase::kTiledEigenvalue;
  std::size_t octave_levels = 7;  // clamped to what N allows
  std::vector<DenoiseMethod> methods{DenoiseMethod::kGftBaseline, DenoiseMethod::kGraphssIdeal,
                                     DenoiseMethod::kGraphssDct, DenoiseMethod::kGraphssLot,
                                     DenoiseMethod::kGraphssOctave2};
  // Feeds sigma = 0 to the thresholding step (sanity mode).
  bool disable_threshold = false;

  void validate() const {
    if (sigma_list.empty()) throw DimensionError("sigma list is empty");
    for (double s : sigma_list) {
      if (!(s > 0.0)) throw DimensionError("sigma must be positive");
    }
    if (trials < 1) throw DimensionError("trials must be >= 1");
    if (channels < 2) throw DimensionError("channel count must be >= 2");
  }
};

struct DenoiseRow {
  std::string name;
  std::vector<double> mean_snr;                  // one per sigma
  std::vector<std::vector<double>> trial_snr;    // [sigma][trial]
};

struct DenoiseResult {
  std::vector<double> sigma_list;
  DenoiseRow noisy;
  std::vector<DenoiseRow> methods;

  const DenoiseRow& row(std::string_view name) const {
    if (name == noisy.name) return noisy;
    for (const auto& r : methods) {
      if (r.name == name) return r;
    }
    throw DimensionError("no result row '" + std::string(name) + "'");
  }
};

/// Prepared denoiser for one method on a fixed basis.
class Denoiser {
 public:
  Denoiser(std::shared_ptr<const SpectralBasis> basis, DenoiseMethod method, const DenoiseConfig& cfg)
      : basis_(std::move(basis)), method_(method) {
    const std::size_t n = basis_->n();
    switch (method_) {
      case DenoiseMethod::kGftBaseline:
        return;
      case DenoiseMethod::kGraphssIdeal:
        kernels_ = ideal_kernels(n, cfg.channels);
        break;
      case DenoiseMethod::kGraphssDct:
        kernels_ = KernelDesign{FilterKind::kDct, cfg.alpha_base}.make(basis_->lambdas(), cfg.channels);
        break;
      case DenoiseMethod::kGraphssLot:
        kernels_ = KernelDesign{FilterKind::kLot, cfg.alpha_base}.make(basis_->lambdas(), cfg.channels);
        break;
      case DenoiseMethod::kGraphssOctave2: {
        levels_ = 0;
        while (levels_ < cfg.octave_levels && n % (std::size_t{1} << (levels_ + 1)) == 0) ++levels_;
        if (levels_ == 0) throw DimensionError("octave denoiser: N is odd");
        octave_design_ = KernelDesign{FilterKind::kDct, cfg.alpha_base};
        // PR check on every level's kernels.
        Eigen::VectorXd lam = basis_->lambdas();
        for (std::size_t l = 0; l < levels_; ++l) {
          const auto len = static_cast<Eigen::Index>(n >> l);
          check_pr(octave_design_.make(lam.head(len), 2));
        }
        return;
      }
    }
    check_pr(kernels_);
  }

  DenoiseMethod method() const { return method_; }

  /// sigma is the noise std in the vertex (equivalently spectral) domain.
  Eigen::VectorXd denoise(const Eigen::VectorXd& noisy, double sigma) const {
    const Eigen::VectorXd spec = gft(*basis_, noisy);
    switch (method_) {
      case DenoiseMethod::kGftBaseline: {
        return igft(*basis_, soft_threshold(spec, bayes_threshold(spec, sigma)));
      }
      case DenoiseMethod::kGraphssOctave2: {
        auto dec = octave_decompose_spectrum(basis_->lambdas(), levels_, spec, octave_design_);
        for (std::size_t s = 0; s < dec.subbands.size(); ++s) {
          const double sb_sigma = sigma * dec.noise_gain[s];
          dec.subbands[s] = soft_threshold(dec.subbands[s], bayes_threshold(dec.subbands[s], sb_sigma));
        }
        return igft(*basis_, octave_reconstruct_spectrum(dec));
      }
      default: {
        const auto coeffs = analyze_spectrum(kernels_, spec);
        const double c = std::sqrt(kernels_.pr_constant_sq);
        return igft(*basis_, synthesize_spectrum(kernels_, subband_threshold(coeffs, c * sigma)));
      }
    }
  }

 private:
  static void check_pr(const KernelSet& ks) {
    const auto rep = verify_pr(ks);
    if (!rep.holds()) {
      throw ValidationError("kernel set fails perfect reconstruction (max deviation " +
                            std::to_string(std::max(rep.max_offdiag, rep.max_diag_dev)) + ")");
    }
  }

  std::shared_ptr<const SpectralBasis> basis_;
  DenoiseMethod method_;
  KernelSet kernels_;
  KernelDesign octave_design_;
  std::size_t levels_ = 0;
};

/// Runs every (method, sigma, trial); trial t uses noise seed base_seed + t.
/// The clean signal is fixed by the caller.
inline DenoiseResult run_experiment(std::shared_ptr<const SpectralBasis> basis, const Eigen::VectorXd& signal,
                                    const DenoiseConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(signal.size()) != basis->n()) throw DimensionError("signal length mismatch");
  const double rms = signal.norm() / std::sqrt(static_cast<double>(signal.size()));

  std::vector<Denoiser> denoisers;
  denoisers.reserve(cfg.methods.size());
  for (auto m : cfg.methods) denoisers.emplace_back(basis, m, cfg);

  DenoiseResult res;
  res.sigma_list = cfg.sigma_list;
  res.noisy.name = "noisy";
  for (const auto& d : denoisers) res.methods.push_back({std::string(to_string(d.method())), {}, {}});

  for (double rel_sigma : cfg.sigma_list) {
    const double sigma = rel_sigma * rms;
    const double thr_sigma = cfg.disable_threshold ? 0.0 : sigma;
    std::vector<double> noisy_snr(cfg.trials);
    std::vector<std::vector<double>> method_snr(denoisers.size(), std::vector<double>(cfg.trials));
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const Eigen::VectorXd noisy = add_noise(signal, sigma, cfg.base_seed + t);
      noisy_snr[t] = snr_db(signal, noisy);
      for (std::size_t k = 0; k < denoisers.size(); ++k) {
        method_snr[k][t] = snr_db(signal, denoisers[k].denoise(noisy, thr_sigma));
      }
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    res.noisy.mean_snr.push_back(mean(noisy_snr));
    res.noisy.trial_snr.push_back(noisy_snr);
    for (std::size_t k = 0; k < denoisers.size(); ++k) {
      res.methods[k].mean_snr.push_back(mean(method_snr[k]));
      res.methods[k].trial_snr.push_back(std::move(method_snr[k]));
    }
  }
  return res;
}

}  // namespace sgfb
