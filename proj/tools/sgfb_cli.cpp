// sgfb: command-line front end for the spectral graph filter bank library.
//
// Exit codes: 0 ok, 1 usage, 2 I/O, 3 validation (PR failure), 4 numeric.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sgfb/sgfb.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kValidation = 3, kNumeric = 4 };

struct Options {
  std::string graph;
  std::string variation = "comb";
  std::size_t channels = 2;
  std::string filters = "ideal";
  std::string alpha_base = "tiled-eig";
  std::size_t levels = 0;
  std::vector<double> sigma;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::string out;
  std::string cache;
  std::string kernels;
  std::string signal;
  std::string coeffs;
  // gen-graph
  std::string type = "sensor";
  std::size_t n = 0;
  std::size_t k = 6;
  // denoise
  std::string signal_kind = "lowpass";
  std::vector<std::string> methods;
};

std::optional<fs::path> cache_dir(const Options& o) {
  if (const char* env = std::getenv("SGFB_CACHE_DIR"); env != nullptr && *env != '\0') return fs::path(env);
  if (!o.cache.empty()) return fs::path(o.cache);
  return std::nullopt;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
  } else {
    sgfb::io::write_atomic(o.out, text);
  }
}

struct Loaded {
  sgfb::Graph graph;
  std::shared_ptr<const sgfb::SpectralBasis> basis;
};

Loaded load(const Options& o) {
  if (o.graph.empty()) throw CLI::ValidationError("--graph", "is required for this command");
  Loaded l;
  l.graph = sgfb::load_graph(sgfb::io::read_text(o.graph));
  l.basis = std::make_shared<const sgfb::SpectralBasis>(
      sgfb::io::cached_basis(l.graph, sgfb::parse_variation(o.variation), cache_dir(o)));
  return l;
}

sgfb::KernelSet kernels_for(const Options& o, const sgfb::SpectralBasis& b) {
  if (!o.kernels.empty()) {
    auto ks = sgfb::io::parse_kernels(sgfb::io::read_text(o.kernels));
    if (ks.n() != b.n()) throw sgfb::DimensionError("kernel file length does not match the graph");
    return ks;
  }
  const sgfb::KernelDesign design{sgfb::parse_filter_kind(o.filters), sgfb::parse_alpha_base(o.alpha_base)};
  return design.make(b.lambdas(), o.channels);
}

sgfb::KernelDesign design_for(const Options& o) {
  return {sgfb::parse_filter_kind(o.filters), sgfb::parse_alpha_base(o.alpha_base)};
}

int cmd_gen_graph(const Options& o) {
  if (o.n < 2) throw CLI::ValidationError("--n", "must be >= 2");
  sgfb::Graph g = o.type == "path" ? sgfb::gen_path_graph(o.n)
                : o.type == "sensor" ? sgfb::gen_random_sensor_graph(o.n, o.k, o.seed)
                : throw CLI::ValidationError("--type", "must be path or sensor");
  std::string text = "n " + std::to_string(g.n()) + "\n";
  for (const auto& e : g.edges()) {
    text += std::to_string(e.u) + " " + std::to_string(e.v) + " " + sgfb::io::format_double(e.w) + "\n";
  }
  emit(o, text);
  return kOk;
}

int cmd_eigs(const Options& o) {
  const auto l = load(o);
  std::string text = "index,lambda\n";
  for (Eigen::Index i = 0; i < l.basis->lambdas().size(); ++i) {
    text += std::to_string(i) + "," + sgfb::io::format_double(l.basis->lambdas()(i)) + "\n";
  }
  emit(o, text);
  return kOk;
}

int cmd_design_filters(const Options& o) {
  const auto l = load(o);
  emit(o, sgfb::io::format_kernels(kernels_for(o, *l.basis)));
  return kOk;
}

int cmd_plot_filters(const Options& o) {
  const auto l = load(o);
  emit(o, sgfb::io::format_filter_plot(l.basis->lambdas(), kernels_for(o, *l.basis)));
  return kOk;
}

int cmd_verify_pr(const Options& o) {
  const auto l = load(o);
  const auto ks = kernels_for(o, *l.basis);
  const auto rep = sgfb::verify_pr(ks);
  std::ostringstream os;
  os.precision(6);
  os << "N=" << ks.n() << " M=" << ks.channels() << "\n"
     << "c^2            = " << sgfb::io::format_double(rep.c_sq) << "\n"
     << "max_diag_dev   = " << rep.max_diag_dev << "\n"
     << "max_offdiag    = " << rep.max_offdiag << "\n"
     << "max_deviation  = " << std::max(rep.max_diag_dev, rep.max_offdiag) << "\n"
     << "scalar_same    = " << rep.max_same_parity_residual << "\n"
     << "scalar_opposite= " << rep.max_opposite_parity_residual << "\n"
     << "tolerance      = " << rep.tolerance() << "\n"
     << "perfect_reconstruction = " << (rep.holds() ? "yes" : "NO") << "\n";
  std::cout << os.str();
  if (!o.out.empty()) sgfb::io::write_atomic(o.out, os.str());
  return rep.holds() ? kOk : kValidation;
}

int cmd_analyze(const Options& o) {
  const auto l = load(o);
  if (o.signal.empty()) throw CLI::ValidationError("--signal", "is required");
  const Eigen::VectorXd f = sgfb::io::parse_signal(sgfb::io::read_text(o.signal));
  if (o.levels > 0) {
    const auto dec = sgfb::octave_decompose(*l.basis, o.levels, f, design_for(o));
    sgfb::SubbandCoefficients c;
    c.channels = dec.subbands;
    emit(o, sgfb::io::format_coefficients(c));
    return kOk;
  }
  const sgfb::FilterBank fb(l.basis, kernels_for(o, *l.basis));
  emit(o, sgfb::io::format_coefficients(fb.analyze(f)));
  return kOk;
}

int cmd_synthesize(const Options& o) {
  const auto l = load(o);
  if (o.coeffs.empty()) throw CLI::ValidationError("--coeffs", "is required");
  const auto c = sgfb::io::parse_coefficients(sgfb::io::read_text(o.coeffs));
  if (o.levels > 0) {
    // Kernels depend only on the eigenvalues, so re-deriving them reproduces the analysis side.
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(l.basis->n()));
    auto dec = sgfb::octave_decompose(*l.basis, o.levels, zero, design_for(o));
    if (c.channels.size() != dec.subbands.size()) throw sgfb::DimensionError("coefficient file has wrong subband count");
    for (std::size_t s = 0; s < c.channels.size(); ++s) {
      if (c.channels[s].size() != dec.subbands[s].size()) throw sgfb::DimensionError("subband size mismatch");
      dec.subbands[s] = c.channels[s];
    }
    emit(o, sgfb::io::format_signal(sgfb::octave_reconstruct(*l.basis, dec)));
    return kOk;
  }
  const sgfb::FilterBank fb(l.basis, kernels_for(o, *l.basis));
  emit(o, sgfb::io::format_signal(fb.synthesize(c)));
  return kOk;
}

int cmd_denoise(const Options& o) {
  const auto l = load(o);
  sgfb::DenoiseConfig cfg;
  if (!o.sigma.empty()) cfg.sigma_list = o.sigma;
  cfg.trials = o.trials;
  cfg.base_seed = o.seed;
  cfg.channels = o.channels;
  cfg.alpha_base = sgfb::parse_alpha_base(o.alpha_base);
  if (o.levels > 0) cfg.octave_levels = o.levels;
  if (!o.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : o.methods) cfg.methods.push_back(sgfb::parse_denoise_method(m));
  } else if (cfg.channels < 4) {
    std::erase(cfg.methods, sgfb::DenoiseMethod::kGraphssLot);
  }
  const Eigen::VectorXd f =
      o.signal.empty() ? sgfb::gen_test_signal(*l.basis, sgfb::parse_signal_kind(o.signal_kind), o.seed, &l.graph)
                       : sgfb::io::parse_signal(sgfb::io::read_text(o.signal));
  const auto res = sgfb::run_experiment(l.basis, f, cfg);
  std::cout << sgfb::io::format_denoise_table(res);
  if (!o.out.empty()) sgfb::io::write_atomic(o.out, sgfb::io::format_denoise_csv(res));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critically sampled spectral graph filter banks"};
  app.require_subcommand(1);
  Options o;

  auto graph_opts = [&](CLI::App* sc) {
    sc->add_option("--graph", o.graph, "Edge-list graph file");
    sc->add_option("--variation", o.variation, "Variation operator")->check(CLI::IsMember({"comb", "norm", "adj"}));
    sc->add_option("--cache", o.cache, "Eigendecomposition cache directory (SGFB_CACHE_DIR overrides)");
    sc->add_option("--out", o.out, "Output file (default stdout)");
  };
  auto bank_opts = [&](CLI::App* sc) {
    graph_opts(sc);
    sc->add_option("--channels", o.channels, "Channel count M (even)");
    sc->add_option("--filters", o.filters, "Kernel family")->check(CLI::IsMember({"ideal", "dct", "lot"}));
    sc->add_option("--alpha-base", o.alpha_base, "Frequency warp base")
        ->check(CLI::IsMember({"paper", "tiled-eig", "tiled-rank"}));
    sc->add_option("--kernels", o.kernels, "Kernel CSV (overrides --filters)");
  };

  auto* gen = app.add_subcommand("gen-graph", "Generate a path or random sensor graph");
  gen->add_option("--type", o.type, "path | sensor")->check(CLI::IsMember({"path", "sensor"}));
  gen->add_option("--n", o.n, "Vertex count")->required();
  gen->add_option("--k", o.k, "Nearest neighbours (sensor)");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--out", o.out, "Output file (default stdout)");

  auto* eigs = app.add_subcommand("eigs", "Print the graph spectrum");
  graph_opts(eigs);
  auto* design = app.add_subcommand("design-filters", "Write kernel responses (one row per channel)");
  bank_opts(design);
  auto* verify = app.add_subcommand("verify-pr", "Check sum_m T_m = c^2 I");
  bank_opts(verify);
  auto* analyze = app.add_subcommand("analyze", "Subband decomposition of a signal");
  bank_opts(analyze);
  analyze->add_option("--signal", o.signal, "Signal file");
  analyze->add_option("--levels", o.levels, "Octave levels (2-channel); 0 = single stage");
  auto* synth = app.add_subcommand("synthesize", "Reconstruct a signal from subband coefficients");
  bank_opts(synth);
  synth->add_option("--coeffs", o.coeffs, "Coefficient file");
  synth->add_option("--levels", o.levels, "Octave levels used at analysis");
  auto* denoise = app.add_subcommand("denoise", "Denoising experiment (SNR table)");
  graph_opts(denoise);
  denoise->add_option("--channels", o.channels, "Channel count for the M-channel methods")->default_val(8);
  denoise->add_option("--alpha-base", o.alpha_base, "Frequency warp base")
      ->check(CLI::IsMember({"paper", "tiled-eig", "tiled-rank"}));
  denoise->add_option("--sigma", o.sigma, "Noise levels relative to signal RMS")->delimiter(',');
  denoise->add_option("--trials", o.trials, "Trials per sigma");
  denoise->add_option("--seed", o.seed, "Base seed (trial t uses seed + t)");
  denoise->add_option("--levels", o.levels, "Octave levels for graphss-octave2");
  denoise->add_option("--signal", o.signal, "Clean signal file (default: generated)");
  denoise->add_option("--signal-kind", o.signal_kind, "lowpass | piecewise")
      ->check(CLI::IsMember({"lowpass", "piecewise"}));
  denoise->add_option("--methods", o.methods, "Subset of methods")->delimiter(',');
  auto* plot = app.add_subcommand("plot-filters", "Per-channel responses (lambda, H_m(lambda))");
  bank_opts(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_graph(o);
    if (eigs->parsed()) return cmd_eigs(o);
    if (design->parsed()) return cmd_design_filters(o);
    if (verify->parsed()) return cmd_verify_pr(o);
    if (analyze->parsed()) return cmd_analyze(o);
    if (synth->parsed()) return cmd_synthesize(o);
    if (denoise->parsed()) return cmd_denoise(o);
    if (plot->parsed()) return cmd_plot_filters(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sgfb::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const sgfb::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kIo;
  } catch (const sgfb::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const sgfb::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const sgfb::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
