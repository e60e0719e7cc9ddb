#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sgfb/io.hpp"

namespace sgfb::io {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("sgfb_io_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

TEST(SignalCsv, LosslessRoundTrip) {
  std::mt19937_64 rng(1);
  const Eigen::VectorXd f = oracle::random_vector(37, rng) * 1e-3;
  EXPECT_TRUE(parse_signal(format_signal(f)) == f);
}

TEST(SignalCsv, HeaderOptionalAndChecked) {
  EXPECT_EQ(parse_signal("1\n2.5\r\n-3\n"), Eigen::Vector3d(1, 2.5, -3));
  EXPECT_THROW(parse_signal("# n=4\n1\n2\n"), ParseError);
  EXPECT_THROW(parse_signal("1\nabc\n"), ParseError);
}

TEST(CoefficientCsv, RoundTripAndValidation) {
  std::mt19937_64 rng(2);
  SubbandCoefficients c;
  for (int m = 0; m < 4; ++m) c.channels.push_back(oracle::random_vector(8, rng));
  const auto back = parse_coefficients(format_coefficients(c));
  ASSERT_EQ(back.channels.size(), 4u);
  for (int m = 0; m < 4; ++m) EXPECT_TRUE(back.channels[m] == c.channels[m]);
  EXPECT_THROW(parse_coefficients("channel,index,value\n0,0,1\n0,0,2\n"), ParseError);
  EXPECT_THROW(parse_coefficients("0,1,1\n"), ParseError);
  EXPECT_THROW(parse_coefficients("1,0,1\n"), ParseError);
  EXPECT_THROW(parse_coefficients("0,0\n"), ParseError);
}

TEST(KernelCsv, RoundTripRemeasuresConstant) {
  const auto b = build_basis(gen_path_graph(16), VariationKind::kCombinatorialLaplacian);
  const auto ks = KernelDesign{FilterKind::kLot, AlphaBase::kTiledEigenvalue}.make(b.lambdas(), 4);
  const auto back = parse_kernels(format_kernels(ks));
  ASSERT_EQ(back.channels(), 4u);
  for (std::size_t m = 0; m < 4; ++m) EXPECT_TRUE(back.analysis[m] == ks.analysis[m]);
  EXPECT_NEAR(back.pr_constant_sq, ks.pr_constant_sq, 1e-15);
  EXPECT_THROW(parse_kernels("1,0\n0,1,0\n"), DimensionError);
  EXPECT_THROW(parse_kernels(""), ParseError);
}

TEST(FilterPlot, Layout) {
  const Eigen::VectorXd lam = Eigen::VectorXd::LinSpaced(4, 0, 3);
  const auto text = format_filter_plot(lam, ideal_kernels(4, 2));
  EXPECT_EQ(text, "lambda,H0,H1\n0,1,0\n1,1,0\n2,0,1\n3,0,1\n");
}

TEST(DenoiseTable, CsvLayout) {
  DenoiseResult r;
  r.sigma_list = {0.5, 0.25};
  r.noisy = {"noisy", {6.0, 12.0}, {}};
  r.methods.push_back({"graphss-ideal", {9.5, 14.25}, {}});
  EXPECT_EQ(format_denoise_csv(r), "method,sigma=0.5,sigma=0.25\nnoisy,6,12\ngraphss-ideal,9.5,14.25\n");
  EXPECT_NE(format_denoise_table(r).find("graphss-ideal"), std::string::npos);
}

TEST(EigenCache, EncodeDecodeBitwise) {
  const auto g = gen_random_sensor_graph(24, 4, 3);
  const auto b = build_basis(g, VariationKind::kNormalizedLaplacian);
  const auto h = operator_hash(variation_operator(g, b.kind()), b.kind());
  const auto blob = encode_cache(b, h);
  EXPECT_EQ(blob.substr(0, 5), "SGFB1");
  EXPECT_EQ(blob.size(), 22u + (24u + 24u * 24u) * 8u);
  const auto e = decode_cache(blob);
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->hash, h);
  EXPECT_EQ(e->kind, VariationKind::kNormalizedLaplacian);
  EXPECT_TRUE(e->basis.lambdas() == b.lambdas());
  EXPECT_TRUE(e->basis.U() == b.U());
  EXPECT_FALSE(decode_cache(blob.substr(0, blob.size() - 1)).has_value());
  EXPECT_FALSE(decode_cache("XGFB1" + blob.substr(5)).has_value());
}

TEST(EigenCache, HashDependsOnContentAndKind) {
  const auto g1 = gen_path_graph(8);
  const Graph g2(8, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {5, 6, 1.0}, {6, 7, 2.0}});
  const auto k = VariationKind::kCombinatorialLaplacian;
  EXPECT_EQ(operator_hash(variation_operator(g1, k), k), operator_hash(variation_operator(gen_path_graph(8), k), k));
  EXPECT_NE(operator_hash(variation_operator(g1, k), k), operator_hash(variation_operator(g2, k), k));
  EXPECT_NE(operator_hash(variation_operator(g1, k), k),
            operator_hash(variation_operator(g1, VariationKind::kAdjacency), VariationKind::kAdjacency));
}

TEST(EigenCache, SaveThenLoadAndCorruptionFallback) {
  const auto dir = fresh_dir("cache");
  const auto g = gen_random_sensor_graph(32, 5, 6);
  const auto kind = VariationKind::kCombinatorialLaplacian;
  std::ostringstream warn;
  const auto first = cached_basis(g, kind, dir, warn);
  EXPECT_TRUE(warn.str().empty());
  std::vector<fs::path> files(fs::directory_iterator(dir), fs::directory_iterator{});
  ASSERT_EQ(files.size(), 1u);

  const auto second = cached_basis(g, kind, dir, warn);
  EXPECT_TRUE(warn.str().empty());
  EXPECT_TRUE(second.U() == first.U());
  EXPECT_TRUE(second.lambdas() == first.lambdas());

  // Flip a byte of the stored hash: the loader must notice and recompute.
  auto blob = read_text(files[0]);
  blob[14] = static_cast<char>(blob[14] ^ 0x5a);
  write_atomic(files[0], blob);
  const auto third = cached_basis(g, kind, dir, warn);
  EXPECT_NE(warn.str().find("recomputing"), std::string::npos);
  EXPECT_TRUE(third.U() == first.U());
  // The recomputed basis replaced the corrupt file.
  const auto fixed = decode_cache(read_text(files[0]));
  ASSERT_TRUE(fixed.has_value());
  EXPECT_EQ(fixed->hash, operator_hash(variation_operator(g, kind), kind));
  fs::remove_all(dir);
}

TEST(EigenCache, NoDirectoryMeansNoCaching) {
  const auto b = cached_basis(gen_path_graph(8), VariationKind::kCombinatorialLaplacian, std::nullopt);
  EXPECT_EQ(b.n(), 8u);
}

TEST(WriteAtomic, MissingDirectoryIsIoError) {
  EXPECT_THROW(write_atomic("/nonexistent_dir_sgfb/x.csv", "a"), IoError);
  EXPECT_THROW(read_text("/nonexistent_dir_sgfb/x.csv"), IoError);
}

}  // namespace
}  // namespace sgfb::io
