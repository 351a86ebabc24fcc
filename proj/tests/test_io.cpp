#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "wienerdyn/config.hpp"
#include "wienerdyn/gamma.hpp"
#include "wienerdyn/io.hpp"
#include "wienerdyn/manifest.hpp"

using namespace wienerdyn;

TEST(FormatDouble, RoundTripsExactly) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(io::format_double(v)), v);
}

TEST(KernelCsv, RoundTrip) {
  Grid g(5);
  RandomStream rng(1, StreamKind::kernels, 0);
  Eigen::MatrixXd k(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) k(i, j) = rng.normal();
  std::stringstream ss;
  io::write_kernel_csv(ss, Kernel2(g, k));
  const Kernel2 back = io::read_kernel_csv(ss);
  EXPECT_EQ(back.grid.size(), 5);
  EXPECT_EQ(back.k, k);
}

TEST(KernelCsv, MalformedInputReportsTheLine) {
  std::stringstream ss("# m=3\n1,2,3\n4,x,6\n7,8,9\n");
  try {
    io::read_kernel_csv(ss);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line, 3);
  }
  std::stringstream ragged("# m=2\n1,2\n3\n");
  EXPECT_THROW(io::read_kernel_csv(ragged), parse_error);
  std::stringstream no_header("1,2\n3,4\n");
  EXPECT_THROW(io::read_kernel_csv(no_header), parse_error);
  std::stringstream wrong_m("# m=3\n1,2\n3,4\n");
  EXPECT_THROW(io::read_kernel_csv(wrong_m), parse_error);
}

TEST(HVectorCsv, RoundTrip) {
  Grid g(7);
  const HVector h = HVector::from_function(g, [](double t) { return 1.0 / (1.0 + t); });
  std::stringstream ss;
  io::write_hvector_csv(ss, h);
  EXPECT_EQ(io::read_hvector_csv(ss).density, h.density);
}

TEST(PathCsv, RoundTrip) {
  Grid g(6);
  RandomStream rng(2, StreamKind::paths, 0);
  const Path p = sample_wiener(g, rng);
  std::stringstream ss;
  io::write_path_csv(ss, p);
  const Path back = io::read_path_csv(ss);
  EXPECT_LT((back.increments - p.increments).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GammaCsv, RoundTrip) {
  Grid g(4);
  const GammaProcess G = gamma_sweep(g, 2);
  std::stringstream ss;
  io::write_gamma_csv(ss, G);
  const auto blocks = io::read_gamma_csv(ss);
  ASSERT_EQ(blocks.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(blocks[i], G.samples[i]);
}

TEST(Json, KernelAndHVectorRoundTrip) {
  Grid g(3);
  const Kernel2 K(g, (Eigen::MatrixXd(3, 3) << 1, 2, 3, 4, 5, 6, 7, 8, 9).finished());
  EXPECT_EQ(io::kernel_from_json(io::to_json(K)).k, K.k);
  const HVector h(g, Eigen::Vector3d(0.5, -1, 2));
  EXPECT_EQ(io::hvector_from_json(io::to_json(h)).density, h.density);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Config, ReadsTypedValues) {
  std::stringstream ss("[run]\nseed = 17\nm = 32\n");
  const Config c = Config::parse(ss);
  EXPECT_EQ(c.get<std::uint64_t>("run.seed").value(), 17u);
  EXPECT_EQ(c.get_or<int>("run.m", 0), 32);
  EXPECT_EQ(c.get_or<int>("run.paths", 5), 5);
}

TEST(Config, SyntaxErrorCarriesTheLine) {
  std::stringstream ss("[run]\nseed = 1\nbroken line\n");
  try {
    Config::parse(ss);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line, 3);
  }
}

TEST(Config, BadValueNamesTheField) {
  std::stringstream ss("[run]\nm = many\n");
  const Config c = Config::parse(ss);
  try {
    c.get<int>("run.m");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.field, "run.m");
  }
}
