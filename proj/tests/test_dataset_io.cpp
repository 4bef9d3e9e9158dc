#include "bernfilter/dataset_io.hpp"
#include "bernfilter/error.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

using namespace bernfilter;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("bernfilter_io_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

Error caught(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(ErrorCode::InvalidArgument, "none");
}

}  // namespace

using DatasetIo = TempDir;

TEST_F(DatasetIo, EdgeListRoundTrip) {
  const Graph g = grid_graph(3, 4);
  write_edge_list(dir_ / "g.txt", g);
  const Graph back = load_graph(dir_ / "g.txt");
  EXPECT_EQ(back.num_nodes(), g.num_nodes());
  const auto a = g.edges();
  const auto b = back.edges();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].u, b[i].u);
    EXPECT_EQ(a[i].v, b[i].v);
  }
}

TEST_F(DatasetIo, EdgeListParsing) {
  const auto p = write("e.txt", "# comment\n0 1\n\n1\t2\n2 0\n");
  const Graph g = load_graph(p);
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_EQ(load_graph(p, 5).num_nodes(), 5u);

  const auto bad = write("bad.txt", "0 1\n1 x\n");
  const Error e = caught([&] { load_graph(bad); });
  EXPECT_EQ(e.code(), ErrorCode::Parse);
  EXPECT_NE(std::string(e.what()).find("bad.txt:2"), std::string::npos) << e.what();

  EXPECT_EQ(caught([&] { load_graph(write("three.txt", "0 1 2\n")); }).code(), ErrorCode::Parse);
  EXPECT_EQ(caught([&] { load_graph(p, 2); }).code(), ErrorCode::OutOfRange);
  EXPECT_EQ(caught([&] { load_graph(dir_ / "missing.txt"); }).code(), ErrorCode::Io);
}

TEST_F(DatasetIo, MatrixAndSignalRoundTrip) {
  Matrix m(3, 2);
  m << 0.1, -2.5e-300, 1.0 / 3.0, 7, -0.0, 1e17;
  write_matrix_csv(dir_ / "m.csv", m);
  EXPECT_EQ(read_matrix_csv(dir_ / "m.csv"), m);

  std::mt19937_64 rng(1);
  const auto sig = bftest::random_vector(50, rng, -1e3, 1e3);
  write_signal(dir_ / "s.csv", sig);
  EXPECT_EQ(read_signal(dir_ / "s.csv"), sig);
  EXPECT_EQ(caught([&] { read_signal(dir_ / "m.csv"); }).code(), ErrorCode::DimensionMismatch);
}

TEST_F(DatasetIo, RejectsNonFinite) {
  for (const char* bad : {"1,nan\n", "inf,2\n", "1,-inf\n", "NaN\n"}) {
    const auto p = write("bad.csv", bad);
    EXPECT_EQ(caught([&] { read_matrix_csv(p); }).code(), ErrorCode::NonFinite) << bad;
  }
  const auto coeffs = write("c.txt", "2\n1 nan 0\n");
  EXPECT_EQ(caught([&] { read_coeffs(coeffs); }).code(), ErrorCode::NonFinite);
  const auto curve = write("curve.csv", "lambda,value\n0,1\n2,inf\n");
  EXPECT_EQ(caught([&] { read_curve_csv(curve); }).code(), ErrorCode::NonFinite);
}

TEST_F(DatasetIo, RaggedMatrix) {
  const auto p = write("r.csv", "1,2\n3\n");
  const Error e = caught([&] { read_matrix_csv(p); });
  EXPECT_EQ(e.code(), ErrorCode::Parse);
  EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  EXPECT_EQ(caught([&] { read_matrix_csv(write("empty.csv", "")); }).code(), ErrorCode::Parse);
}

TEST_F(DatasetIo, CoefficientsRoundTripAt17Digits) {
  std::mt19937_64 rng(2);
  const BernCoeffs c(bftest::random_vector(11, rng, 0.0, 1.0));
  write_coeffs(dir_ / "c.txt", c);
  EXPECT_EQ(read_coeffs(dir_ / "c.txt"), c);

  std::ifstream in(dir_ / "c.txt");
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "10");

  const auto low = write("low.txt", "4\n1 0.75 0.5 0.25 0\n");
  EXPECT_EQ(read_coeffs(low), BernCoeffs({1, 0.75, 0.5, 0.25, 0}));
  EXPECT_EQ(caught([&] { read_coeffs(write("short.txt", "3\n1 2\n")); }).code(), ErrorCode::Parse);
  EXPECT_EQ(caught([&] { read_coeffs(write("one.txt", "3\n")); }).code(), ErrorCode::Parse);

  write_coeffs_csv(dir_ / "c.csv", BernCoeffs({0.5, 1}));
  std::ifstream csv(dir_ / "c.csv");
  std::string text((std::istreambuf_iterator<char>(csv)), {});
  EXPECT_EQ(text, "k,theta\n0,0.5\n1,1\n");
}

TEST_F(DatasetIo, LabelsMasksAndSplits) {
  write_labels(dir_ / "l.txt", {0, 2, 1});
  EXPECT_EQ(read_labels(dir_ / "l.txt"), (std::vector<int>{0, 2, 1}));
  EXPECT_EQ(caught([&] { read_labels(write("empty.txt", "")); }).code(), ErrorCode::Parse);
  EXPECT_EQ(caught([&] { read_labels(write("neg.txt", "-1\n")); }).code(), ErrorCode::Parse);

  EXPECT_EQ(read_mask(write("m.txt", "1\n0\n1\n")), (Mask{1, 0, 1}));
  EXPECT_EQ(caught([&] { read_mask(write("m2.txt", "2\n")); }).code(), ErrorCode::Parse);

  const auto s = make_splits(12, 4);
  write_split(dir_ / "split.txt", s);
  const auto back = read_split(dir_ / "split.txt");
  EXPECT_EQ(back.train, s.train);
  EXPECT_EQ(back.val, s.val);
  EXPECT_EQ(back.test, s.test);
}

TEST_F(DatasetIo, CurveExport) {
  const auto all = export_curve(BernCoeffs::constant(5, 1.0), 3);
  EXPECT_EQ(all.lambda, (std::vector<double>{0, 1, 2}));
  for (double v : all.value) EXPECT_NEAR(v, 1.0, 1e-15);

  const auto high = export_curve(design_coeffs(named_filter("linear_high"), 10), 3);
  EXPECT_NEAR(high.value[0], 0.0, 1e-15);
  EXPECT_NEAR(high.value[1], 0.5, 1e-15);
  EXPECT_NEAR(high.value[2], 1.0, 1e-15);

  const auto def = export_curve(BernCoeffs({0.2, 0.4}));
  EXPECT_EQ(def.lambda.size(), 1000u);
  EXPECT_EQ(def.lambda.front(), 0.0);
  EXPECT_EQ(def.lambda.back(), 2.0);
  EXPECT_TRUE(std::is_sorted(def.lambda.begin(), def.lambda.end()));

  write_curve_csv(dir_ / "curve.csv", def);
  const auto back = read_curve_csv(dir_ / "curve.csv");
  EXPECT_EQ(back.lambda, def.lambda);
  EXPECT_EQ(back.value, def.value);

  EXPECT_THROW(export_curve(BernCoeffs({1.0}), 1), Error);
  EXPECT_EQ(caught([&] { read_curve_csv(write("c2.csv", "lambda,value\n0,1\n1,1\n")); }).code(), ErrorCode::Parse);
}

TEST_F(DatasetIo, DatasetDirectory) {
  const auto data = two_cluster_dataset(6, 0.2, 3);
  save_dataset(dir_ / "ds", data);
  const auto back = load_dataset(dir_ / "ds");
  EXPECT_EQ(back.graph.num_nodes(), 12u);
  EXPECT_EQ(back.graph.num_edges(), data.graph.num_edges());
  EXPECT_EQ(back.features, data.features);
  EXPECT_EQ(back.labels, data.labels);
  EXPECT_EQ(back.num_classes, 2);
  EXPECT_EQ(load_dataset(dir_ / "ds", 5).num_classes, 5);
  EXPECT_EQ(caught([&] { load_dataset(dir_ / "ds", 1); }).code(), ErrorCode::OutOfRange);

  // Feature row count differs from the label count: both numbers are named.
  std::ofstream(dir_ / "ds" / "features.csv") << "1,0\n0,1\n";
  const Error e = caught([&] { load_dataset(dir_ / "ds"); });
  EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  const std::string msg = e.what();
  EXPECT_NE(msg.find("2 rows"), std::string::npos) << msg;
  EXPECT_NE(msg.find("12 labels"), std::string::npos) << msg;

  std::ofstream(dir_ / "ds" / "labels.txt") << "";
  EXPECT_EQ(caught([&] { load_dataset(dir_ / "ds"); }).code(), ErrorCode::Parse);

  fs::remove(dir_ / "ds" / "edges.txt");
  EXPECT_EQ(caught([&] { load_dataset(dir_ / "ds"); }).code(), ErrorCode::Io);
}

TEST(GridSignal, Kinds) {
  EXPECT_EQ(synth_grid_signal(2, 2, 0, GridSignalKind::Checker), (std::vector<double>{1, 0, 0, 1}));
  EXPECT_EQ(synth_grid_signal(1, 3, 0, GridSignalKind::Gradient), (std::vector<double>{0, 0.5, 1}));
  const auto a = synth_grid_signal(5, 7, 42, GridSignalKind::Random);
  EXPECT_EQ(a, synth_grid_signal(5, 7, 42, GridSignalKind::Random));
  EXPECT_NE(a, synth_grid_signal(5, 7, 43, GridSignalKind::Random));
  for (double v : a) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_THROW(synth_grid_signal(1, 1, 0, GridSignalKind::Random), Error);
  EXPECT_EQ(parse_grid_signal_kind("gradient"), GridSignalKind::Gradient);
  EXPECT_THROW(parse_grid_signal_kind("stripes"), Error);
}

TEST(TwoCluster, Structure) {
  const auto d = two_cluster_dataset(10, 0.0, 1);
  EXPECT_EQ(d.graph.num_nodes(), 20u);
  EXPECT_EQ(d.graph.num_edges(), 2u * 45u + 1u);
  EXPECT_EQ(d.features(0, 0), 1.0);
  EXPECT_EQ(d.features(0, 1), 0.0);
  EXPECT_EQ(d.features(15, 1), 1.0);
  EXPECT_EQ(d.labels[3], 0);
  EXPECT_EQ(d.labels[13], 1);
  const auto noisy = two_cluster_dataset(10, 0.5, 1);
  EXPECT_EQ(noisy.features, two_cluster_dataset(10, 0.5, 1).features);
  EXPECT_NE(noisy.features, d.features);
}
