#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "csad/io.hpp"
#include "oracles.hpp"

namespace csad {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("csad_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const char* name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

TEST(FormatDouble, RoundTripsExactly) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = normal(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(MatrixCsv, PropertyRoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix m(testing::random_symmetric(rng, 1 + trial, 1e4));
    write_matrix_csv(dir / "m.csv", m);
    EXPECT_EQ(read_sym_matrix_csv(dir / "m.csv"), m);
  }
  const Dataset d(Eigen::MatrixXd::Random(7, 3));
  write_dataset_csv(dir / "d.csv", d);
  EXPECT_EQ(read_dataset_csv(dir / "d.csv").matrix(), d.matrix());
}

TEST(MatrixCsv, ToleratesBlankLinesAndCrlf) {
  TempDir dir;
  write_text(dir / "m.csv", "1,2\r\n\r\n3, 4\r\n\n");
  const Eigen::MatrixXd m = read_matrix_csv(dir / "m.csv");
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(1, 1), 4.0);
}

TEST(MatrixCsv, MalformedInputIsIoError) {
  TempDir dir;
  write_text(dir / "ragged.csv", "1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(dir / "ragged.csv"), IoError);
  write_text(dir / "word.csv", "1,abc\n");
  EXPECT_THROW(read_matrix_csv(dir / "word.csv"), IoError);
  write_text(dir / "nan.csv", "1,nan\n");
  EXPECT_THROW(read_matrix_csv(dir / "nan.csv"), IoError);
  write_text(dir / "empty.csv", "\n\n");
  EXPECT_THROW(read_matrix_csv(dir / "empty.csv"), IoError);
  write_text(dir / "asym.csv", "1,2\n3,4\n");
  EXPECT_THROW(read_sym_matrix_csv(dir / "asym.csv"), IoError);
  EXPECT_THROW(read_matrix_csv(dir / "missing.csv"), IoError);
}

TEST(Json, EdgesAndWindows) {
  EdgeSet e(4);
  e.insert(3, 1);
  e.insert(0, 2);
  EXPECT_EQ(edges_to_json(e).dump(), "[[0,2],[1,3]]");

  TempDir dir;
  WindowReport w;
  w.window_index = 2;
  w.start_row = 10;
  w.end_row = 20;
  w.detected_edges = e;
  w.flagged = true;
  write_windows_jsonl(dir / "w.jsonl", {w, w});
  std::ifstream in(dir / "w.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("n_edges"), 2);
    EXPECT_EQ(j.at("end_row"), 20);
    ++lines;
  }
  EXPECT_EQ(lines, 2);

  write_json(dir / "x.json", {{"a", 1}});
  EXPECT_EQ(read_json(dir / "x.json").at("a"), 1);
  write_text(dir / "bad.json", "{");
  EXPECT_THROW(read_json(dir / "bad.json"), IoError);
}

}  // namespace
}  // namespace csad
