#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hagedorn/csv.hpp"
#include "hagedorn/error.hpp"

namespace hagedorn {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.4668528946556556}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(2.0), "2");
}

TEST(CsvWriter, HeaderAndRows) {
  const auto path = std::filesystem::temp_directory_path() / "hagedorn_csv_test.csv";
  {
    CsvWriter w(path, {"t", "k", "note"});
    w.cell(0.5).cell(1.0).cell(std::string("x")).end_row();
    w.cell(1.0).empty().cell(std::string("y")).end_row();
  }
  EXPECT_EQ(slurp(path), "t,k,note\n0.5,1,x\n1,,y\n");
  std::filesystem::remove(path);
}

TEST(CsvWriter, UnwritablePath) {
  // a regular file cannot serve as a parent directory
  const auto blocker = std::filesystem::temp_directory_path() / "hagedorn_csv_blocker";
  std::ofstream(blocker) << "x";
  EXPECT_THROW(CsvWriter(blocker / "x.csv", {"a"}), Error);
  std::filesystem::remove(blocker);
}

TEST(SnapshotCsv, Columns) {
  const auto path = std::filesystem::temp_directory_path() / "hagedorn_snapshot_test.csv";
  const Grid grid({Axis{0.0, 1.0, 2}});
  CVector f(2);
  f << Complex(1.0, 2.0), Complex(-0.5, 0.0);
  write_snapshot_csv(path, grid, f);
  EXPECT_EQ(slurp(path), "x,re,im\n0,1,2\n1,-0.5,0\n");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace hagedorn
