#include <doctest.h>

#include <fstream>

#include "frfx/ucr.hpp"
#include "helpers.hpp"

using namespace frfx;

namespace {

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& content) {
  const auto dir = testing::scratch_dir("ucr");
  const auto path = dir / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("loads a small file with -1/1 labels") {
  const auto path = write_temp("small.txt",
                               "-1,1.0,2.0,3.0,4.0,5.0\n"
                               "1,0.5,0.5,0.5,0.5,0.5\n"
                               "-1,9,8,7,6,5\n");
  const FunctionalDataset data = load_ucr(path);
  CHECK(data.n_curves() == 3);
  CHECK(data.n_points() == 5);
  CHECK(data.labels == std::vector<int>{0, 1, 0});
  CHECK(data.grid.points(0) == 0.0);
  CHECK(data.grid.points(4) == 1.0);
  CHECK(data.values(0, 2) == 3.0);
}

TEST_CASE("separator auto-detection handles tabs and spaces") {
  const auto tabbed = write_temp("tab.txt", "0\t1\t2\t3\t4\n1\t4\t3\t2\t1\n");
  const FunctionalDataset a = load_ucr(tabbed);
  CHECK(a.n_points() == 4);
  CHECK(a.labels == std::vector<int>{0, 1});

  const auto spaced = write_temp("space.txt", " 0  1 2 3 4\n 1 4 3 2 1\n");
  const FunctionalDataset b = load_ucr(spaced);
  CHECK(b.values == a.values);
  CHECK(b.labels == a.labels);
}

TEST_CASE("ragged rows are rejected with the row named") {
  const auto path = write_temp("ragged.txt",
                               "1,1,2,3,4,5\n"
                               "0,1,2,3,4\n");
  CHECK_THROWS_WITH_AS(load_ucr(path),
                       doctest::Contains("row 2"), RaggedRows);
}

TEST_CASE("unparseable fields report row and column") {
  const auto path = write_temp("bad.txt", "1,2.0,oops,4.0\n");
  CHECK_THROWS_WITH_AS(load_ucr(path), doctest::Contains("row 1, column 3"),
                       UnparseableField);

  // header rows are not data
  const auto header = write_temp("header.txt",
                                 "label,v1,v2,v3\n"
                                 "1,1,2,3\n");
  CHECK_THROWS_AS(load_ucr(header), UnparseableField);
}

TEST_CASE("more than two classes is an arity error") {
  const auto path = write_temp("three.txt",
                               "0,1,2,3,4\n1,1,2,3,4\n2,1,2,3,4\n");
  CHECK_THROWS_AS(load_ucr(path), UnknownLabelArity);
}

TEST_CASE("missing file is an io error") {
  CHECK_THROWS_AS(load_ucr("/nonexistent/nowhere.txt"), IoError);
}

TEST_CASE("loader round-trip preserves values and labels exactly") {
  const FunctionalDataset original = load_ucr(testing::train_fixture());
  const auto dir = testing::scratch_dir("roundtrip");
  const auto path = dir / "rewritten.txt";
  save_ucr(original, path);
  const FunctionalDataset reloaded = load_ucr(path);
  CHECK(reloaded.values == original.values);
  CHECK(reloaded.labels == original.labels);
}

TEST_CASE("bundled fixtures have the documented shape") {
  const FunctionalDataset train = load_ucr(testing::train_fixture());
  const FunctionalDataset test = load_ucr(testing::test_fixture());
  CHECK(train.n_curves() == 100);
  CHECK(test.n_curves() == 100);
  CHECK(train.n_points() == test.n_points());
  int diseased = 0;
  for (int y : train.labels) diseased += y;
  CHECK(diseased > 0);
  CHECK(diseased < 100);
}
