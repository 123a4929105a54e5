#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lunar/core.hpp"
#include "lunar/csv.hpp"

using namespace lunar;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "csv_test_" + std::to_string(counter++) + ".tmp";
    std::ofstream out(path, std::ios::binary);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("plain rows and header lookup") {
  TempFile f("A,B,C\n1,2,3\n4,5,6\n");
  const CsvTable t = read_csv(f.path);
  REQUIRE(t.header.size() == 3);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.column("B").value() == 1);
  CHECK_FALSE(t.column("missing").has_value());
  CHECK(t.rows[1][2] == "6");
}

TEST_CASE("quoted fields carry commas, quotes, and newlines") {
  TempFile f("Content\n\"a, b\"\n\"say \"\"hi\"\"\"\n\"two\nlines\"\n");
  const CsvTable t = read_csv(f.path);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][0] == "a, b");
  CHECK(t.rows[1][0] == "say \"hi\"");
  CHECK(t.rows[2][0] == "two\nlines");
}

TEST_CASE("crlf line endings are stripped") {
  TempFile f("A,B\r\nx,y\r\n");
  const CsvTable t = read_csv(f.path);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][1] == "y");
}

TEST_CASE("missing file raises an io error") {
  CHECK_THROWS_AS(read_csv("no_such_file.csv"), IoError);
}

TEST_CASE("escape round-trips through the parser") {
  std::ostringstream out;
  write_csv_row(out, {"plain", "a,b", "q\"q", "nl\nnl"});
  TempFile f("H1,H2,H3,H4\n" + out.str());
  const CsvTable t = read_csv(f.path);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][0] == "plain");
  CHECK(t.rows[0][1] == "a,b");
  CHECK(t.rows[0][2] == "q\"q");
  CHECK(t.rows[0][3] == "nl\nnl");
}
