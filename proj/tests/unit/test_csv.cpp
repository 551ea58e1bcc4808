#include "odl/csv.hpp"

#include "odl/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

namespace {

// Small scratch-file helper; files land in the system temp directory.
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) {
        path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
               "/odl_csv_" + name;
        std::ofstream f(path, std::ios::binary);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("format_double renders shortest round-trip decimals") {
    CHECK(odl::format_double(1.0) == "1");
    CHECK(odl::format_double(0.1) == "0.1");
    CHECK(odl::format_double(-2.5e-8) == "-2.5e-08");
    CHECK(odl::format_double(std::nan("")) == "NA");
    CHECK(odl::format_double(std::numeric_limits<double>::infinity()) == "NA");
}

TEST_CASE("format_double output parses back to the identical bits") {
    const double values[] = {0.1, 1.0 / 3.0, 12345.6789, -9.87e-300, 5e300,
                             0.30000000000000004};
    for (double v : values) {
        const double back = odl::parse_double(odl::format_double(v), "test");
        CHECK(back == v);
    }
}

TEST_CASE("parse_double is strict about trailing garbage") {
    CHECK(odl::parse_double("1.5e3", "t") == 1500.0);
    CHECK(odl::parse_double("-0.25", "t") == -0.25);
    CHECK_THROWS_AS(odl::parse_double("1.5x", "t"), odl::DataError);
    CHECK_THROWS_AS(odl::parse_double("", "t"), odl::DataError);
    CHECK_THROWS_AS(odl::parse_double("nanx", "t"), odl::DataError);
}

TEST_CASE("read_csv parses a plain numeric table") {
    TempFile f("plain.csv", "a,b,y\n1,2,3\n4,5,6\n");
    const auto table = odl::read_csv(f.path);
    REQUIRE(table.header.size() == 3);
    CHECK(table.header[0] == "a");
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[1][2] == 6.0);
}

TEST_CASE("read_csv tolerates CRLF endings and trailing blank lines") {
    TempFile f("crlf.csv", "a,y\r\n1,2\r\n3,4\r\n\r\n");
    const auto table = odl::read_csv(f.path);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][0] == 1.0);
    CHECK(table.header[1] == "y");
}

TEST_CASE("read_csv reports the offending line") {
    SUBCASE("ragged row") {
        TempFile f("ragged.csv", "a,b,y\n1,2,3\n4,5\n");
        CHECK_THROWS_WITH_AS(odl::read_csv(f.path), doctest::Contains(":3"), odl::DataError);
    }
    SUBCASE("non-numeric cell") {
        TempFile f("alpha.csv", "a,y\n1,2\nfoo,4\n");
        CHECK_THROWS_WITH_AS(odl::read_csv(f.path), doctest::Contains(":3"), odl::DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(odl::read_csv("/nonexistent/nope.csv"), odl::DataError);
    }
    SUBCASE("empty file") {
        TempFile f("empty.csv", "");
        CHECK_THROWS_AS(odl::read_csv(f.path), odl::DataError);
    }
}

TEST_CASE("table_to_batch splits response from features by header name") {
    TempFile f("batch.csv", "x1,y,x2\n1,10,2\n3,20,4\n");
    std::vector<std::string> names;
    const auto batch = odl::table_to_batch(odl::read_csv(f.path), f.path, &names);

    REQUIRE(names.size() == 2);
    CHECK(names[0] == "x1");
    CHECK(names[1] == "x2");
    CHECK(batch.rows() == 2);
    CHECK(batch.cols() == 2);
    CHECK(batch.X(0, 0) == 1.0);
    CHECK(batch.X(0, 1) == 2.0); // feature order follows the file
    CHECK(batch.y[1] == 20.0);
}

TEST_CASE("table_to_batch schema errors") {
    SUBCASE("two response columns") {
        TempFile f("yy.csv", "y,y\n1,2\n");
        CHECK_THROWS_AS(odl::table_to_batch(odl::read_csv(f.path), f.path, nullptr),
                        odl::DataError);
    }
    SUBCASE("no response column") {
        TempFile f("noy.csv", "x1,x2\n1,2\n");
        CHECK_THROWS_AS(odl::table_to_batch(odl::read_csv(f.path), f.path, nullptr),
                        odl::DataError);
    }
    SUBCASE("no feature columns") {
        TempFile f("onlyy.csv", "y\n1\n");
        CHECK_THROWS_AS(odl::table_to_batch(odl::read_csv(f.path), f.path, nullptr),
                        odl::DataError);
    }
    SUBCASE("no data rows") {
        TempFile f("norows.csv", "x1,y\n");
        CHECK_THROWS_AS(odl::table_to_batch(odl::read_csv(f.path), f.path, nullptr),
                        odl::DataError);
    }
}

TEST_CASE("join_csv concatenates with commas") {
    CHECK(odl::join_csv({"a", "b", "c"}) == "a,b,c");
    CHECK(odl::join_csv({"solo"}) == "solo");
    CHECK(odl::join_csv({}) == "");
}
