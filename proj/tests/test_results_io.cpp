#include "doctest.h"

#include "som3d/results_io.hpp"

#include <sstream>

using namespace som3d;

namespace {

std::string render(const std::vector<ResultRow>& rows, OutputFormat f) {
    std::ostringstream os;
    write_rows(os, rows, f);
    return os.str();
}

std::vector<ResultRow> sample_rows() {
    return {
        {"som-sweep:center", "s", 17, 4913, 4, 2, "measurements", 760},
        {"rpe-sweep", "s", 9, 729, 0, 0, "rpe", 0.0563336288},
        {"som-sweep:center", "s", 17, 4913, 4, 1, "flight_distance", 88634.6263},
        {"theorem2:quadrature", "", 0, 0, 0, 0, "theorem2_Q", 0.182478362},
    };
}

}  // namespace

TEST_CASE("empty outputs") {
    CHECK(render({}, OutputFormat::csv) == "experiment,scenario,n,M,d0,seed,metric,value\n");
    CHECK(render({}, OutputFormat::json) == "[]\n");
}

TEST_CASE("nine significant digits") {
    CHECK(format_value(1.0 / 3) == "0.333333333");
    CHECK(format_value(123456789012.0) == "1.23456789e+11");
    CHECK(format_value(760) == "760");
    CHECK(format_value(-0.0) == "0");
}

TEST_CASE("rows are sorted before emission") {
    const std::string csv = render(sample_rows(), OutputFormat::csv);
    const auto first = csv.find("rpe-sweep");
    const auto second = csv.find("som-sweep:center,s,17,4913,4,1");
    const auto third = csv.find("som-sweep:center,s,17,4913,4,2");
    CHECK(first < second);
    CHECK(second < third);
    auto shuffled = sample_rows();
    std::swap(shuffled[0], shuffled[3]);
    CHECK(render(shuffled, OutputFormat::csv) == csv);
}

TEST_CASE("round trip") {
    auto rows = sample_rows();
    sort_rows(rows);
    for (auto f : {OutputFormat::csv, OutputFormat::json}) {
        const auto text = render(rows, f);
        CHECK(parse_rows(text, f) == rows);
        // Values with more digits settle after one pass.
        std::vector<ResultRow> noisy{{"rpe-sweep", "s", 9, 729, 0, 0, "rpe", 0.1234567890123}};
        const auto once = render(noisy, f);
        CHECK(render(parse_rows(once, f), f) == once);
    }
}

TEST_CASE("quoted fields") {
    std::vector<ResultRow> rows{{"rpe-sweep", "a,\"b\"", 9, 729, 0, 0, "rpe", 0.5}};
    const auto csv = render(rows, OutputFormat::csv);
    CHECK(csv.find("\"a,\"\"b\"\"\"") != std::string::npos);
    CHECK(parse_rows(csv, OutputFormat::csv) == rows);
}

TEST_CASE("vocabulary and finiteness are enforced") {
    std::vector<ResultRow> bad{{"x", "s", 0, 0, 0, 0, "speed", 1}};
    CHECK_THROWS_AS(render(bad, OutputFormat::csv), std::invalid_argument);
    std::vector<ResultRow> nan{{"x", "s", 0, 0, 0, 0, "rpe", NAN}};
    CHECK_THROWS_AS(render(nan, OutputFormat::json), std::invalid_argument);
    CHECK_THROWS(parse_rows("a,b\n", OutputFormat::csv));
}

TEST_CASE("waypoint csv") {
    std::ostringstream os;
    write_waypoints(os, {{1, 0, {0.5, 1, 2}}, {2, 1, {3, 4, 5}}});
    CHECK(os.str() == "round,order,x,y,z\n1,0,0.5,1,2\n2,1,3,4,5\n");
}

TEST_CASE("emit to an unwritable path fails") {
    CHECK_THROWS_AS(emit(sample_rows(), "/nonexistent-dir/out.csv", OutputFormat::csv), std::runtime_error);
}
