#pragma once

#include "som3d/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace som3d {

/// Allowed metric names.
inline const std::vector<std::string>& metric_vocabulary() {
    static const std::vector<std::string> names{"rpe",           "predicted_rpe",   "measurements", "bound",
                                                "flight_distance", "recon_error", "theorem2_Q"};
    return names;
}

struct ResultRow {
    std::string experiment;
    std::string scenario;
    int n = 0;
    std::uint64_t M = 0;
    int d0 = 0;
    std::uint64_t seed = 0;
    std::string metric;
    double value = 0.0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

enum class OutputFormat { csv, json };

inline constexpr std::string_view kCsvHeader = "experiment,scenario,n,M,d0,seed,metric,value";

/// Total order on every field; emission sorts with it.
bool row_less(const ResultRow& a, const ResultRow& b);
void sort_rows(std::vector<ResultRow>& rows);

/// Nine significant digits, printf %.9g.
std::string format_value(double v);

/// Sorts a copy of `rows` and writes it. Throws std::invalid_argument for an
/// unknown metric or a non-finite value.
void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, OutputFormat format);

/// Writes to `path`, or to stdout when path is empty or "-".
/// Throws std::runtime_error on I/O failure.
void emit(const std::vector<ResultRow>& rows, const std::filesystem::path& path, OutputFormat format);

std::vector<ResultRow> parse_rows(std::string_view text, OutputFormat format);

/// One visit of a measurement tour.
struct WaypointVisit {
    int round = 1;
    std::size_t order = 0;
    Point3 position;
};

/// Header `round,order,x,y,z`, one row per visit.
void write_waypoints(std::ostream& os, const std::vector<WaypointVisit>& visits);

}  // namespace som3d
