#include "som3d/results_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace som3d {

namespace {

auto row_key(const ResultRow& r) {
    return std::tie(r.experiment, r.scenario, r.n, r.M, r.d0, r.seed, r.metric, r.value);
}

void check_row(const ResultRow& r) {
    const auto& vocab = metric_vocabulary();
    if (std::find(vocab.begin(), vocab.end(), r.metric) == vocab.end())
        throw std::invalid_argument("unknown metric '" + r.metric + "'");
    if (!std::isfinite(r.value)) throw std::invalid_argument("non-finite value for metric '" + r.metric + "'");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

template <class T>
T parse_integer(const std::string& s) {
    T v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("bad integer field '" + s + "'");
    return v;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number field '" + s + "'");
    return v;
}

}  // namespace

bool row_less(const ResultRow& a, const ResultRow& b) { return row_key(a) < row_key(b); }

void sort_rows(std::vector<ResultRow>& rows) { std::sort(rows.begin(), rows.end(), row_less); }

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
    return buf;
}

void write_rows(std::ostream& os, const std::vector<ResultRow>& input, OutputFormat format) {
    std::vector<ResultRow> rows = input;
    for (const auto& r : rows) check_row(r);
    sort_rows(rows);
    if (format == OutputFormat::csv) {
        os << kCsvHeader << '\n';
        for (const auto& r : rows) {
            os << csv_field(r.experiment) << ',' << csv_field(r.scenario) << ',' << r.n << ',' << r.M << ',' << r.d0
               << ',' << r.seed << ',' << r.metric << ',' << format_value(r.value) << '\n';
        }
        return;
    }
    if (rows.empty()) {
        os << "[]\n";
        return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << "  {\"experiment\": " << nlohmann::json(r.experiment).dump() << ", \"scenario\": "
           << nlohmann::json(r.scenario).dump() << ", \"n\": " << r.n << ", \"M\": " << r.M << ", \"d0\": " << r.d0
           << ", \"seed\": " << r.seed << ", \"metric\": " << nlohmann::json(r.metric).dump()
           << ", \"value\": " << format_value(r.value) << '}' << (i + 1 < rows.size() ? "," : "") << '\n';
    }
    os << "]\n";
}

void emit(const std::vector<ResultRow>& rows, const std::filesystem::path& path, OutputFormat format) {
    if (path.empty() || path == "-") {
        write_rows(std::cout, rows, format);
        std::cout.flush();
        if (!std::cout) throw std::runtime_error("failed writing results to stdout");
        return;
    }
    std::ostringstream buf;
    write_rows(buf, rows, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << buf.str();
    out.close();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<ResultRow> parse_rows(std::string_view text, OutputFormat format) {
    std::vector<ResultRow> rows;
    if (format == OutputFormat::json) {
        const auto doc = nlohmann::json::parse(text);
        if (!doc.is_array()) throw std::invalid_argument("results JSON must be an array");
        for (const auto& o : doc) {
            ResultRow r;
            r.experiment = o.at("experiment").get<std::string>();
            r.scenario = o.at("scenario").get<std::string>();
            r.n = o.at("n").get<int>();
            r.M = o.at("M").get<std::uint64_t>();
            r.d0 = o.at("d0").get<int>();
            r.seed = o.at("seed").get<std::uint64_t>();
            r.metric = o.at("metric").get<std::string>();
            r.value = o.at("value").get<double>();
            rows.push_back(std::move(r));
        }
        return rows;
    }
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            if (line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
            header = false;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw std::invalid_argument("CSV row must have 8 fields");
        rows.push_back({f[0], f[1], parse_integer<int>(f[2]), parse_integer<std::uint64_t>(f[3]),
                        parse_integer<int>(f[4]), parse_integer<std::uint64_t>(f[5]), f[6], parse_double(f[7])});
    }
    if (header) throw std::invalid_argument("missing CSV header");
    return rows;
}

void write_waypoints(std::ostream& os, const std::vector<WaypointVisit>& visits) {
    os << "round,order,x,y,z\n";
    for (const auto& v : visits) {
        os << v.round << ',' << v.order << ',' << format_value(v.position.x) << ',' << format_value(v.position.y)
           << ',' << format_value(v.position.z) << '\n';
    }
}

}  // namespace som3d
