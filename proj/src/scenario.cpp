#include "som3d/scenario.hpp"

#include "som3d/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace som3d {

namespace {

using json = nlohmann::json;

// Input iterator that publishes how far the parser has read, so SAX events
// can be mapped back to source offsets.
struct TrackingIterator {
    using iterator_category = std::forward_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    const char* p = nullptr;
    const char** cursor = nullptr;

    reference operator*() const { return *p; }
    TrackingIterator& operator++() {
        ++p;
        *cursor = p;
        return *this;
    }
    TrackingIterator operator++(int) {
        auto copy = *this;
        ++*this;
        return copy;
    }
    bool operator==(const TrackingIterator& o) const { return p == o.p; }
    bool operator!=(const TrackingIterator& o) const { return p != o.p; }
};

// Builds the DOM and records the offset at which each field path starts.
class LocatingSax {
public:
    LocatingSax(json& root, const char* begin, const char** cursor, std::map<std::string, std::size_t>& offsets)
        : dom_(root, false), begin_(begin), cursor_(cursor), offsets_(offsets) {}

    bool null() { return scalar([&] { return dom_.null(); }); }
    bool boolean(bool v) { return scalar([&] { return dom_.boolean(v); }); }
    bool number_integer(json::number_integer_t v) { return scalar([&] { return dom_.number_integer(v); }); }
    bool number_unsigned(json::number_unsigned_t v) { return scalar([&] { return dom_.number_unsigned(v); }); }
    bool number_float(json::number_float_t v, const json::string_t& s) {
        return scalar([&] { return dom_.number_float(v, s); });
    }
    bool string(json::string_t& v) { return scalar([&] { return dom_.string(v); }); }
    bool binary(json::binary_t& v) { return scalar([&] { return dom_.binary(v); }); }

    bool start_object(std::size_t n) {
        open(false);
        return dom_.start_object(n);
    }
    bool key(json::string_t& k) {
        stack_.back().key = k;
        offsets_.emplace(path_of_next(), offset());
        return dom_.key(k);
    }
    bool end_object() {
        close();
        return dom_.end_object();
    }
    bool start_array(std::size_t n) {
        open(true);
        return dom_.start_array(n);
    }
    bool end_array() {
        close();
        return dom_.end_array();
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
        error_ = ex.what();
        return false;
    }

    const std::string& error() const { return error_; }

private:
    struct Frame {
        bool array = false;
        std::size_t index = 0;
        std::string key;
        std::string path;
    };

    std::size_t offset() const { return static_cast<std::size_t>(*cursor_ - begin_); }

    std::string path_of_next() const {
        if (stack_.empty()) return "";
        const Frame& f = stack_.back();
        if (f.array) return f.path + "[" + std::to_string(f.index) + "]";
        return f.path.empty() ? f.key : f.path + "." + f.key;
    }

    template <class F>
    bool scalar(F&& f) {
        offsets_.emplace(path_of_next(), offset());
        advance();
        return f();
    }
    void open(bool array) {
        const std::string path = path_of_next();
        offsets_.emplace(path, offset());
        stack_.push_back({array, 0, {}, path});
    }
    void close() {
        stack_.pop_back();
        advance();
    }
    void advance() {
        if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
    }

    nlohmann::detail::json_sax_dom_parser<json> dom_;
    const char* begin_;
    const char** cursor_;
    std::map<std::string, std::size_t>& offsets_;
    std::vector<Frame> stack_;
    std::string error_;
};

// Extracts typed values, collecting every problem with its source line.
class Reader {
public:
    Reader(std::string_view text, const std::map<std::string, std::size_t>& offsets)
        : text_(text), offsets_(offsets) {}

    void fail(const std::string& path, const std::string& msg) {
        problems_.push_back("line " + std::to_string(line_of(path)) + ": field '" + (path.empty() ? "<root>" : path) +
                            "': " + msg);
    }

    const std::vector<std::string>& problems() const { return problems_; }

    static std::string join(const std::string& parent, const std::string& key) {
        return parent.empty() ? key : parent + "." + key;
    }
    static std::string at(const std::string& parent, std::size_t i) {
        return parent + "[" + std::to_string(i) + "]";
    }

    bool object(const json& v, const std::string& path, std::initializer_list<const char*> allowed,
                std::initializer_list<const char*> required) {
        if (!v.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        const std::set<std::string> known(allowed.begin(), allowed.end());
        for (const auto& item : v.items()) {
            if (!known.count(item.key())) fail(join(path, item.key()), "unknown field");
        }
        bool ok = true;
        for (const char* r : required) {
            if (!v.contains(r)) {
                fail(path, std::string("missing required field '") + r + "'");
                ok = false;
            }
        }
        return ok;
    }

    bool number(const json& v, const std::string& path, double& out) {
        if (!v.is_number()) {
            fail(path, "expected a number");
            return false;
        }
        out = v.get<double>();
        if (!std::isfinite(out)) {
            fail(path, "must be finite");
            return false;
        }
        return true;
    }

    bool integer(const json& v, const std::string& path, long long lo, long long hi, long long& out) {
        if (!v.is_number_integer()) {
            fail(path, "expected an integer");
            return false;
        }
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
            fail(path, "must be at most " + std::to_string(hi));
            return false;
        }
        out = v.get<long long>();
        if (out < lo || out > hi) {
            fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return false;
        }
        return true;
    }

    bool unsigned64(const json& v, const std::string& path, std::uint64_t& out) {
        if (!v.is_number_unsigned()) {
            fail(path, "expected a non-negative integer");
            return false;
        }
        out = v.get<std::uint64_t>();
        return true;
    }

    bool point(const json& v, const std::string& path, Point3& out) {
        if (!v.is_array() || v.size() != 3) {
            fail(path, "expected [x, y, z]");
            return false;
        }
        double c[3];
        bool ok = true;
        for (std::size_t i = 0; i < 3; ++i) ok = number(v[i], at(path, i), c[i]) && ok;
        if (ok) out = {c[0], c[1], c[2]};
        return ok;
    }

    bool array(const json& v, const std::string& path) {
        if (!v.is_array()) {
            fail(path, "expected an array");
            return false;
        }
        return true;
    }

    template <class T>
    bool choice(const json& v, const std::string& path, const std::map<std::string, T>& options, T& out) {
        if (v.is_string()) {
            auto it = options.find(v.get<std::string>());
            if (it != options.end()) {
                out = it->second;
                return true;
            }
        }
        std::string names;
        for (const auto& [name, _] : options) names += (names.empty() ? "" : ", ") + name;
        fail(path, "expected one of: " + names);
        return false;
    }

private:
    std::size_t line_of(const std::string& path) const {
        auto it = offsets_.find(path);
        std::string p = path;
        while (it == offsets_.end() && !p.empty()) {
            const auto cut = p.find_last_of(".[");
            p = cut == std::string::npos ? "" : p.substr(0, cut);
            it = offsets_.find(p);
        }
        const std::size_t off = it == offsets_.end() ? 0 : std::min(it->second, text_.size());
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(off), '\n'));
    }

    std::string_view text_;
    const std::map<std::string, std::size_t>& offsets_;
    std::vector<std::string> problems_;
};

const std::map<std::string, PositionMode> kModes{{"center", PositionMode::center}, {"random", PositionMode::random}};
const std::map<std::string, RefinementRule> kRules{{"pairwise", RefinementRule::pairwise},
                                                   {"cell", RefinementRule::cell}};
const std::map<std::string, GroundTruth> kTruths{{"volume-majority", GroundTruth::volume_majority},
                                                 {"center", GroundTruth::center}};

void read_aco(Reader& rd, const json& v, AcoParams& aco) {
    if (!rd.object(v, "aco", {"n_ants", "alpha_pher", "beta_heur", "rho", "deposit", "iterations", "candidates"}, {}))
        return;
    long long i = 0;
    if (v.contains("n_ants") && rd.integer(v["n_ants"], "aco.n_ants", 1, 100000, i)) aco.n_ants = static_cast<int>(i);
    if (v.contains("iterations") && rd.integer(v["iterations"], "aco.iterations", 1, 1000000, i))
        aco.iterations = static_cast<int>(i);
    if (v.contains("candidates") && rd.integer(v["candidates"], "aco.candidates", 1, 100000, i))
        aco.candidates = static_cast<int>(i);
    if (v.contains("alpha_pher")) rd.number(v["alpha_pher"], "aco.alpha_pher", aco.alpha_pher);
    if (v.contains("beta_heur")) rd.number(v["beta_heur"], "aco.beta_heur", aco.beta_heur);
    if (v.contains("rho")) rd.number(v["rho"], "aco.rho", aco.rho);
    if (v.contains("deposit")) rd.number(v["deposit"], "aco.deposit", aco.deposit);
}

template <class T, class F>
void read_list(Reader& rd, const json& root, const char* key, std::vector<T>& out, F&& item) {
    if (!root.contains(key)) return;
    const json& v = root[key];
    if (!rd.array(v, key)) return;
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
        T value{};
        if (item(v[i], Reader::at(key, i), value)) out.push_back(value);
    }
}

}  // namespace

void Scenario::validate() const {
    std::vector<std::string> problems;
    auto absorb = [&](const std::string& prefix, auto&& check) {
        try {
            check();
        } catch (const ValidationError& e) {
            for (const auto& p : e.problems()) problems.push_back(prefix + p);
        }
    };
    if (id.empty()) problems.emplace_back("id must be non-empty");
    absorb("", [&] { scene.validate(); });
    if (grids.empty()) problems.emplace_back("grids must list at least one n");
    if (seeds.empty()) problems.emplace_back("seeds must list at least one seed");
    if (position_modes.empty()) problems.emplace_back("position_modes must not be empty");
    for (int n : grids) {
        absorb("", [&] { GridSpec{n, 1.0}.validate(); });
        for (int d0 : intervals) {
            SomConfig config;
            config.d0 = d0;
            config.aco = aco;
            absorb("grid n = " + std::to_string(n) + ", interval " + std::to_string(d0) + ": ",
                   [&] { config.validate(GridSpec{n, 1.0}); });
        }
    }
    if (subsamples < 1 || subsamples > 64) problems.emplace_back("subsamples must lie in [1, 64]");
    if (surface_samples < 1) problems.emplace_back("monte_carlo.surface_samples must be >= 1");
    if (cut_samples < 100000) problems.emplace_back("monte_carlo.cut_samples must be >= 100000");
    if (!(rpe_constant > 0.0)) problems.emplace_back("rpe_constant must be positive");
    absorb("", [&] { aco.validate(); });
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

Scenario parse_scenario(std::string_view text) {
    json root;
    std::map<std::string, std::size_t> offsets;
    const char* cursor = text.data();
    LocatingSax sax(root, text.data(), &cursor, offsets);
    TrackingIterator first{text.data(), &cursor};
    TrackingIterator last{text.data() + text.size(), &cursor};
    if (!json::sax_parse(first, last, &sax) || root.is_discarded()) {
        std::string msg = sax.error();
        const auto tag = msg.find("] ");
        if (tag != std::string::npos) msg = msg.substr(tag + 2);
        throw ValidationError(msg.empty() ? "scenario is not valid JSON" : msg);
    }

    Reader rd(text, offsets);
    Scenario sc;
    if (!rd.object(root, "",
                   {"id", "region", "networks", "grids", "intervals", "seeds", "position_modes", "subsamples",
                    "monte_carlo", "refinement", "ground_truth", "plan_tours", "aco", "rpe_constant"},
                   {"id", "region", "networks", "grids", "seeds"})) {
        if (!root.is_object()) throw ValidationError(rd.problems());
    }

    if (root.contains("id")) {
        if (root["id"].is_string()) sc.id = root["id"].get<std::string>();
        else rd.fail("id", "expected a string");
    }
    if (root.contains("region") && rd.object(root["region"], "region", {"origin", "edge"}, {"origin", "edge"})) {
        rd.point(root["region"]["origin"], "region.origin", sc.scene.region_origin);
        rd.number(root["region"]["edge"], "region.edge", sc.scene.region_edge);
    }
    if (root.contains("networks") && rd.array(root["networks"], "networks")) {
        const json& nets = root["networks"];
        for (std::size_t i = 0; i < nets.size(); ++i) {
            const std::string path = Reader::at("networks", i);
            Point3 c;
            double r = 0.0;
            if (rd.object(nets[i], path, {"center", "radius"}, {"center", "radius"}) &&
                rd.point(nets[i]["center"], path + ".center", c) && rd.number(nets[i]["radius"], path + ".radius", r)) {
                if (r <= 0.0) rd.fail(path + ".radius", "must be positive");
                else sc.scene.add_network(c, r);
            }
        }
        if (nets.size() > static_cast<std::size_t>(kMaxNetworks))
            rd.fail("networks", "at most " + std::to_string(kMaxNetworks) + " networks are supported");
    }
    auto int_item = [&](long long lo, long long hi) {
        return [&rd, lo, hi](const json& v, const std::string& path, int& out) {
            long long x = 0;
            if (!rd.integer(v, path, lo, hi, x)) return false;
            out = static_cast<int>(x);
            return true;
        };
    };
    read_list(rd, root, "grids", sc.grids, int_item(1, 2048));
    read_list(rd, root, "intervals", sc.intervals, int_item(1, 2048));
    read_list(rd, root, "seeds", sc.seeds,
              [&](const json& v, const std::string& path, std::uint64_t& out) { return rd.unsigned64(v, path, out); });
    read_list(rd, root, "position_modes", sc.position_modes,
              [&](const json& v, const std::string& path, PositionMode& out) { return rd.choice(v, path, kModes, out); });

    long long i = 0;
    if (root.contains("subsamples") && rd.integer(root["subsamples"], "subsamples", 1, 64, i))
        sc.subsamples = static_cast<int>(i);
    if (root.contains("monte_carlo") &&
        rd.object(root["monte_carlo"], "monte_carlo", {"surface_samples", "cut_samples"}, {})) {
        const json& mc = root["monte_carlo"];
        if (mc.contains("surface_samples"))
            rd.unsigned64(mc["surface_samples"], "monte_carlo.surface_samples", sc.surface_samples);
        if (mc.contains("cut_samples")) rd.unsigned64(mc["cut_samples"], "monte_carlo.cut_samples", sc.cut_samples);
    }
    if (root.contains("refinement")) rd.choice(root["refinement"], "refinement", kRules, sc.refinement);
    if (root.contains("ground_truth")) rd.choice(root["ground_truth"], "ground_truth", kTruths, sc.ground_truth);
    if (root.contains("plan_tours")) {
        if (root["plan_tours"].is_boolean()) sc.plan_tours = root["plan_tours"].get<bool>();
        else rd.fail("plan_tours", "expected true or false");
    }
    if (root.contains("aco")) read_aco(rd, root["aco"], sc.aco);
    if (root.contains("rpe_constant")) rd.number(root["rpe_constant"], "rpe_constant", sc.rpe_constant);

    if (!rd.problems().empty()) throw ValidationError(rd.problems());
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ValidationError& e) {
        std::vector<std::string> problems;
        for (const auto& p : e.problems()) problems.push_back(path.string() + ": " + p);
        throw ValidationError(std::move(problems));
    }
}

std::string to_string(PositionMode mode) { return mode == PositionMode::center ? "center" : "random"; }
std::string to_string(RefinementRule rule) { return rule == RefinementRule::pairwise ? "pairwise" : "cell"; }
std::string to_string(GroundTruth truth) { return truth == GroundTruth::center ? "center" : "volume-majority"; }

}  // namespace som3d
