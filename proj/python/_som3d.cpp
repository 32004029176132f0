#include "som3d/aco_router.hpp"
#include "som3d/error.hpp"
#include "som3d/geometry.hpp"
#include "som3d/harness.hpp"
#include "som3d/plane_cut.hpp"
#include "som3d/scenario.hpp"
#include "som3d/som_planner.hpp"
#include "som3d/voxel_grid.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

namespace py = pybind11;
using namespace som3d;

namespace {

using Vec3 = std::array<double, 3>;

Point3 point(const Vec3& v) { return {v[0], v[1], v[2]}; }
Vec3 vec(Point3 p) { return {p.x, p.y, p.z}; }

WaypointSet waypoints(const std::vector<Vec3>& points, const Vec3& start) {
    WaypointSet ws;
    ws.start = point(start);
    for (const auto& p : points) ws.points.push_back(point(p));
    return ws;
}

py::dict tour_dict(const Tour& t) {
    py::dict d;
    d["order"] = t.order;
    d["length"] = t.length;
    d["end"] = vec(t.end);
    return d;
}

py::list rows_list(const std::vector<ResultRow>& rows) {
    py::list out;
    for (const auto& r : rows) {
        py::dict d;
        d["experiment"] = r.experiment;
        d["scenario"] = r.scenario;
        d["n"] = r.n;
        d["M"] = r.M;
        d["d0"] = r.d0;
        d["seed"] = r.seed;
        d["metric"] = r.metric;
        d["value"] = r.value;
        out.append(d);
    }
    return out;
}

PositionMode mode_of(const std::string& s) {
    if (s == "center") return PositionMode::center;
    if (s == "random") return PositionMode::random;
    throw ValidationError("mode must be 'center' or 'random'");
}

}  // namespace

PYBIND11_MODULE(_som3d, m) {
    m.doc() = "3D spectrum occupancy measurement: voxel error, plane cuts, adaptive measurement and tours.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    py::class_<Scene>(m, "Scene")
        .def(py::init([](const Vec3& origin, double edge) {
                 Scene s;
                 s.region_origin = point(origin);
                 s.region_edge = edge;
                 s.validate();
                 return s;
             }),
             py::arg("origin") = Vec3{0, 0, 0}, py::arg("edge") = 1.0)
        .def(
            "add_network",
            [](Scene& s, const Vec3& center, double radius) -> Scene& {
                s.add_network(point(center), radius);
                s.validate();
                return s;
            },
            py::arg("center"), py::arg("radius"), py::return_value_policy::reference_internal)
        .def_property_readonly("edge", [](const Scene& s) { return s.region_edge; })
        .def_property_readonly("origin", [](const Scene& s) { return vec(s.region_origin); })
        .def_property_readonly("network_count", &Scene::network_count)
        .def("radio_parameter_at", [](const Scene& s, const Vec3& p) { return radio_parameter_at(s, point(p)).value; })
        .def("detect", [](const Scene& s, int k, const Vec3& p) { return detect(s, k, point(p)); });

    m.def(
        "boundary_surface_area",
        [](const Scene& s, std::uint64_t samples, std::uint64_t seed) {
            const auto e = boundary_surface_area(s, samples, seed);
            return py::make_tuple(e.value, e.std_error);
        },
        py::arg("scene"), py::arg("samples") = 1'000'000, py::arg("seed") = 1,
        "Monte Carlo boundary area inside the region; returns (value, std_error).");

    m.def(
        "discretization_rpe",
        [](const Scene& s, int n, int subsamples) {
            return discretization_rpe(s, GridSpec::for_region(s.region_edge, n), subsamples);
        },
        py::arg("scene"), py::arg("n"), py::arg("subsamples") = 9);

    m.def(
        "cut_area", [](double x, double theta, double alpha, double eps) { return cut_area({x, theta, alpha, eps}); },
        py::arg("x"), py::arg("theta"), py::arg("alpha"), py::arg("eps") = 1.0);
    m.def(
        "cut_rpe", [](double x, double theta, double alpha, double eps) { return cut_rpe({x, theta, alpha, eps}); },
        py::arg("x"), py::arg("theta"), py::arg("alpha"), py::arg("eps") = 1.0);
    m.def("max_offset", &max_offset, py::arg("theta"), py::arg("alpha"), py::arg("eps") = 1.0);
    m.def("rpe_constant", &theorem2_constant, py::arg("eps") = 1.0,
          "Expected cube RPE over expected section area under uniform cut parameters.");
    m.def(
        "rpe_constant_sampled",
        [](std::uint64_t samples, std::uint64_t seed) {
            const auto e = theorem2_constant_sampled(samples, seed);
            return py::make_tuple(e.value, e.std_error);
        },
        py::arg("samples") = 1'000'000, py::arg("seed") = 1);
    m.def("predicted_rpe", &predicted_rpe, py::arg("surface_area"), py::arg("region_edge"), py::arg("cube_count"),
          py::arg("q"));

    m.def(
        "plan_tour",
        [](const std::vector<Vec3>& points, const Vec3& start, int n_ants, int iterations, std::uint64_t seed) {
            AcoParams params;
            params.n_ants = n_ants;
            params.iterations = iterations;
            params.seed = seed;
            return tour_dict(plan_tour(waypoints(points, start), params));
        },
        py::arg("points"), py::arg("start") = Vec3{0, 0, 0}, py::arg("n_ants") = 20, py::arg("iterations") = 200,
        py::arg("seed") = 1);
    m.def(
        "nearest_neighbor_tour",
        [](const std::vector<Vec3>& points, const Vec3& start) {
            return tour_dict(nearest_neighbor_tour(waypoints(points, start)));
        },
        py::arg("points"), py::arg("start") = Vec3{0, 0, 0});
    m.def(
        "brute_force_tour",
        [](const std::vector<Vec3>& points, const Vec3& start) {
            return tour_dict(brute_force_tour(waypoints(points, start)));
        },
        py::arg("points"), py::arg("start") = Vec3{0, 0, 0});

    m.def(
        "run_som",
        [](const Scene& s, int n, int d0, const std::string& mode, std::uint64_t seed, bool plan_tours) {
            SomConfig cfg;
            cfg.d0 = d0;
            cfg.position_mode = mode_of(mode);
            cfg.seed = seed;
            cfg.plan_tours = plan_tours;
            const GridSpec grid = GridSpec::for_region(s.region_edge, n);
            const auto rec = run_som(s, grid, cfg);
            std::vector<std::size_t> per_round;
            for (const auto& r : rec.rounds) per_round.push_back(r.waypoints.size());
            std::vector<std::uint64_t> labels;
            labels.reserve(rec.map.labels.size());
            for (auto l : rec.map.labels) labels.push_back(l.value);
            py::dict d;
            d["measurements"] = rec.total_measurements;
            d["per_round"] = per_round;
            d["flight_distance"] = rec.flight_distance;
            d["labels"] = labels;
            d["recon_error"] = reconstruction_error(rec.map, ground_truth_map(s, grid, 9));
            return d;
        },
        py::arg("scene"), py::arg("n"), py::arg("d0"), py::arg("mode") = "center", py::arg("seed") = 1,
        py::arg("plan_tours") = true,
        "Adaptive measurement run. labels are indexed i + n*(j + n*k); recon_error is against volume-majority "
        "labels.");

    m.def(
        "measurement_bound",
        [](int n, int d, double surface_area, double region_edge) {
            const auto b = measurement_bound(n, d, surface_area, region_edge);
            return py::make_tuple(b.asymptotic, b.exact_lattice);
        },
        py::arg("n"), py::arg("d"), py::arg("surface_area"), py::arg("region_edge"),
        "Returns (asymptotic, exact_lattice).");

    m.def(
        "rpe_sweep", [](const std::string& path, unsigned jobs) { return rows_list(run_rpe_sweep(load_scenario(path), {jobs, {}})); },
        py::arg("scenario_path"), py::arg("jobs") = 1);
    m.def(
        "som_sweep", [](const std::string& path, unsigned jobs) { return rows_list(run_som_sweep(load_scenario(path), {jobs, {}})); },
        py::arg("scenario_path"), py::arg("jobs") = 1);
    m.def(
        "validate_scenario",
        [](const std::string& path) {
            const auto sc = load_scenario(path);
            return sc.id;
        },
        py::arg("scenario_path"), "Raises ValidationError listing every problem; returns the scenario id.");
}
