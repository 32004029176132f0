#include "som3d/aco_router.hpp"

#include "som3d/error.hpp"
#include "som3d/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace som3d {

void WaypointSet::validate() const {
    if (points.empty()) throw ValidationError("waypoint set is empty");
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return std::tuple(points[i].x, points[i].y, points[i].z); };
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return key(a) < key(b); });
    for (std::size_t i = 1; i < idx.size(); ++i) {
        if (points[idx[i]] == points[idx[i - 1]]) throw ValidationError("waypoint set contains duplicate points");
    }
    for (const auto& p : points) {
        if (!p.finite()) throw ValidationError("waypoints must be finite");
    }
    if (!start.finite()) throw ValidationError("tour start must be finite");
}

void AcoParams::validate() const {
    std::vector<std::string> problems;
    if (n_ants < 1) problems.emplace_back("n_ants must be >= 1");
    if (!(alpha_pher > 0.0)) problems.emplace_back("alpha_pher must be positive");
    if (!(beta_heur > 0.0)) problems.emplace_back("beta_heur must be positive");
    if (!(rho > 0.0 && rho < 1.0)) problems.emplace_back("rho must lie in (0, 1)");
    if (!(deposit > 0.0)) problems.emplace_back("deposit must be positive");
    if (iterations < 1) problems.emplace_back("iterations must be >= 1");
    if (candidates < 1) problems.emplace_back("candidates must be >= 1");
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

double tour_length(const std::vector<std::size_t>& order, const WaypointSet& ws) {
    const std::size_t n = ws.points.size();
    if (order.size() != n) throw std::invalid_argument("tour order is not a permutation of the waypoints");
    std::vector<char> seen(n, 0);
    for (auto i : order) {
        if (i >= n || seen[i]) throw std::invalid_argument("tour order is not a permutation of the waypoints");
        seen[i] = 1;
    }
    double total = 0.0;
    Point3 at = ws.start;
    for (auto i : order) {
        total += distance(at, ws.points[i]);
        at = ws.points[i];
    }
    return total;
}

namespace {

Tour make_tour(std::vector<std::size_t> order, const WaypointSet& ws) {
    Tour t;
    t.length = tour_length(order, ws);
    t.start = ws.start;
    t.end = order.empty() ? ws.start : ws.points[order.back()];
    t.order = std::move(order);
    return t;
}

// Pheromone and heuristic weights on the k nearest neighbours of each node.
// Node n (one past the last waypoint) is the start point.
struct CandidateGraph {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::size_t> to;  // (n + 1) * k
    std::vector<double> dist;
    std::vector<double> heuristic;  // (1/d)^beta
    std::vector<double> tau;

    Point3 node(const WaypointSet& ws, std::size_t i) const { return i == n ? ws.start : ws.points[i]; }

    CandidateGraph(const WaypointSet& ws, std::size_t per_node, double beta) : n(ws.points.size()) {
        k = std::min(per_node, n);
        to.assign((n + 1) * k, 0);
        dist.assign((n + 1) * k, 0.0);
        heuristic.assign((n + 1) * k, 0.0);
        std::vector<std::pair<double, std::size_t>> scratch;
        for (std::size_t i = 0; i <= n; ++i) {
            scratch.clear();
            const Point3 p = node(ws, i);
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) scratch.emplace_back(distance(p, ws.points[j]), j);
            }
            const std::size_t take = std::min(k, scratch.size());
            std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(take), scratch.end());
            for (std::size_t c = 0; c < k; ++c) {
                // Rows shorter than k (only possible for the k == n case) repeat
                // their last entry with zero weight.
                const auto& [d, j] = scratch[std::min(c, take - 1)];
                to[i * k + c] = j;
                dist[i * k + c] = d;
                heuristic[i * k + c] = c < take ? std::pow(1.0 / std::max(d, 1e-12), beta) : 0.0;
            }
        }
    }

    double* tau_of(std::size_t from, std::size_t target) {
        for (std::size_t c = 0; c < k; ++c) {
            if (to[from * k + c] == target && heuristic[from * k + c] > 0.0) return &tau[from * k + c];
        }
        return nullptr;
    }
};

// First-improvement 2-opt for an open path with a fixed start, scanning
// only candidate neighbours. Position -1 stands for the start point.
void two_opt(std::vector<std::size_t>& order, const WaypointSet& ws, const CandidateGraph& graph) {
    const long n = static_cast<long>(order.size());
    if (n < 2) return;
    std::vector<long> pos(order.size());
    for (long i = 0; i < n; ++i) pos[order[static_cast<std::size_t>(i)]] = i;
    auto at = [&](long i) { return i < 0 ? ws.start : ws.points[order[static_cast<std::size_t>(i)]]; };
    auto d = [&](long i, long j) { return distance(at(i), at(j)); };
    auto reverse = [&](long lo, long hi) {
        std::reverse(order.begin() + lo, order.begin() + hi + 1);
        for (long i = lo; i <= hi; ++i) pos[order[static_cast<std::size_t>(i)]] = i;
    };
    // Gain of reversing positions lo..hi, which joins lo-1 to hi and lo to hi+1.
    auto gain = [&](long lo, long hi) {
        double g = d(lo - 1, lo) - d(lo - 1, hi);
        if (hi + 1 < n) g += d(hi, hi + 1) - d(lo, hi + 1);
        return g;
    };
    double scale = 0.0;
    for (long i = 0; i < n; ++i) scale = std::max(scale, d(i - 1, i));
    const double tiny = 1e-12 * std::max(scale, 1e-300);

    for (int pass = 0; pass < 1000; ++pass) {
        bool improved = false;
        for (long i = -1; i < n; ++i) {
            const std::size_t row = (i < 0 ? graph.n : order[static_cast<std::size_t>(i)]) * graph.k;
            for (std::size_t c = 0; c < graph.k; ++c) {
                if (graph.heuristic[row + c] <= 0.0) continue;
                const long j = pos[graph.to[row + c]];
                long lo = 0;
                long hi = 0;
                if (j > i + 1) {
                    lo = i + 1;
                    hi = j;
                } else if (j < i - 1 && i >= 0) {
                    lo = j + 1;
                    hi = i;
                } else {
                    continue;
                }
                if (gain(lo, hi) > tiny) {
                    reverse(lo, hi);
                    improved = true;
                    break;
                }
            }
        }
        // Reversing the tail makes the path end elsewhere; no neighbour list
        // covers that move.
        for (long i = -1; i < n - 2; ++i) {
            if (d(i, i + 1) - d(i, n - 1) > tiny) {
                reverse(i + 1, n - 1);
                improved = true;
            }
        }
        if (!improved) break;
    }
}

}  // namespace

Tour nearest_neighbor_tour(const WaypointSet& ws) {
    ws.validate();
    const std::size_t n = ws.points.size();
    std::vector<char> used(n, 0);
    std::vector<std::size_t> order;
    order.reserve(n);
    Point3 at = ws.start;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = squared_distance(at, ws.points[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        used[best] = 1;
        order.push_back(best);
        at = ws.points[best];
    }
    return make_tour(std::move(order), ws);
}

Tour brute_force_tour(const WaypointSet& ws) {
    ws.validate();
    const std::size_t n = ws.points.size();
    if (n > kBruteForceLimit) throw std::invalid_argument("brute_force_tour: at most 10 waypoints");

    std::vector<std::size_t> path;
    std::vector<std::size_t> best_path;
    std::vector<char> used(n, 0);
    double best = std::numeric_limits<double>::infinity();

    // Depth-first enumeration in lexicographic order, pruning partial paths
    // that already match or exceed the incumbent.
    auto search = [&](auto&& self, Point3 at, double so_far) -> void {
        if (so_far >= best) return;
        if (path.size() == n) {
            best = so_far;
            best_path = path;
            return;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            path.push_back(j);
            self(self, ws.points[j], so_far + distance(at, ws.points[j]));
            path.pop_back();
            used[j] = 0;
        }
    };
    search(search, ws.start, 0.0);
    return make_tour(std::move(best_path), ws);
}

Tour plan_tour(const WaypointSet& ws, const AcoParams& params) {
    ws.validate();
    params.validate();
    const std::size_t n = ws.points.size();
    if (n == 1) return make_tour({0}, ws);

    CandidateGraph graph(ws, static_cast<std::size_t>(params.candidates), params.beta_heur);
    const std::size_t k = graph.k;
    const double nn_length = nearest_neighbor_tour(ws).length;
    const double tau0 = 1.0 / (static_cast<double>(n) * std::max(nn_length, 1e-12));
    graph.tau.assign((n + 1) * k, tau0);
    double tau_outside = tau0;  // shared trail level on non-candidate edges

    auto weight_of = [&](double tau) { return params.alpha_pher == 1.0 ? tau : std::pow(tau, params.alpha_pher); };

    std::vector<double> weights((n + 1) * k);
    std::vector<double> scratch(k);
    std::vector<std::size_t> unvisited;
    std::vector<std::size_t> slot(n);
    std::vector<std::size_t> path;
    path.reserve(n);

    std::vector<std::size_t> best_path;
    double best_len = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> iter_best;

    for (int iter = 0; iter < params.iterations; ++iter) {
        for (std::size_t e = 0; e < weights.size(); ++e) weights[e] = weight_of(graph.tau[e]) * graph.heuristic[e];
        const double outside_weight = weight_of(tau_outside);
        double iter_len = std::numeric_limits<double>::infinity();

        for (int ant = 0; ant < params.n_ants; ++ant) {
            Rng rng(derive_seed(params.seed, {static_cast<std::uint64_t>(iter), static_cast<std::uint64_t>(ant)}));
            unvisited.resize(n);
            std::iota(unvisited.begin(), unvisited.end(), std::size_t{0});
            std::iota(slot.begin(), slot.end(), std::size_t{0});
            auto visit = [&](std::size_t j) {
                const std::size_t pos = slot[j];
                const std::size_t last = unvisited.back();
                unvisited[pos] = last;
                slot[last] = pos;
                unvisited.pop_back();
                path.push_back(j);
            };

            path.clear();
            std::size_t cur = n;
            double len = 0.0;
            while (!unvisited.empty()) {
                const std::size_t row = cur * k;
                double total = 0.0;
                for (std::size_t c = 0; c < k; ++c) {
                    const std::size_t j = graph.to[row + c];
                    const bool open = slot[j] < unvisited.size() && unvisited[slot[j]] == j;
                    scratch[c] = open ? weights[row + c] : 0.0;
                    total += scratch[c];
                }
                std::size_t next = n;
                if (total > 0.0) {
                    double pick = uniform01(rng) * total;
                    for (std::size_t c = 0; c < k; ++c) {
                        if (scratch[c] <= 0.0) continue;
                        next = graph.to[row + c];
                        pick -= scratch[c];
                        if (pick <= 0.0) break;
                    }
                } else {
                    // Every candidate is used: roulette over the remaining
                    // cities with the shared off-list trail level.
                    const Point3 at = graph.node(ws, cur);
                    double sum = 0.0;
                    std::vector<double>& w = scratch;
                    w.resize(std::max(k, unvisited.size()));
                    for (std::size_t u = 0; u < unvisited.size(); ++u) {
                        const double d = std::max(distance(at, ws.points[unvisited[u]]), 1e-12);
                        w[u] = outside_weight * std::pow(1.0 / d, params.beta_heur);
                        sum += w[u];
                    }
                    double pick = uniform01(rng) * sum;
                    next = unvisited.back();
                    for (std::size_t u = 0; u < unvisited.size(); ++u) {
                        pick -= w[u];
                        if (pick <= 0.0) {
                            next = unvisited[u];
                            break;
                        }
                    }
                    w.resize(k);
                }
                len += distance(graph.node(ws, cur), ws.points[next]);
                visit(next);
                cur = next;
            }
            if (len < iter_len) {
                iter_len = len;
                iter_best = path;
            }
        }

        two_opt(iter_best, ws, graph);
        iter_len = tour_length(iter_best, ws);
        if (iter_len < best_len) {
            best_len = iter_len;
            best_path = iter_best;
        }

        for (auto& t : graph.tau) t *= 1.0 - params.rho;
        tau_outside *= 1.0 - params.rho;
        const double amount = params.deposit / std::max(iter_len, 1e-12);
        std::size_t from = n;
        for (std::size_t j : iter_best) {
            if (double* t = graph.tau_of(from, j)) *t += amount;
            if (from != n) {
                if (double* t = graph.tau_of(j, from)) *t += amount;
            }
            from = j;
        }
    }
    return make_tour(std::move(best_path), ws);
}

}  // namespace som3d
