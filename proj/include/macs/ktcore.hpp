#pragma once

// Network distances on the road graph, the query-distance filter, the
// maximal (k,t)-core, and the cascading deletion primitive both search
// engines are built on.

#include <limits>
#include <optional>
#include <queue>

#include "macs/core.hpp"
#include "macs/network.hpp"

namespace macs {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest distance from `src` to every road vertex, pruned beyond `bound`.
inline std::vector<double> road_distances(const RoadNetwork& road, const Location& src,
                                          double bound = kInf) {
    std::vector<double> dist(static_cast<std::size_t>(road.n()), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    auto seed = [&](int v, double d) {
        if (d <= bound && d < dist[static_cast<std::size_t>(v)]) {
            dist[static_cast<std::size_t>(v)] = d;
            pq.emplace(d, v);
        }
    };
    if (src.on_vertex()) {
        seed(src.edge_u, 0.0);
    } else {
        int e = road.find_edge(src.edge_u, src.edge_v);
        double w = road.edges[static_cast<std::size_t>(e)].weight;
        seed(src.edge_u, src.offset);
        seed(src.edge_v, w - src.offset);
    }
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[static_cast<std::size_t>(v)]) continue;
        for (int e : road.incident[static_cast<std::size_t>(v)]) {
            const auto& ed = road.edges[static_cast<std::size_t>(e)];
            int u = ed.u == v ? ed.v : ed.u;
            seed(u, d + ed.weight);
        }
    }
    return dist;
}

inline double location_distance(const std::vector<double>& vertex_dist,
                                const RoadNetwork& road, const Location& dst) {
    if (dst.on_vertex()) return vertex_dist[static_cast<std::size_t>(dst.edge_u)];
    int e = road.find_edge(dst.edge_u, dst.edge_v);
    double w = road.edges[static_cast<std::size_t>(e)].weight;
    return std::min(vertex_dist[static_cast<std::size_t>(dst.edge_u)] + dst.offset,
                    vertex_dist[static_cast<std::size_t>(dst.edge_v)] + (w - dst.offset));
}

// Exact shortest-path cost between two spatial points; +inf if disconnected.
inline double network_distance(const RoadNetwork& road, const Location& p,
                               const Location& p2) {
    if (p.same_point(p2, road)) return 0.0;
    auto dist = road_distances(road, p);
    double best = location_distance(dist, road, p2);
    // both interior on the same edge: the direct segment may beat any
    // path through the endpoints
    if (!p.on_vertex() && !p2.on_vertex()) {
        int e1 = road.find_edge(p.edge_u, p.edge_v);
        int e2 = road.find_edge(p2.edge_u, p2.edge_v);
        if (e1 == e2) {
            double o1 = p.offset, o2 = p2.offset;
            if (p.edge_u != p2.edge_u)
                o2 = road.edges[static_cast<std::size_t>(e2)].weight - o2;
            best = std::min(best, std::abs(o1 - o2));
        }
    }
    return best;
}

// Query distance of every social vertex: D_Q(v) = max_q dist(L(v), L(q)).
inline std::vector<double> query_distances(const RoadSocialNetwork& rsn,
                                           const std::vector<int>& Q, double t = kInf) {
    const auto& soc = rsn.social;
    std::vector<double> dq(static_cast<std::size_t>(soc.n()), 0.0);
    if (Q.empty()) throw std::invalid_argument("query_distances: empty Q");
    for (int q : Q) {
        const Location& lq = soc.locations[static_cast<std::size_t>(q)];
        auto vd = road_distances(rsn.road, lq, t);
        for (int v = 0; v < soc.n(); ++v) {
            const Location& lv = soc.locations[static_cast<std::size_t>(v)];
            double d = lv.same_point(lq, rsn.road)
                           ? 0.0
                           : location_distance(vd, rsn.road, lv);
            if (!lv.on_vertex() && !lq.on_vertex()) {
                int e1 = rsn.road.find_edge(lv.edge_u, lv.edge_v);
                int e2 = rsn.road.find_edge(lq.edge_u, lq.edge_v);
                if (e1 == e2) {
                    double o1 = lv.offset, o2 = lq.offset;
                    if (lv.edge_u != lq.edge_u)
                        o2 = rsn.road.edges[static_cast<std::size_t>(e2)].weight - o2;
                    d = std::min(d, std::abs(o1 - o2));
                }
            }
            dq[static_cast<std::size_t>(v)] = std::max(dq[static_cast<std::size_t>(v)], d);
        }
    }
    return dq;
}

// Lemma: vertices with query distance beyond t can sit in no result.
inline std::vector<int> query_distance_filter(const RoadSocialNetwork& rsn,
                                              const std::vector<int>& Q, double t) {
    auto dq = query_distances(rsn, Q, t);
    std::vector<int> keep;
    for (int v = 0; v < rsn.social.n(); ++v)
        if (dq[static_cast<std::size_t>(v)] <= t) keep.push_back(v);
    return keep;
}

struct KTCore {
    Subgraph subgraph;
    int k = 0;
    double t = 0;
    std::vector<int> Q;
    std::vector<double> query_distance;  // D_Q per parent vertex, valid for members

    const std::vector<int> members() const { return subgraph.members(); }
};

// Filter by query distance, peel to the maximal k-core, keep Q's component.
// Returns nullopt when no (k,t)-core exists (a normal outcome, not an error).
inline std::optional<KTCore> maximal_kt_core(const RoadSocialNetwork& rsn,
                                             const std::vector<int>& Q, int k, double t) {
    if (Q.empty()) throw std::invalid_argument("maximal_kt_core: empty Q");
    auto dq = query_distances(rsn, Q, t);
    std::vector<int> kept;
    for (int v = 0; v < rsn.social.n(); ++v)
        if (dq[static_cast<std::size_t>(v)] <= t) kept.push_back(v);
    Subgraph g = Subgraph::of(rsn.social, kept);
    for (int q : Q)
        if (!g.contains(q)) return std::nullopt;

    long long n = g.count, m = 0;
    for (int v : kept) m += g.degree[static_cast<std::size_t>(v)];
    m /= 2;
    if (k > coreness_upper_bound(n, m)) return std::nullopt;

    peel_to_kcore(g, k);
    for (int q : Q)
        if (!g.contains(q)) return std::nullopt;
    auto comp = g.component_of(Q[0]);
    std::vector<char> incomp(static_cast<std::size_t>(rsn.social.n()), 0);
    for (int v : comp) incomp[static_cast<std::size_t>(v)] = 1;
    for (int q : Q)
        if (!incomp[static_cast<std::size_t>(q)]) return std::nullopt;
    Subgraph h = Subgraph::of(rsn.social, comp);
    if (h.count == 0 || h.min_degree() < k) return std::nullopt;

    KTCore core;
    core.subgraph = std::move(h);
    core.k = k;
    core.t = t;
    core.Q = Q;
    core.query_distance = std::move(dq);
    return core;
}

struct DeleteResult {
    Subgraph remaining;
    std::vector<int> deleted;
};

// Removes u, cascades removals of vertices whose induced degree drops below
// k, then restricts to Q's component. nullopt = early termination: u in Q,
// or the cascade would delete or disconnect Q (the input is left untouched).
inline std::optional<DeleteResult> dfs_delete(const Subgraph& h, int u, int k,
                                              const std::vector<int>& Q) {
    for (int q : Q)
        if (q == u) return std::nullopt;
    Subgraph g = h;
    std::queue<int> cas;
    cas.push(u);
    while (!cas.empty()) {
        int v = cas.front();
        cas.pop();
        if (!g.contains(v)) continue;
        g.remove(v);
        for (int w : g.parent->adj[static_cast<std::size_t>(v)])
            if (g.contains(w) && g.degree[static_cast<std::size_t>(w)] < k) cas.push(w);
    }
    for (int q : Q)
        if (!g.contains(q)) return std::nullopt;
    auto comp = g.component_of(Q[0]);
    std::vector<char> incomp(g.in.size(), 0);
    for (int v : comp) incomp[static_cast<std::size_t>(v)] = 1;
    for (int q : Q)
        if (!incomp[static_cast<std::size_t>(q)]) return std::nullopt;

    DeleteResult res;
    res.remaining = Subgraph::of(*h.parent, comp);
    for (int v = 0; v < h.parent->n(); ++v)
        if (h.contains(v) && !res.remaining.contains(v)) res.deleted.push_back(v);
    return res;
}

}  // namespace macs
