#pragma once

// Shared helpers for the unit and acceptance suites: small random
// road-social instances and a few graph builders.

#include <random>

#include "macs/macs.hpp"

namespace testsupport {

using namespace macs;

struct RandomInstance {
    RoadSocialNetwork rsn;
    std::vector<int> Q;
    int k = 0;
    double t = 0;
    Region region;
};

// Draws instances until one admits a (k,t)-core of at least k+2 members.
inline std::optional<RandomInstance> draw_instance(std::mt19937_64& rng, int max_n = 40,
                                                   int max_d = 3) {
    GenSpec spec;
    std::uniform_int_distribution<int> nd(8, max_n), dd(2, max_d), gw(3, 6);
    spec.n_social = nd(rng);
    spec.d = dd(rng);
    spec.grid_width = gw(rng);
    spec.grid_height = gw(rng);
    std::uniform_real_distribution<double> avg(3.0, 7.0);
    spec.avg_degree = avg(rng);
    spec.seed = rng();
    spec.mode = AttrMode::Independent;
    RandomInstance inst;
    inst.rsn = generate_road_social(spec);

    std::uniform_int_distribution<int> kd(2, 4), qn(1, 3), qv(0, spec.n_social - 1);
    inst.k = kd(rng);
    std::uniform_real_distribution<double> td(2.0, 8.0);
    inst.t = td(rng);
    int nq = qn(rng);
    for (int i = 0; i < nq; ++i) inst.Q.push_back(qv(rng));
    std::sort(inst.Q.begin(), inst.Q.end());
    inst.Q.erase(std::unique(inst.Q.begin(), inst.Q.end()), inst.Q.end());

    int dim = spec.d - 1;
    Weights lo(static_cast<std::size_t>(dim)), hi(static_cast<std::size_t>(dim));
    double sum_hi = 0;
    for (int i = 0; i < dim; ++i) {
        std::uniform_real_distribution<double> lod(0.05, 0.45), wd(0.05, 0.3);
        lo[static_cast<std::size_t>(i)] = lod(rng);
        hi[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)] + wd(rng);
        sum_hi += hi[static_cast<std::size_t>(i)];
    }
    if (sum_hi >= 0.95) return std::nullopt;
    inst.region = Region::rectangle(lo, hi);

    auto core = maximal_kt_core(inst.rsn, inst.Q, inst.k, inst.t);
    if (!core || core->subgraph.count < inst.k + 2) return std::nullopt;
    return inst;
}

// social-only instance: every vertex co-located on one road vertex, so the
// distance budget never filters
inline RoadSocialNetwork plain_social(const std::vector<std::pair<int, int>>& edges, int n,
                                      int d = 2) {
    RoadSocialNetwork rsn;
    int r0 = rsn.road.vertex("r0");
    int r1 = rsn.road.vertex("r1");
    rsn.road.add_edge(r0, r1, 1.0);
    for (int i = 0; i < n; ++i) rsn.social.vertex("v" + std::to_string(i));
    for (auto [u, v] : edges) rsn.social.add_edge(u, v);
    rsn.social.d = d;
    rsn.social.locations.assign(static_cast<std::size_t>(n), Location::at_vertex(r0));
    rsn.social.attributes.assign(static_cast<std::size_t>(n),
                                 std::vector<double>(static_cast<std::size_t>(d), 0.0));
    std::mt19937_64 arng(12345);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (auto& row : rsn.social.attributes)
        for (auto& x : row) x = u01(arng);
    return rsn;
}

inline std::vector<std::pair<int, int>> complete_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return e;
}

inline std::vector<std::pair<int, int>> random_graph(int n, double p, std::mt19937_64& rng) {
    std::vector<std::pair<int, int>> e;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u01(rng) < p) e.emplace_back(i, j);
    return e;
}

}  // namespace testsupport
