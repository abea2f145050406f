#pragma once

// Independent reference implementations: the fixed-weight iterative-deletion
// chain, exhaustive (k,t)-core enumeration for tiny instances, and the
// hand-built running-example fixture.

#include <optional>
#include <stdexcept>

#include "macs/gen.hpp"
#include "macs/ktcore.hpp"

namespace macs {

struct FixedWeightRanking {
    Weights w;
    std::vector<std::vector<int>> chain;  // largest -> smallest
    std::vector<double> scores;           // community score at w, per chain entry

    // non-contained MAC at w (empty when no core)
    std::vector<int> nc_mac() const {
        return chain.empty() ? std::vector<int>{} : chain.back();
    }
    // top-j: last entries, best first
    std::vector<std::vector<int>> top(int j) const {
        std::vector<std::vector<int>> out;
        for (int i = static_cast<int>(chain.size()) - 1; i >= 0 && static_cast<int>(out.size()) < j; --i)
            out.push_back(chain[static_cast<std::size_t>(i)]);
        return out;
    }
};

// Lemmas 4-6 instantiated at one weight vector: start from H_k^t and delete
// the smallest-score vertex until the early-termination conditions fire.
inline FixedWeightRanking oracle_chain_at(const RoadSocialNetwork& rsn,
                                          const std::vector<int>& Q, int k, double t,
                                          const Weights& w) {
    FixedWeightRanking r;
    r.w = w;
    auto core = maximal_kt_core(rsn, Q, k, t);
    if (!core) return r;
    Subgraph h = core->subgraph;
    const auto& X = rsn.social.attributes;
    for (;;) {
        auto ms = h.members();
        r.chain.push_back(ms);
        r.scores.push_back(community_score(ms, w, X).first);
        int victim = smallest_score_victim(ms, w, X);
        auto next = dfs_delete(h, victim, k, Q);
        if (!next) break;
        h = std::move(next->remaining);
    }
    return r;
}

// Exhaustive enumeration of connected k-cores containing Q with D_Q <= t.
// All such cores live inside H_k^t, so subsets of it are enumerated;
// refuses anything bigger than 15 members.
inline std::vector<std::vector<int>> oracle_enumerate(const RoadSocialNetwork& rsn,
                                                      const std::vector<int>& Q, int k,
                                                      double t) {
    auto core = maximal_kt_core(rsn, Q, k, t);
    std::vector<std::vector<int>> out;
    if (!core) return out;
    auto base = core->subgraph.members();
    const int n = static_cast<int>(base.size());
    if (n > 15) throw std::runtime_error("oracle_enumerate: instance exceeds the 15-member guard");
    std::vector<char> isq(static_cast<std::size_t>(rsn.social.n()), 0);
    for (int q : Q) isq[static_cast<std::size_t>(q)] = 1;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> sub;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) sub.push_back(base[static_cast<std::size_t>(i)]);
        bool allq = true;
        for (int q : Q) {
            bool found = false;
            for (int v : sub) found |= v == q;
            allq &= found;
        }
        if (!allq) continue;
        Subgraph s = Subgraph::of(rsn.social, sub);
        if (s.min_degree() < k || !s.connected()) continue;
        out.push_back(std::move(sub));
    }
    return out;
}

struct Fixture {
    RoadSocialNetwork rsn;
    Region region;               // [0.1,0.5] x [0.2,0.4]
    std::vector<int> Q;          // v2, v3, v6
    int k = 3;
    double t = 9;

    int v(int i) const { return rsn.social.find_vertex("v" + std::to_string(i)); }
    std::vector<int> vs(std::initializer_list<int> is) const {
        std::vector<int> out;
        for (int i : is) out.push_back(v(i));
        return out;
    }
};

// 14-vertex road-social instance realizing the worked example:
//   H_3^9 for Q={v2,v3,v6} is {v1..v7}; G_d leaves are {v7,v5,v1} with
//   v4 > v1 and v4,v5 structurally bound to each other; over
//   R=[0.1,0.5]x[0.2,0.4] the non-contained MACs are {v2,v3,v6,v7} and
//   {v2..v6}, picked apart by weights (0.19,0.3) vs (0.2,0.3).
inline Fixture build_running_example_fixture() {
    Fixture f;
    auto& road = f.rsn.road;
    auto& soc = f.rsn.social;

    struct RE { const char *u, *v; double w; };
    const RE road_edges[] = {
        {"r3", "r2", 4}, {"r2", "r6", 5}, {"r2", "r7", 2}, {"r1", "r2", 3},
        {"r4", "r2", 1}, {"r5", "r2", 2}, {"r6", "r8", 20}, {"r8", "r9", 1},
        {"r9", "r10", 1}, {"r10", "r11", 1}, {"r11", "r12", 1}, {"r12", "r13", 1},
        {"r13", "r14", 1}, {"r14", "r8", 2},
    };
    for (const auto& e : road_edges) road.add_edge(road.vertex(e.u), road.vertex(e.v), e.w);

    struct SE { int u, v; };
    const SE soc_edges[] = {
        {2, 3}, {2, 6}, {2, 7}, {3, 6}, {3, 7}, {6, 7},   // K4 on v2,v3,v6,v7
        {4, 5}, {4, 2}, {4, 3},
        {5, 6}, {5, 2},
        {1, 7}, {1, 2}, {1, 3},
        {8, 9}, {9, 10}, {10, 11}, {11, 12}, {12, 8},     // outer cycle
        {13, 12}, {13, 8}, {14, 9},                        // v14 pendant on v9
        {7, 8}, {1, 10},
    };
    auto sv = [&](int i) { return soc.vertex("v" + std::to_string(i)); };
    for (int i = 1; i <= 14; ++i) sv(i);
    for (const auto& e : soc_edges) soc.add_edge(sv(e.u), sv(e.v));

    // Attributes chosen so the score functions S_i(w) = c + a*w1 + b*w2
    // realize the dominance relation {v2>v3, v6>v3, v3>v7, v4>v1} (closure
    // adds v2>v7, v6>v7) with every other pair r-incomparable over R, and
    // the example weight points behave as quoted.
    const double attrs[][3] = {
        {7.015, 3.565, 4.015},   // v1
        {5.4, 5.5, 4.2},         // v2
        {5.27, 5.27, 4.07},      // v3
        {7.019, 3.569, 4.019},   // v4
        {5.945, 4.695, 3.945},   // v5
        {5.33, 5.29, 4.29},      // v6
        {4.97, 4.97, 3.97},      // v7  (S = 4.47 at w = (0.2, 0.3))
        {2.1, 1.3, 0.7},         // v8
        {1.5, 2.2, 0.9},         // v9
        {0.8, 1.1, 2.3},         // v10
        {1.9, 0.6, 1.4},         // v11
        {1.2, 1.8, 1.1},         // v12
        {0.5, 0.9, 1.6},         // v13
        {1.0, 1.0, 1.0},         // v14
    };
    soc.d = 3;
    soc.attributes.resize(14);
    soc.locations.resize(14);
    for (int i = 1; i <= 14; ++i) {
        soc.attributes[static_cast<std::size_t>(sv(i))] =
            {attrs[i - 1][0], attrs[i - 1][1], attrs[i - 1][2]};
        int r = road.find_vertex("r" + std::to_string(i));
        soc.locations[static_cast<std::size_t>(sv(i))] = Location::at_vertex(r);
    }

    f.region = Region::rectangle({0.1, 0.2}, {0.5, 0.4});
    f.Q = {sv(2), sv(3), sv(6)};
    validate(f.rsn);

    // construction-time checks against the quoted constraints
    auto d76 = network_distance(road, soc.locations[static_cast<std::size_t>(sv(7))],
                                soc.locations[static_cast<std::size_t>(sv(6))]);
    auto d36 = network_distance(road, soc.locations[static_cast<std::size_t>(sv(3))],
                                soc.locations[static_cast<std::size_t>(sv(6))]);
    if (d76 != 7.0 || d36 != 9.0)
        throw std::logic_error("fixture: road distances off the quoted values");
    auto core = maximal_kt_core(f.rsn, f.Q, f.k, f.t);
    if (!core || core->subgraph.count != 7)
        throw std::logic_error("fixture: H_3^9 is not {v1..v7}");
    for (int i = 1; i <= 7; ++i)
        if (!core->subgraph.contains(sv(i)))
            throw std::logic_error("fixture: H_3^9 is not {v1..v7}");
    return f;
}

}  // namespace macs
