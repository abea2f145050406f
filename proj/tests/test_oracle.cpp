#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "macs/oracle.hpp"
#include "test_support.hpp"

using namespace macs;
using namespace testsupport;

TEST_CASE("oracle chain basics") {
    SECTION("all-query clique yields a single-entry chain") {
        auto rsn = plain_social(complete_graph(4), 4);
        auto r = oracle_chain_at(rsn, {0, 1, 2, 3}, 3, kInf, {0.3});
        REQUIRE(r.chain.size() == 1);
        CHECK(r.chain[0] == std::vector<int>{0, 1, 2, 3});
    }
    SECTION("cycle plus one low-score appendage gives chain length 2") {
        // 5-cycle 0..4, vertex 5 attached to 0 and 1; k = 2
        auto rsn = plain_social({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {5, 0}, {5, 1}}, 6);
        for (int v = 0; v < 5; ++v) rsn.social.attributes[static_cast<std::size_t>(v)] = {0.8, 0.8};
        rsn.social.attributes[5] = {0.1, 0.1};
        auto r = oracle_chain_at(rsn, {2}, 2, kInf, {0.4});
        REQUIRE(r.chain.size() == 2);
        CHECK(r.chain[0].size() == 6);
        CHECK(r.chain[1] == std::vector<int>{0, 1, 2, 3, 4});
    }
    SECTION("chain is strictly nested with non-increasing scores") {
        std::mt19937_64 rng(606);
        int done = 0;
        for (int trial = 0; trial < 60 && done < 15; ++trial) {
            auto inst = draw_instance(rng);
            if (!inst) continue;
            ++done;
            auto w = inst->region.sample(rng);
            auto r = oracle_chain_at(inst->rsn, inst->Q, inst->k, inst->t, w);
            REQUIRE(!r.chain.empty());
            for (std::size_t i = 1; i < r.chain.size(); ++i) {
                CHECK(r.chain[i].size() < r.chain[i - 1].size());
                for (int v : r.chain[i])
                    CHECK(std::find(r.chain[i - 1].begin(), r.chain[i - 1].end(), v) !=
                          r.chain[i - 1].end());
                CHECK(r.scores[i] >= r.scores[i - 1] - 1e-12);
            }
        }
        CHECK(done == 15);
    }
    SECTION("no core gives an empty chain") {
        auto rsn = plain_social({{0, 1}}, 2);
        auto r = oracle_chain_at(rsn, {0}, 3, kInf, {0.4});
        CHECK(r.chain.empty());
        CHECK(r.nc_mac().empty());
    }
}

TEST_CASE("oracle enumeration") {
    SECTION("K4 at k=3 is its only core") {
        auto rsn = plain_social(complete_graph(4), 4);
        auto all = oracle_enumerate(rsn, {0}, 3, kInf);
        REQUIRE(all.size() == 1);
        CHECK(all[0] == std::vector<int>{0, 1, 2, 3});
    }
    SECTION("path at k=1 enumerates connected supersets") {
        auto rsn = plain_social({{0, 1}, {1, 2}}, 3);
        auto all = oracle_enumerate(rsn, {1}, 1, kInf);
        std::vector<std::vector<int>> expect{{0, 1}, {0, 1, 2}, {1, 2}};
        std::sort(all.begin(), all.end());
        CHECK(all == expect);
    }
    SECTION("guard above 15 members") {
        auto rsn = plain_social(complete_graph(16), 16);
        CHECK_THROWS(oracle_enumerate(rsn, {0}, 3, kInf));
    }
    SECTION("every chain community appears in the enumeration") {
        std::mt19937_64 rng(7007);
        int done = 0;
        for (int trial = 0; trial < 200 && done < 8; ++trial) {
            auto inst = draw_instance(rng, 14);
            if (!inst) continue;
            auto core = maximal_kt_core(inst->rsn, inst->Q, inst->k, inst->t);
            if (!core || core->subgraph.count > 12) continue;
            ++done;
            auto all = oracle_enumerate(inst->rsn, inst->Q, inst->k, inst->t);
            std::sort(all.begin(), all.end());
            for (int i = 0; i < 20; ++i) {
                auto w = inst->region.sample(rng);
                auto r = oracle_chain_at(inst->rsn, inst->Q, inst->k, inst->t, w);
                for (const auto& comm : r.chain)
                    CHECK(std::binary_search(all.begin(), all.end(), comm));
                // the NC-MAC is subset-minimal among max-score cores at w
                if (!r.chain.empty()) {
                    auto nc = r.nc_mac();
                    for (const auto& other : all) {
                        if (other.size() >= nc.size()) continue;
                        bool subset = std::includes(nc.begin(), nc.end(), other.begin(), other.end());
                        if (!subset) continue;
                        auto so = community_score(other, w, inst->rsn.social.attributes).first;
                        auto sn = community_score(nc, w, inst->rsn.social.attributes).first;
                        CHECK(so <= sn + 1e-12);
                    }
                }
            }
        }
        CHECK(done == 8);
    }
}

TEST_CASE("running example fixture satisfies the quoted constraints") {
    auto f = build_running_example_fixture();
    const auto& soc = f.rsn.social;

    SECTION("road distances") {
        auto loc = [&](int i) { return soc.locations[static_cast<std::size_t>(f.v(i))]; };
        CHECK(network_distance(f.rsn.road, loc(7), loc(6)) == 7.0);
        CHECK(network_distance(f.rsn.road, loc(3), loc(6)) == 9.0);
        // D_Q(v7) is attained at r6
        auto dq = query_distances(f.rsn, f.Q, kInf);
        CHECK(dq[static_cast<std::size_t>(f.v(7))] == 7.0);
    }
    SECTION("H_3^9 is v1..v7") {
        auto core = maximal_kt_core(f.rsn, f.Q, 3, 9);
        REQUIRE(core);
        auto ms = core->subgraph.members();
        CHECK(ms == f.vs({1, 2, 3, 4, 5, 6, 7}));
        // D_Q(H) attained by dist(r3, r6) = 9
        double worst = 0;
        for (int v : ms)
            worst = std::max(worst, core->query_distance[static_cast<std::size_t>(v)]);
        CHECK(worst == 9.0);
    }
    SECTION("the four quoted subgraphs are 3-cores") {
        for (auto ids : {std::vector<int>{2, 3, 6, 7}, {2, 3, 4, 5, 6}, {2, 3, 4, 5, 6, 7},
                         {1, 2, 3, 4, 5, 6, 7}}) {
            std::vector<int> vs;
            for (int i : ids) vs.push_back(f.v(i));
            Subgraph s = Subgraph::of(soc, vs);
            CHECK(s.min_degree() >= 3);
            CHECK(s.connected());
        }
    }
    SECTION("dominance graph shape") {
        auto core = maximal_kt_core(f.rsn, f.Q, 3, 9);
        auto gd = build_rdominance_graph(*core, f.region, soc.attributes);
        auto leaves = gd.leaves();
        std::sort(leaves.begin(), leaves.end());
        CHECK(leaves == f.vs({1, 5, 7}));
        CHECK(gd.dominates(f.v(4), f.v(1)));
        // transitivity carries v2,v6 over v3 to v7; no direct arcs stored
        CHECK(gd.dominates(f.v(2), f.v(7)));
        CHECK(gd.dominates(f.v(6), f.v(7)));
        std::vector<std::pair<int, int>> expect{{f.v(2), f.v(3)}, {f.v(3), f.v(7)},
                                                {f.v(4), f.v(1)}, {f.v(6), f.v(3)}};
        std::sort(expect.begin(), expect.end());
        CHECK(gd.arcs() == expect);
    }
    SECTION("v4 and v5 are mutually bound") {
        auto core = maximal_kt_core(f.rsn, f.Q, 3, 9);
        auto gd = build_rdominance_graph(*core, f.region, soc.attributes);
        auto h1 = f.vs({2, 3, 6, 7});
        auto b4 = detect_bound(gd, h1, f.v(4), 3, soc);
        CHECK(b4.status == BoundStatus::MutuallyBound);
        CHECK(b4.partner == f.v(5));
        auto b5 = detect_bound(gd, h1, f.v(5), 3, soc);
        CHECK(b5.status == BoundStatus::MutuallyBound);
        CHECK(b5.partner == f.v(4));
    }
    SECTION("oracle picks the example communities at the quoted weights") {
        auto r1 = oracle_chain_at(f.rsn, f.Q, 3, 9, {0.19, 0.3});
        CHECK(r1.nc_mac() == f.vs({2, 3, 6, 7}));
        auto r2 = oracle_chain_at(f.rsn, f.Q, 3, 9, {0.2, 0.3});
        CHECK(r2.nc_mac() == f.vs({2, 3, 4, 5, 6}));
        // Example 2 top-2 in H1's cell
        auto top = r1.top(2);
        REQUIRE(top.size() == 2);
        CHECK(top[0] == f.vs({2, 3, 6, 7}));
        CHECK(top[1] == f.vs({2, 3, 4, 5, 6, 7}));
    }
    SECTION("frozen data files reproduce the builder") {
        std::string dir = std::string(MACS_DATA_DIR) + "/running_example";
        RoadSocialNetwork loaded;
        loaded.road = load_road_network(dir + "/road.tsv");
        loaded.social = load_social_network(dir + "/social.tsv", dir + "/attrs.tsv",
                                            dir + "/locations.tsv", loaded.road);
        CHECK(loaded.social.attributes == soc.attributes);
        CHECK(loaded.social.edges == soc.edges);
        CHECK(loaded.road.edges.size() == f.rsn.road.edges.size());
    }
}
