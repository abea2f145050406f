#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "macs/gen.hpp"
#include "macs/network.hpp"

using namespace macs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("macs_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) {
        auto p = path / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("road network loading") {
    TempDir dir;
    SECTION("two vertices one edge") {
        auto p = dir.file("r.tsv", "0 1 5.0\n");
        auto g = load_road_network(p);
        CHECK(g.n() == 2);
        REQUIRE(g.m() == 1);
        CHECK(g.edges[0].weight == 5.0);
    }
    SECTION("negative weight names the line") {
        auto p = dir.file("r.tsv", "0 1 2\n0 1 -2\n");
        try {
            load_road_network(p);
            FAIL("expected parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(":2") != std::string::npos);
            CHECK(std::string(e.what()).find("negative weight") != std::string::npos);
        }
    }
    SECTION("triangle counts") {
        auto p = dir.file("r.tsv", "a b 1\nb c 2\nc a 3\n");
        auto g = load_road_network(p);
        CHECK(g.n() == 3);
        CHECK(g.m() == 3);
        for (int v = 0; v < 3; ++v) CHECK(g.incident[static_cast<std::size_t>(v)].size() == 2);
    }
    SECTION("comments and malformed lines") {
        auto p = dir.file("r.tsv", "# header\n0 1 2\n");
        CHECK(load_road_network(p).m() == 1);
        auto bad = dir.file("bad.tsv", "0 1\n");
        CHECK_THROWS(load_road_network(bad));
    }
}

TEST_CASE("social network loading") {
    TempDir dir;
    auto road = dir.file("road.tsv", "r0 r1 4\nr1 r2 3\n");
    auto g_road = load_road_network(road);
    SECTION("valid network infers d") {
        auto e = dir.file("e.tsv", "0 1\n");
        auto a = dir.file("a.tsv", "0 1 2 3\n1 4 5 6\n");
        auto l = dir.file("l.tsv", "0 r0\n1 r0 r1 2.5\n");
        auto g = load_social_network(e, a, l, g_road);
        CHECK(g.n() == 2);
        CHECK(g.d == 3);
        CHECK(g.locations[1].offset == 2.5);
    }
    SECTION("missing attributes") {
        auto e = dir.file("e.tsv", "0 5\n");
        auto a = dir.file("a.tsv", "0 1 2 3\n");
        auto l = dir.file("l.tsv", "0 r0\n5 r1\n");
        try {
            load_social_network(e, a, l, g_road);
            FAIL("expected error");
        } catch (const std::runtime_error& ex) {
            CHECK(std::string(ex.what()).find("missing attributes for 5") != std::string::npos);
        }
    }
    SECTION("inconsistent dimensionality") {
        auto e = dir.file("e.tsv", "0 1\n");
        auto a = dir.file("a.tsv", "0 1 2 3\n1 1 2 3 4\n");
        auto l = dir.file("l.tsv", "0 r0\n1 r1\n");
        try {
            load_social_network(e, a, l, g_road);
            FAIL("expected error");
        } catch (const std::runtime_error& ex) {
            CHECK(std::string(ex.what()).find("inconsistent dimensionality") != std::string::npos);
        }
    }
    SECTION("duplicate edge") {
        auto e = dir.file("e.tsv", "0 1\n1 0\n");
        auto a = dir.file("a.tsv", "0 1\n1 2\n");
        auto l = dir.file("l.tsv", "0 r0\n1 r1\n");
        CHECK_THROWS(load_social_network(e, a, l, g_road));
    }
}

TEST_CASE("save/load round trip is byte identical for canonical files") {
    GenSpec spec;
    spec.n_social = 30;
    spec.d = 3;
    spec.seed = 404;
    auto rsn = generate_road_social(spec);
    TempDir dir;
    auto dump = [&](const RoadSocialNetwork& r, const std::string& tag) {
        std::ostringstream road, social, attrs, locations;
        save_road_network(r.road, road);
        save_social_network(r.social, r.road, social, attrs, locations);
        auto pr = dir.file(tag + ".road", road.str());
        auto ps = dir.file(tag + ".social", social.str());
        auto pa = dir.file(tag + ".attrs", attrs.str());
        auto pl = dir.file(tag + ".locations", locations.str());
        return std::tuple{road.str() + social.str() + attrs.str() + locations.str(), pr, ps, pa, pl};
    };
    auto [bytes1, pr, ps, pa, pl] = dump(rsn, "one");
    RoadSocialNetwork reloaded;
    reloaded.road = load_road_network(pr);
    reloaded.social = load_social_network(ps, pa, pl, reloaded.road);
    validate(reloaded);
    auto [bytes2, pr2, ps2, pa2, pl2] = dump(reloaded, "two");
    CHECK(bytes1 == bytes2);
}

TEST_CASE("attribute generator") {
    SECTION("deterministic under seed") {
        auto a = generate_attributes(1000, 3, AttrMode::Independent, 99);
        auto b = generate_attributes(1000, 3, AttrMode::Independent, 99);
        CHECK(a == b);
    }
    SECTION("independent empirical mean near 0.5") {
        auto X = generate_attributes(100000, 2, AttrMode::Independent, 5);
        for (int dimi = 0; dimi < 2; ++dimi) {
            double mean = 0;
            for (const auto& row : X) mean += row[static_cast<std::size_t>(dimi)];
            mean /= static_cast<double>(X.size());
            CHECK(std::abs(mean - 0.5) < 0.01);
        }
    }
    auto pearson = [](const AttributeTable& X) {
        double mx = 0, my = 0;
        for (const auto& r : X) { mx += r[0]; my += r[1]; }
        mx /= static_cast<double>(X.size());
        my /= static_cast<double>(X.size());
        double sxy = 0, sxx = 0, syy = 0;
        for (const auto& r : X) {
            sxy += (r[0] - mx) * (r[1] - my);
            sxx += (r[0] - mx) * (r[0] - mx);
            syy += (r[1] - my) * (r[1] - my);
        }
        return sxy / std::sqrt(sxx * syy);
    };
    SECTION("anti-correlated negative correlation") {
        auto X = generate_attributes(20000, 2, AttrMode::AntiCorrelated, 6);
        CHECK(pearson(X) < 0.0);
    }
    SECTION("correlated strong positive correlation") {
        auto X = generate_attributes(20000, 2, AttrMode::Correlated, 7);
        CHECK(pearson(X) > 0.5);
    }
    SECTION("values in unit range") {
        for (auto mode : {AttrMode::Independent, AttrMode::Correlated, AttrMode::AntiCorrelated}) {
            auto X = generate_attributes(500, 4, mode, 8);
            for (const auto& row : X)
                for (double x : row) {
                    CHECK(x >= 0.0);
                    CHECK(x <= 1.0);
                }
        }
    }
}

TEST_CASE("road-social generator") {
    SECTION("valid instance with on-edge locations") {
        GenSpec spec;
        spec.n_social = 50;
        spec.d = 2;
        spec.grid_width = 5;
        spec.grid_height = 5;
        spec.seed = 3;
        auto rsn = generate_road_social(spec);
        CHECK(rsn.social.n() == 50);
        CHECK_NOTHROW(validate(rsn));
    }
    SECTION("deterministic under seed") {
        GenSpec spec;
        spec.n_social = 40;
        spec.seed = 11;
        auto a = generate_road_social(spec);
        auto b = generate_road_social(spec);
        std::ostringstream sa, sb;
        save_road_network(a.road, sa);
        save_road_network(b.road, sb);
        CHECK(sa.str() == sb.str());
        CHECK(a.social.edges == b.social.edges);
        CHECK(a.social.attributes == b.social.attributes);
    }
    SECTION("single-vertex grid has no edges for locations") {
        GenSpec spec;
        spec.n_social = 5;
        spec.grid_width = 1;
        spec.grid_height = 1;
        CHECK_THROWS_WITH(generate_road_social(spec),
                          Catch::Matchers::ContainsSubstring("no edges"));
    }
    SECTION("n_social = 0 rejected") {
        GenSpec spec;
        spec.n_social = 0;
        CHECK_THROWS(generate_road_social(spec));
    }
}
