#pragma once

// Synthetic data: the three standard attribute distributions (independent,
// correlated, anti-correlated), grid road networks, and full road-social
// instances. Everything is deterministic under a fixed seed.

#include <random>
#include <stdexcept>
#include <string>

#include "macs/network.hpp"

namespace macs {

enum class AttrMode { Independent, Correlated, AntiCorrelated };

inline AttrMode attr_mode_from_string(const std::string& s) {
    if (s == "independent") return AttrMode::Independent;
    if (s == "correlated") return AttrMode::Correlated;
    if (s == "anti-correlated" || s == "anticorrelated") return AttrMode::AntiCorrelated;
    throw std::invalid_argument("unknown attribute mode: " + s);
}

inline AttributeTable generate_attributes(int n, int d, AttrMode mode, std::uint64_t seed) {
    if (n < 1 || d < 1) throw std::invalid_argument("generate_attributes: n,d >= 1 required");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto clamp01 = [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); };
    AttributeTable X(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(d)));
    switch (mode) {
        case AttrMode::Independent:
            for (auto& row : X)
                for (auto& x : row) x = u01(rng);
            break;
        case AttrMode::Correlated: {
            // all dimensions jitter around one shared base value
            std::uniform_real_distribution<double> jit(-0.15, 0.15);
            for (auto& row : X) {
                double base = u01(rng);
                for (auto& x : row) x = clamp01(base + jit(rng));
            }
            break;
        }
        case AttrMode::AntiCorrelated: {
            // points near the plane sum(x) = d/2: Dirichlet(1,..,1) scaled
            std::exponential_distribution<double> ex(1.0);
            std::uniform_real_distribution<double> jit(-0.05, 0.05);
            for (auto& row : X) {
                double s = 0;
                for (auto& x : row) { x = ex(rng) + 1e-12; s += x; }
                for (auto& x : row) x = clamp01(x / s * (d / 2.0) + jit(rng));
            }
            break;
        }
    }
    return X;
}

// W x H lattice; edge weights uniform in [0.5, 1.5].
inline RoadNetwork generate_grid_road(int width, int height, std::uint64_t seed) {
    if (width < 1 || height < 1) throw std::invalid_argument("grid dimensions >= 1 required");
    RoadNetwork g;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> wdist(0.5, 1.5);
    auto name = [&](int x, int y) { return "g" + std::to_string(x) + "_" + std::to_string(y); };
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) g.vertex(name(x, y));
    auto id = [&](int x, int y) { return y * width + x; };
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            if (x + 1 < width) g.add_edge(id(x, y), id(x + 1, y), wdist(rng));
            if (y + 1 < height) g.add_edge(id(x, y), id(x, y + 1), wdist(rng));
        }
    return g;
}

// Random social graph: n vertices, ~avg_degree*n/2 distinct edges.
inline void generate_social_edges(SocialNetwork& g, int n, double avg_degree,
                                  std::mt19937_64& rng) {
    for (int i = 0; i < n; ++i) g.vertex("v" + std::to_string(i));
    if (n < 2) return;
    long long target = static_cast<long long>(avg_degree * n / 2.0);
    long long maxm = static_cast<long long>(n) * (n - 1) / 2;
    if (target > maxm) target = maxm;
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::unordered_set<long long> seen;
    while (static_cast<long long>(g.edges.size()) < target) {
        int u = pick(rng), v = pick(rng);
        if (u == v) continue;
        long long key = (static_cast<long long>(std::min(u, v)) << 32) |
                        static_cast<unsigned>(std::max(u, v));
        if (!seen.insert(key).second) continue;
        g.add_edge(u, v);
    }
}

struct GenSpec {
    int n_social = 100;
    int d = 3;
    AttrMode mode = AttrMode::Independent;
    int grid_width = 10;
    int grid_height = 10;
    double avg_degree = 8.0;
    std::uint64_t seed = 1;
};

inline RoadSocialNetwork generate_road_social(const GenSpec& spec) {
    if (spec.n_social <= 0) throw std::invalid_argument("n_social must be positive");
    RoadSocialNetwork rsn;
    std::mt19937_64 rng(spec.seed);
    rsn.road = generate_grid_road(spec.grid_width, spec.grid_height, rng());
    if (rsn.road.m() == 0) throw std::runtime_error("no edges to place users on");
    generate_social_edges(rsn.social, spec.n_social, spec.avg_degree, rng);
    rsn.social.d = spec.d;
    rsn.social.attributes = generate_attributes(spec.n_social, spec.d, spec.mode, rng());
    rsn.social.locations.resize(static_cast<std::size_t>(spec.n_social));
    std::uniform_int_distribution<int> epick(0, rsn.road.m() - 1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int v = 0; v < spec.n_social; ++v) {
        int e = epick(rng);
        const auto& ed = rsn.road.edges[static_cast<std::size_t>(e)];
        rsn.social.locations[static_cast<std::size_t>(v)] =
            Location::on_edge(ed.u, ed.v, u01(rng) * ed.weight);
    }
    validate(rsn);
    return rsn;
}

}  // namespace macs
