#pragma once

// Induced subgraphs with cached degrees, k-core peeling, and the coreness
// upper bound used to skip hopeless queries.

#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "macs/network.hpp"

namespace macs {

// Vertex subset of a social network with cached induced degrees.
struct Subgraph {
    const SocialNetwork* parent = nullptr;
    std::vector<char> in;      // membership flags, size parent->n()
    std::vector<int> degree;   // induced degree, valid for members
    int count = 0;

    Subgraph() = default;
    explicit Subgraph(const SocialNetwork& g)
        : parent(&g), in(static_cast<std::size_t>(g.n()), 0),
          degree(static_cast<std::size_t>(g.n()), 0) {}

    static Subgraph full(const SocialNetwork& g) {
        Subgraph s(g);
        for (int v = 0; v < g.n(); ++v) s.in[static_cast<std::size_t>(v)] = 1;
        s.count = g.n();
        s.recompute_degrees();
        return s;
    }

    static Subgraph of(const SocialNetwork& g, const std::vector<int>& members) {
        Subgraph s(g);
        for (int v : members) {
            if (!s.in[static_cast<std::size_t>(v)]) {
                s.in[static_cast<std::size_t>(v)] = 1;
                ++s.count;
            }
        }
        s.recompute_degrees();
        return s;
    }

    bool contains(int v) const { return in[static_cast<std::size_t>(v)] != 0; }

    void recompute_degrees() {
        std::fill(degree.begin(), degree.end(), 0);
        for (int v = 0; v < parent->n(); ++v) {
            if (!contains(v)) continue;
            int d = 0;
            for (int u : parent->adj[static_cast<std::size_t>(v)])
                if (contains(u)) ++d;
            degree[static_cast<std::size_t>(v)] = d;
        }
    }

    void remove(int v) {
        in[static_cast<std::size_t>(v)] = 0;
        --count;
        for (int u : parent->adj[static_cast<std::size_t>(v)])
            if (contains(u)) --degree[static_cast<std::size_t>(u)];
    }

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count));
        for (int v = 0; v < parent->n(); ++v)
            if (contains(v)) out.push_back(v);
        return out;
    }

    int min_degree() const {
        int d = -1;
        for (int v = 0; v < parent->n(); ++v)
            if (contains(v) && (d < 0 || degree[static_cast<std::size_t>(v)] < d))
                d = degree[static_cast<std::size_t>(v)];
        return d;
    }

    // members reachable from v inside the subgraph
    std::vector<int> component_of(int v) const {
        std::vector<int> comp;
        if (!contains(v)) return comp;
        std::vector<char> vis(in.size(), 0);
        std::queue<int> q;
        q.push(v);
        vis[static_cast<std::size_t>(v)] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            comp.push_back(x);
            for (int u : parent->adj[static_cast<std::size_t>(x)])
                if (contains(u) && !vis[static_cast<std::size_t>(u)]) {
                    vis[static_cast<std::size_t>(u)] = 1;
                    q.push(u);
                }
        }
        return comp;
    }

    bool connected() const {
        if (count == 0) return true;
        int v0 = -1;
        for (int v = 0; v < parent->n(); ++v)
            if (contains(v)) { v0 = v; break; }
        return static_cast<int>(component_of(v0).size()) == count;
    }
};

// Min-degree peeling; core(v) = largest k with v in a k-core.
inline std::vector<int> core_decomposition(const Subgraph& g) {
    const int n = g.parent->n();
    std::vector<int> core(static_cast<std::size_t>(n), -1);
    std::vector<int> deg = g.degree;
    std::set<std::pair<int, int>> order;  // (degree, vertex)
    for (int v = 0; v < n; ++v)
        if (g.contains(v)) order.emplace(deg[static_cast<std::size_t>(v)], v);
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    int k = 0;
    while (!order.empty()) {
        auto [d, v] = *order.begin();
        order.erase(order.begin());
        k = std::max(k, d);
        core[static_cast<std::size_t>(v)] = k;
        done[static_cast<std::size_t>(v)] = 1;
        for (int u : g.parent->adj[static_cast<std::size_t>(v)]) {
            if (!g.contains(u) || done[static_cast<std::size_t>(u)]) continue;
            int& du = deg[static_cast<std::size_t>(u)];
            order.erase({du, u});
            --du;
            order.emplace(du, u);
        }
    }
    return core;
}

inline std::vector<int> core_decomposition(const SocialNetwork& g) {
    return core_decomposition(Subgraph::full(g));
}

// floor((1 + sqrt(9 + 8(m - n))) / 2); any k-core needs k at most this.
inline int coreness_upper_bound(long long n, long long m) {
    if (m < n - 1) return 1;
    double r = (1.0 + std::sqrt(9.0 + 8.0 * static_cast<double>(m - n))) / 2.0;
    return static_cast<int>(std::floor(r));
}

// In-place peel to the maximal k-core.
inline void peel_to_kcore(Subgraph& g, int k) {
    std::queue<int> q;
    for (int v = 0; v < g.parent->n(); ++v)
        if (g.contains(v) && g.degree[static_cast<std::size_t>(v)] < k) q.push(v);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (!g.contains(v)) continue;
        g.remove(v);
        for (int u : g.parent->adj[static_cast<std::size_t>(v)])
            if (g.contains(u) && g.degree[static_cast<std::size_t>(u)] < k) q.push(u);
    }
}

}  // namespace macs
