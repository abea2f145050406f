#pragma once

// Road-social network domain types and TSV ingestion.
//
// External ids are arbitrary tokens; they are mapped to dense ints at load
// time and kept in a side table for output.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "macs/geometry.hpp"

namespace macs {

inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

struct RoadEdge {
    int u, v;
    double weight;
};

struct RoadNetwork {
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> label_to_id;
    std::vector<RoadEdge> edges;
    // per-vertex incident edge indices
    std::vector<std::vector<int>> incident;

    int n() const { return static_cast<int>(labels.size()); }
    int m() const { return static_cast<int>(edges.size()); }

    int vertex(const std::string& label) {
        auto it = label_to_id.find(label);
        if (it != label_to_id.end()) return it->second;
        int id = n();
        label_to_id.emplace(label, id);
        labels.push_back(label);
        incident.emplace_back();
        return id;
    }

    int find_vertex(const std::string& label) const {
        auto it = label_to_id.find(label);
        return it == label_to_id.end() ? -1 : it->second;
    }

    int add_edge(int u, int v, double w) {
        int id = m();
        edges.push_back({u, v, w});
        incident[static_cast<std::size_t>(u)].push_back(id);
        incident[static_cast<std::size_t>(v)].push_back(id);
        return id;
    }

    // edge index joining u,v or -1
    int find_edge(int u, int v) const {
        for (int e : incident[static_cast<std::size_t>(u)]) {
            const auto& ed = edges[static_cast<std::size_t>(e)];
            if ((ed.u == u && ed.v == v) || (ed.u == v && ed.v == u)) return e;
        }
        return -1;
    }
};

// Spatial point on the road network: either exactly on a vertex
// (edge_v == -1) or on edge (edge_u, edge_v) at `offset` cost from edge_u.
struct Location {
    int edge_u = -1;
    int edge_v = -1;
    double offset = 0;

    bool on_vertex() const { return edge_v < 0; }

    static Location at_vertex(int r) { return {r, -1, 0.0}; }
    static Location on_edge(int u, int v, double off) { return {u, v, off}; }

    bool same_point(const Location& o, const RoadNetwork& road) const {
        auto norm = [&](const Location& l) {
            // canonical: vertex form when the offset lands on an endpoint
            if (l.on_vertex()) return l;
            if (l.offset == 0.0) return at_vertex(l.edge_u);
            int e = road.find_edge(l.edge_u, l.edge_v);
            if (e >= 0 && l.offset == road.edges[static_cast<std::size_t>(e)].weight)
                return at_vertex(l.edge_v);
            return l;
        };
        Location a = norm(*this), b = norm(o);
        if (a.on_vertex() != b.on_vertex()) return false;
        if (a.on_vertex()) return a.edge_u == b.edge_u;
        return (a.edge_u == b.edge_u && a.edge_v == b.edge_v && a.offset == b.offset) ||
               (a.edge_u == b.edge_v && a.edge_v == b.edge_u &&
                [&] {
                    int e = road.find_edge(a.edge_u, a.edge_v);
                    return e >= 0 &&
                           a.offset == road.edges[static_cast<std::size_t>(e)].weight - b.offset;
                }());
    }
};

struct SocialNetwork {
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> label_to_id;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adj;
    std::vector<Location> locations;
    AttributeTable attributes;
    int d = 0;

    int n() const { return static_cast<int>(labels.size()); }
    int m() const { return static_cast<int>(edges.size()); }

    int vertex(const std::string& label) {
        auto it = label_to_id.find(label);
        if (it != label_to_id.end()) return it->second;
        int id = n();
        label_to_id.emplace(label, id);
        labels.push_back(label);
        adj.emplace_back();
        return id;
    }

    int find_vertex(const std::string& label) const {
        auto it = label_to_id.find(label);
        return it == label_to_id.end() ? -1 : it->second;
    }

    void add_edge(int u, int v) {
        edges.emplace_back(u, v);
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }

    bool has_edge(int u, int v) const {
        for (int w : adj[static_cast<std::size_t>(u)])
            if (w == v) return true;
        return false;
    }
};

struct RoadSocialNetwork {
    RoadNetwork road;
    SocialNetwork social;
};

namespace detail {

struct LineReader {
    std::istream& in;
    std::string path;
    int lineno = 0;
    std::string line;

    bool next(std::vector<std::string>& tokens) {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t h = line.find('#');
            std::string body = h == std::string::npos ? line : line.substr(0, h);
            tokens.clear();
            std::istringstream ss(body);
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
    }
};

inline double parse_double(const std::string& s, const LineReader& r) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) r.fail("malformed number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        r.fail("malformed number '" + s + "'");
    }
}

}  // namespace detail

// road file: lines `u v weight`
inline RoadNetwork load_road_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open road file: " + path);
    detail::LineReader r{in, path};
    RoadNetwork g;
    std::vector<std::string> t;
    while (r.next(t)) {
        if (t.size() != 3) r.fail("malformed line, expected `u v weight`");
        double w = detail::parse_double(t[2], r);
        if (w < 0) r.fail("negative weight");
        int u = g.vertex(t[0]);
        int v = g.vertex(t[1]);
        g.add_edge(u, v, w);
    }
    return g;
}

inline void save_road_network(const RoadNetwork& g, std::ostream& out) {
    for (const auto& e : g.edges)
        out << g.labels[static_cast<std::size_t>(e.u)] << ' '
            << g.labels[static_cast<std::size_t>(e.v)] << ' '
            << format_double(e.weight) << '\n';
}

// social edges `u v`; attributes `v x_1 .. x_d`; locations `v eu ev offset` or `v r`
inline SocialNetwork load_social_network(const std::string& edges_path,
                                         const std::string& attrs_path,
                                         const std::string& locations_path,
                                         const RoadNetwork& road) {
    SocialNetwork g;
    {
        std::ifstream in(edges_path);
        if (!in) throw std::runtime_error("cannot open social edge file: " + edges_path);
        detail::LineReader r{in, edges_path};
        std::vector<std::string> t;
        while (r.next(t)) {
            if (t.size() != 2) r.fail("malformed line, expected `u v`");
            int u = g.vertex(t[0]);
            int v = g.vertex(t[1]);
            if (u == v) r.fail("self-loop");
            if (g.has_edge(u, v)) r.fail("duplicate edge");
            g.add_edge(u, v);
        }
    }
    g.attributes.assign(static_cast<std::size_t>(g.n()), {});
    std::vector<char> have_attr(static_cast<std::size_t>(g.n()), 0);
    {
        std::ifstream in(attrs_path);
        if (!in) throw std::runtime_error("cannot open attribute file: " + attrs_path);
        detail::LineReader r{in, attrs_path};
        std::vector<std::string> t;
        while (r.next(t)) {
            if (t.size() < 2) r.fail("malformed line, expected `v x_1 .. x_d`");
            int v = g.vertex(t[0]);
            if (static_cast<std::size_t>(v) >= g.attributes.size()) {
                g.attributes.resize(static_cast<std::size_t>(g.n()));
                have_attr.resize(static_cast<std::size_t>(g.n()), 0);
            }
            if (g.d == 0) g.d = static_cast<int>(t.size()) - 1;
            else if (static_cast<int>(t.size()) - 1 != g.d) r.fail("inconsistent dimensionality");
            std::vector<double> x;
            for (std::size_t i = 1; i < t.size(); ++i) x.push_back(detail::parse_double(t[i], r));
            if (have_attr[static_cast<std::size_t>(v)]) r.fail("duplicate attributes for " + t[0]);
            g.attributes[static_cast<std::size_t>(v)] = std::move(x);
            have_attr[static_cast<std::size_t>(v)] = 1;
        }
    }
    g.locations.assign(static_cast<std::size_t>(g.n()), {});
    std::vector<char> have_loc(static_cast<std::size_t>(g.n()), 0);
    {
        std::ifstream in(locations_path);
        if (!in) throw std::runtime_error("cannot open location file: " + locations_path);
        detail::LineReader r{in, locations_path};
        std::vector<std::string> t;
        while (r.next(t)) {
            if (t.size() != 2 && t.size() != 4) r.fail("malformed line, expected `v r` or `v eu ev offset`");
            int v = g.find_vertex(t[0]);
            if (v < 0) r.fail("location for unknown social vertex " + t[0]);
            Location loc;
            if (t.size() == 2) {
                int rv = road.find_vertex(t[1]);
                if (rv < 0) r.fail("unknown road vertex " + t[1]);
                loc = Location::at_vertex(rv);
            } else {
                int eu = road.find_vertex(t[1]);
                int ev = road.find_vertex(t[2]);
                if (eu < 0 || ev < 0) r.fail("unknown road endpoint");
                int e = road.find_edge(eu, ev);
                if (e < 0) r.fail("location references nonexistent road edge");
                double off = detail::parse_double(t[3], r);
                double w = road.edges[static_cast<std::size_t>(e)].weight;
                // offset measured from the named first endpoint
                if (road.edges[static_cast<std::size_t>(e)].u != eu) off = w - off;
                if (off < 0 || off > w) r.fail("offset outside edge");
                loc = Location::on_edge(road.edges[static_cast<std::size_t>(e)].u,
                                        road.edges[static_cast<std::size_t>(e)].v, off);
            }
            if (have_loc[static_cast<std::size_t>(v)]) r.fail("duplicate location for " + t[0]);
            g.locations[static_cast<std::size_t>(v)] = loc;
            have_loc[static_cast<std::size_t>(v)] = 1;
        }
    }
    for (int v = 0; v < g.n(); ++v) {
        if (!have_attr[static_cast<std::size_t>(v)])
            throw std::runtime_error("missing attributes for " + g.labels[static_cast<std::size_t>(v)]);
        if (!have_loc[static_cast<std::size_t>(v)])
            throw std::runtime_error("missing location for " + g.labels[static_cast<std::size_t>(v)]);
    }
    return g;
}

inline void save_social_network(const SocialNetwork& g, const RoadNetwork& road,
                                std::ostream& edges_out, std::ostream& attrs_out,
                                std::ostream& locations_out) {
    for (const auto& [u, v] : g.edges)
        edges_out << g.labels[static_cast<std::size_t>(u)] << ' '
                  << g.labels[static_cast<std::size_t>(v)] << '\n';
    for (int v = 0; v < g.n(); ++v) {
        attrs_out << g.labels[static_cast<std::size_t>(v)];
        for (double x : g.attributes[static_cast<std::size_t>(v)])
            attrs_out << ' ' << format_double(x);
        attrs_out << '\n';
    }
    for (int v = 0; v < g.n(); ++v) {
        const Location& l = g.locations[static_cast<std::size_t>(v)];
        locations_out << g.labels[static_cast<std::size_t>(v)];
        if (l.on_vertex()) {
            locations_out << ' ' << road.labels[static_cast<std::size_t>(l.edge_u)] << '\n';
        } else {
            locations_out << ' ' << road.labels[static_cast<std::size_t>(l.edge_u)] << ' '
                          << road.labels[static_cast<std::size_t>(l.edge_v)] << ' '
                          << format_double(l.offset) << '\n';
        }
    }
}

// Structural invariant check used by tests and generators.
inline void validate(const RoadSocialNetwork& rsn) {
    const auto& road = rsn.road;
    const auto& soc = rsn.social;
    for (const auto& e : road.edges)
        if (e.weight < 0) throw std::runtime_error("validate: negative road weight");
    if (soc.d < 1 && soc.n() > 0) throw std::runtime_error("validate: d < 1");
    std::unordered_set<long long> seen;
    for (const auto& [u, v] : soc.edges) {
        if (u == v) throw std::runtime_error("validate: self-loop");
        long long key = (static_cast<long long>(std::min(u, v)) << 32) | static_cast<unsigned>(std::max(u, v));
        if (!seen.insert(key).second) throw std::runtime_error("validate: duplicate edge");
    }
    for (int v = 0; v < soc.n(); ++v) {
        const auto& x = soc.attributes[static_cast<std::size_t>(v)];
        if (static_cast<int>(x.size()) != soc.d)
            throw std::runtime_error("validate: attribute dimensionality");
        const Location& l = soc.locations[static_cast<std::size_t>(v)];
        if (l.on_vertex()) {
            if (l.edge_u < 0 || l.edge_u >= road.n())
                throw std::runtime_error("validate: location vertex out of range");
        } else {
            int e = road.find_edge(l.edge_u, l.edge_v);
            if (e < 0) throw std::runtime_error("validate: location on nonexistent edge");
            if (l.offset < 0 || l.offset > road.edges[static_cast<std::size_t>(e)].weight)
                throw std::runtime_error("validate: location offset out of range");
        }
    }
}

}  // namespace macs
