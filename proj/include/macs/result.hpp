#pragma once

// Line-oriented result documents: one JSON object per line, stable field
// order, doubles printed shortest-round-trip. Diffable and re-scorable.

#include <ostream>
#include <string>

#include <json.hpp>

#include "macs/global_search.hpp"
#include "macs/network.hpp"

namespace macs {

using ojson = nlohmann::ordered_json;

struct QueryEcho {
    std::string engine;
    std::vector<std::string> q_labels;
    int k = 0;
    double t = 0;
    int j = 1;
    std::string region;
    std::uint64_t seed = 0;
};

inline ojson raw_double(double v) {
    // nlohmann serializes doubles round-trip safely; keep plain
    return ojson(v);
}

inline ojson cell_to_json(const ResultCell& rc, const SocialNetwork& soc) {
    ojson jc;
    jc["type"] = "cell";
    ojson hs = ojson::array();
    for (const auto& sc : rc.cell.constraints) {
        ojson h;
        h["a"] = sc.hs->a;
        h["b"] = sc.hs->b;
        h["side"] = sc.side;
        h["winner"] = soc.labels[static_cast<std::size_t>(sc.hs->winner)];
        h["loser"] = soc.labels[static_cast<std::size_t>(sc.hs->loser)];
        hs.push_back(std::move(h));
    }
    jc["halfspaces"] = std::move(hs);
    jc["witness"] = rc.cell.witness;
    ojson comms = ojson::array();
    for (const auto& c : rc.communities) {
        ojson jm;
        ojson members = ojson::array();
        for (int v : c.members) members.push_back(soc.labels[static_cast<std::size_t>(v)]);
        jm["members"] = std::move(members);
        jm["score"] = c.score;
        jm["min_vertex"] = soc.labels[static_cast<std::size_t>(c.min_vertex)];
        comms.push_back(std::move(jm));
    }
    jc["communities"] = std::move(comms);
    return jc;
}

inline void write_result_document(std::ostream& out, const ResultSet& rs,
                                  const SocialNetwork& soc, const QueryEcho& echo,
                                  int hkt_size, double timing_ms = 0.0) {
    ojson hdr;
    hdr["type"] = "header";
    hdr["engine"] = echo.engine;
    hdr["q"] = echo.q_labels;
    hdr["k"] = echo.k;
    hdr["t"] = echo.t;
    if (echo.j > 1) hdr["j"] = echo.j;
    hdr["region"] = echo.region;
    hdr["seed"] = echo.seed;
    hdr["hkt_size"] = hkt_size;
    hdr["cells"] = rs.entries.size();
    hdr["no_core"] = rs.no_core;
    hdr["timing_ms"] = timing_ms;
    out << hdr.dump() << '\n';
    for (const auto& e : rs.entries) out << cell_to_json(e, soc).dump() << '\n';
}

}  // namespace macs
