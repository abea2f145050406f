#pragma once

// Binary persistence for a query's precomputed state: the maximal (k,t)-core
// with its query distances plus the r-dominance graph. Little-endian, magic
// header, one section per payload.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "macs/dominance.hpp"
#include "macs/ktcore.hpp"

namespace macs {

struct QueryIndex {
    std::vector<int> Q;
    int k = 0;
    double t = 0;
    Weights region_lo, region_hi;
    std::vector<int> members;                 // H_k^t
    std::vector<double> query_distance;       // per member, aligned with members
    std::vector<std::pair<int, int>> arcs;    // reduced dominance arcs
};

namespace detail {

constexpr char kIndexMagic[8] = {'M', 'A', 'C', 'S', 'I', 'D', 'X', '1'};

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("index file truncated");
    return v;
}

inline void put_ints(std::ostream& os, const std::vector<int>& v) {
    put<std::uint64_t>(os, v.size());
    for (int x : v) put<std::int32_t>(os, x);
}
inline std::vector<int> get_ints(std::istream& is) {
    auto n = get<std::uint64_t>(is);
    std::vector<int> v(n);
    for (auto& x : v) x = get<std::int32_t>(is);
    return v;
}
inline void put_doubles(std::ostream& os, const std::vector<double>& v) {
    put<std::uint64_t>(os, v.size());
    for (double x : v) put<double>(os, x);
}
inline std::vector<double> get_doubles(std::istream& is) {
    auto n = get<std::uint64_t>(is);
    std::vector<double> v(n);
    for (auto& x : v) x = get<double>(is);
    return v;
}

}  // namespace detail

inline void save_index(const QueryIndex& idx, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write index: " + path);
    os.write(detail::kIndexMagic, 8);
    detail::put<std::uint32_t>(os, 1);  // version
    detail::put_ints(os, idx.Q);
    detail::put<std::int32_t>(os, idx.k);
    detail::put<double>(os, idx.t);
    detail::put_doubles(os, idx.region_lo);
    detail::put_doubles(os, idx.region_hi);
    detail::put_ints(os, idx.members);
    detail::put_doubles(os, idx.query_distance);
    detail::put<std::uint64_t>(os, idx.arcs.size());
    for (const auto& [u, v] : idx.arcs) {
        detail::put<std::int32_t>(os, u);
        detail::put<std::int32_t>(os, v);
    }
}

inline QueryIndex load_index(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read index: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, detail::kIndexMagic, 8) != 0)
        throw std::runtime_error("index file: bad magic");
    auto version = detail::get<std::uint32_t>(is);
    if (version != 1)
        throw std::runtime_error("index file: unsupported version " + std::to_string(version));
    QueryIndex idx;
    idx.Q = detail::get_ints(is);
    idx.k = detail::get<std::int32_t>(is);
    idx.t = detail::get<double>(is);
    idx.region_lo = detail::get_doubles(is);
    idx.region_hi = detail::get_doubles(is);
    idx.members = detail::get_ints(is);
    idx.query_distance = detail::get_doubles(is);
    auto na = detail::get<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < na; ++i) {
        int u = detail::get<std::int32_t>(is);
        int v = detail::get<std::int32_t>(is);
        idx.arcs.emplace_back(u, v);
    }
    return idx;
}

inline QueryIndex make_index(const KTCore& core, const DominanceGraph& gd,
                             const Weights& lo, const Weights& hi) {
    QueryIndex idx;
    idx.Q = core.Q;
    idx.k = core.k;
    idx.t = core.t;
    idx.region_lo = lo;
    idx.region_hi = hi;
    idx.members = gd.members();
    for (int v : idx.members)
        idx.query_distance.push_back(core.query_distance[static_cast<std::size_t>(v)]);
    idx.arcs = gd.arcs();
    return idx;
}

}  // namespace macs
