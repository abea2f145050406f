#pragma once

// Arrangement-driven global search: per cell of R, delete the cell's
// smallest-score vertex (always a leaf of the current dominance view) with
// structural cascades until the early-termination conditions fire; the
// surviving community is the cell's non-contained MAC, and the ignored
// batches replay into the top-j chain.

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "macs/dominance.hpp"
#include "macs/geometry.hpp"
#include "macs/ktcore.hpp"

namespace macs {

struct RankedCommunity {
    std::vector<int> members;   // sorted vertex ids
    double score = 0;           // community score at the cell witness
    int min_vertex = -1;        // argmin member at the witness
};

struct ResultCell {
    Cell cell;
    std::vector<RankedCommunity> communities;  // rank 1 first
};

enum class SearchMode { NonContained, TopJ };

struct ResultSet {
    SearchMode mode = SearchMode::NonContained;
    int j = 1;
    bool no_core = false;
    std::vector<ResultCell> entries;
    // owns the half-spaces the cells' constraints point into
    std::shared_ptr<HalfSpaceCache> halfspaces;
};

struct SearchState {
    Cell cell;
    std::vector<int> community;               // sorted vertex ids
    std::vector<std::vector<int>> ignored;    // deletion batches, oldest first
};

// Current leaves of the dominance view plus the pairwise half-spaces among
// them; in any cell of the induced arrangement the per-cell smallest-score
// member of the whole community is one of these leaves.
inline std::pair<std::vector<int>, std::vector<const HalfSpace*>> smallest_score_candidates(
    const DominanceView& view, HalfSpaceCache& cache) {
    std::vector<int> leaves = view.leaf_set();
    std::sort(leaves.begin(), leaves.end());
    std::vector<const HalfSpace*> hs;
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j)
            hs.push_back(cache.canonical(leaves[i], leaves[j]));
    return {std::move(leaves), std::move(hs)};
}

namespace detail {

inline RankedCommunity make_ranked(const std::vector<int>& members, const Weights& w,
                                   const AttributeTable& X) {
    RankedCommunity rc;
    rc.members = members;
    std::sort(rc.members.begin(), rc.members.end());
    auto [s, v] = community_score(rc.members, w, X);
    rc.score = s;
    rc.min_vertex = v;
    return rc;
}

// final community for a cell: rank 1 = H, then ignored batches newest-first
inline ResultCell finalize_cell(const Cell& cell, const SearchState& st, SearchMode mode,
                                int j, const AttributeTable& X) {
    ResultCell out;
    out.cell = cell;
    std::vector<int> cur = st.community;
    out.communities.push_back(make_ranked(cur, cell.witness, X));
    if (mode == SearchMode::TopJ) {
        for (int b = static_cast<int>(st.ignored.size()) - 1;
             b >= 0 && static_cast<int>(out.communities.size()) < j; --b) {
            cur.insert(cur.end(), st.ignored[static_cast<std::size_t>(b)].begin(),
                       st.ignored[static_cast<std::size_t>(b)].end());
            out.communities.push_back(make_ranked(cur, cell.witness, X));
        }
    }
    return out;
}

}  // namespace detail

// variant over a prebuilt core and dominance graph (index preloading)
inline ResultSet gs_search_prepared(const RoadSocialNetwork& rsn, const std::vector<int>& Q,
                                    int k, const Region& region, SearchMode mode, int j,
                                    const std::vector<int>& core_members,
                                    const DominanceGraph& gd) {
    ResultSet rs;
    rs.mode = mode;
    rs.j = mode == SearchMode::TopJ ? j : 1;
    const auto& X = rsn.social.attributes;
    rs.halfspaces = std::make_shared<HalfSpaceCache>(X);
    HalfSpaceCache& cache = *rs.halfspaces;
    std::vector<char> isq(static_cast<std::size_t>(rsn.social.n()), 0);
    for (int q : Q) isq[static_cast<std::size_t>(q)] = 1;

    std::vector<SearchState> work;  // LIFO, depth-first over cells
    SearchState init;
    init.cell.witness = region.pivot;
    init.community = core_members;
    work.push_back(std::move(init));

    while (!work.empty()) {
        SearchState st = std::move(work.back());
        work.pop_back();
        DominanceView view(gd, st.community);
        auto [leaves, halfspaces] = smallest_score_candidates(view, cache);

        // uniform early exit: every leaf is a query vertex, so the smallest
        // vertex is un-deletable anywhere in the cell
        bool all_q = true;
        for (int v : leaves) all_q &= isq[static_cast<std::size_t>(v)] != 0;
        if (all_q) {
            rs.entries.push_back(detail::finalize_cell(st.cell, st, mode, rs.j, X));
            continue;
        }

        Subgraph h = Subgraph::of(rsn.social, st.community);
        Arrangement arr(region, st.cell);
        for (const auto* hs : halfspaces) arr.insert(hs);

        arr.for_each_leaf([&](const Cell& sub) {
            int victim = smallest_score_victim(leaves, sub.witness, X);
            auto del = dfs_delete(h, victim, k, Q);
            if (!del) {
                SearchState fin;
                fin.community = st.community;
                fin.ignored = st.ignored;
                rs.entries.push_back(detail::finalize_cell(sub, fin, mode, rs.j, X));
                return;
            }
            SearchState child;
            child.cell = sub;
            child.community = del->remaining.members();
            child.ignored = st.ignored;
            child.ignored.push_back(del->deleted);
            work.push_back(std::move(child));
        });
    }
    return rs;
}

inline ResultSet gs_search(const RoadSocialNetwork& rsn, const std::vector<int>& Q, int k,
                           double t, const Region& region, SearchMode mode, int j = 1) {
    auto core = maximal_kt_core(rsn, Q, k, t);
    if (!core) {
        ResultSet rs;
        rs.mode = mode;
        rs.j = mode == SearchMode::TopJ ? j : 1;
        rs.no_core = true;
        return rs;
    }
    DominanceGraph gd = build_rdominance_graph(*core, region, rsn.social.attributes);
    return gs_search_prepared(rsn, Q, k, region, mode, j, core->subgraph.members(), gd);
}

// cell lookup for result validation: entry whose constraints w satisfies
inline const ResultCell* find_cell(const ResultSet& rs, const Weights& w) {
    for (const auto& e : rs.entries) {
        bool inside = true;
        for (const auto& sc : e.cell.constraints)
            if (sc.eval(w) < 0) { inside = false; break; }
        if (inside) return &e;
    }
    return nullptr;
}

}  // namespace macs
