#pragma once

// Local expand-and-verify search. Expand grows candidate communities from Q
// by priority-driven BFS over H_k^t; Verify confirms each candidate's valid
// sub-region of R using only the competitor layers of the dominance graph,
// relaxing constraints on outside vertices whose deletion is structurally
// forced.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "macs/dominance.hpp"
#include "macs/global_search.hpp"

namespace macs {

enum class ExpandStrategy { LayerDensity, LayerMinDeg };

struct ExpandParams {
    ExpandStrategy strategy = ExpandStrategy::LayerDensity;
    double lambda = 10.0;  // trade-off weight on f2 in the density strategy
    double zeta = 100.0;   // layer priority ceiling, raised to max layer + 1 if deeper
    int budget = 32;       // max distinct candidates
};

inline ExpandStrategy strategy_from_string(const std::string& s) {
    if (s == "layer-density") return ExpandStrategy::LayerDensity;
    if (s == "layer-mindeg") return ExpandStrategy::LayerMinDeg;
    throw std::invalid_argument("unknown strategy: " + s);
}

struct Candidate {
    std::vector<int> members;  // sorted
    std::vector<int> trace;    // added-vertex order
};

namespace detail {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(static_cast<std::size_t>(n), -1) {}
    int find(int x) {
        while (p[static_cast<std::size_t>(x)] >= 0) {
            int g = p[static_cast<std::size_t>(x)];
            x = g;
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

// one priority-driven growth pass; appends snapshots (connected k-cores
// containing Q) to `out`
inline void expand_run(const SocialNetwork& soc, const std::vector<int>& Q, int k,
                       const DominanceGraph& gd, const ExpandParams& p, double zeta,
                       int forced_first, std::set<std::vector<int>>& seen,
                       std::vector<Candidate>& out, int run_cap) {
    const int n = soc.n();
    std::vector<char> inh(static_cast<std::size_t>(n), 0);
    std::vector<int> cnt_in(static_cast<std::size_t>(n), 0);  // neighbors inside H (within H_k^t)
    std::vector<int> members, trace;
    std::vector<char> infrontier(static_cast<std::size_t>(n), 0);
    UnionFind uf(n);
    int comps = 0, below_k = 0;

    // lazy max-priority frontier; ties by smaller id
    using Item = std::pair<double, int>;
    auto cmp = [](const Item& a, const Item& b) {
        return a.first != b.first ? a.first < b.first : a.second > b.second;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);

    auto prio = [&](int v) {
        double f3 = zeta - gd.layer_of(v);
        if (p.strategy == ExpandStrategy::LayerDensity)
            return p.lambda * cnt_in[static_cast<std::size_t>(v)] + f3;
        // layer-mindeg: f1 in {.. ,0,1} from the member degree profile
        int dmin = -1;
        for (int m : members) {
            int d = cnt_in[static_cast<std::size_t>(m)];
            if (dmin < 0 || d < dmin) dmin = d;
        }
        bool all_adj = true;
        for (int m : members) {
            if (cnt_in[static_cast<std::size_t>(m)] != dmin) continue;
            if (!soc.has_edge(m, v)) { all_adj = false; break; }
        }
        int after = all_adj ? std::min(cnt_in[static_cast<std::size_t>(v)], dmin + 1)
                            : std::min(cnt_in[static_cast<std::size_t>(v)], dmin);
        return zeta * (after - dmin) + f3;
    };

    // cnt_in[v] counts v's neighbors inside H whether v is a member or a
    // frontier vertex; it is already correct when v joins.
    auto add_vertex = [&](int v) {
        inh[static_cast<std::size_t>(v)] = 1;
        members.push_back(v);
        ++comps;
        if (cnt_in[static_cast<std::size_t>(v)] < k) ++below_k;
        for (int u : soc.adj[static_cast<std::size_t>(v)]) {
            if (!gd.has(u)) continue;
            if (inh[static_cast<std::size_t>(u)]) {
                if (uf.unite(u, v)) --comps;
                ++cnt_in[static_cast<std::size_t>(u)];
                if (cnt_in[static_cast<std::size_t>(u)] == k) --below_k;
            } else {
                ++cnt_in[static_cast<std::size_t>(u)];
                if (!infrontier[static_cast<std::size_t>(u)]) infrontier[static_cast<std::size_t>(u)] = 1;
                pq.push({0, u});  // key refreshed lazily
            }
        }
    };

    int taken = 0;
    auto snapshot_if_core = [&]() {
        if (below_k != 0 || comps != 1 || members.empty()) return;
        if (taken >= run_cap) return;
        auto ms = members;
        std::sort(ms.begin(), ms.end());
        if (seen.insert(ms).second) {
            Candidate c;
            c.members = std::move(ms);
            c.trace = trace;
            out.push_back(std::move(c));
            ++taken;
        }
    };

    for (int q : Q)
        if (!inh[static_cast<std::size_t>(q)]) add_vertex(q);
    if (forced_first >= 0 && !inh[static_cast<std::size_t>(forced_first)]) {
        add_vertex(forced_first);
        trace.push_back(forced_first);
        infrontier[static_cast<std::size_t>(forced_first)] = 0;
    }
    snapshot_if_core();

    while (!pq.empty() && static_cast<int>(out.size()) < p.budget && taken < run_cap) {
        auto [key, v] = pq.top();
        pq.pop();
        if (inh[static_cast<std::size_t>(v)] || !infrontier[static_cast<std::size_t>(v)]) continue;
        double cur = prio(v);
        if (key != cur) {
            pq.push({cur, v});
            continue;
        }
        infrontier[static_cast<std::size_t>(v)] = 0;
        add_vertex(v);
        trace.push_back(v);
        snapshot_if_core();
    }
}

}  // namespace detail

namespace detail {

// terminal community of the smallest-score deletion chain at a fixed weight
inline std::vector<int> chain_end_at(const SocialNetwork& soc, const std::vector<int>& start,
                                     const std::vector<int>& Q, int k, const Weights& w) {
    Subgraph h = Subgraph::of(soc, start);
    for (;;) {
        auto ms = h.members();
        int victim = smallest_score_victim(ms, w, soc.attributes);
        auto next = dfs_delete(h, victim, k, Q);
        if (!next) {
            std::sort(ms.begin(), ms.end());
            return ms;
        }
        h = std::move(next->remaining);
    }
}

// deterministic probe weights: pivot, corners, and a lattice over the
// corner hull dense enough to land in most score-order cells
inline std::vector<Weights> probe_points(const Region& region) {
    std::vector<Weights> pts;
    pts.push_back(region.pivot);
    for (const auto& c : region.corners) pts.push_back(c);
    int per_axis = region.dim <= 1 ? 33 : region.dim == 2 ? 9 : region.dim == 3 ? 5 : 3;
    if (region.is_rectangle()) {
        std::vector<int> idx(static_cast<std::size_t>(region.dim), 0);
        for (;;) {
            Weights w(static_cast<std::size_t>(region.dim));
            for (int i = 0; i < region.dim; ++i) {
                double f = (idx[static_cast<std::size_t>(i)] + 0.5) / per_axis;
                w[static_cast<std::size_t>(i)] =
                    region.rect_lo[static_cast<std::size_t>(i)] +
                    f * (region.rect_hi[static_cast<std::size_t>(i)] -
                         region.rect_lo[static_cast<std::size_t>(i)]);
            }
            pts.push_back(std::move(w));
            int i = 0;
            while (i < region.dim && ++idx[static_cast<std::size_t>(i)] == per_axis) {
                idx[static_cast<std::size_t>(i)] = 0;
                ++i;
            }
            if (i == region.dim) break;
        }
    } else {
        // blend each corner toward the pivot at a few depths
        for (double f : {0.25, 0.5, 0.75})
            for (const auto& c : region.corners) {
                Weights w(c.size());
                for (std::size_t i = 0; i < c.size(); ++i)
                    w[i] = f * c[i] + (1 - f) * region.pivot[i];
                pts.push_back(std::move(w));
            }
    }
    return pts;
}

// maximal connected k-core containing Q inside `allowed`; empty if none
inline std::vector<int> core_within(const SocialNetwork& soc, const std::vector<int>& allowed,
                                    const std::vector<int>& Q, int k) {
    Subgraph s = Subgraph::of(soc, allowed);
    peel_to_kcore(s, k);
    for (int q : Q)
        if (!s.contains(q)) return {};
    auto comp = s.component_of(Q[0]);
    std::vector<char> incomp(static_cast<std::size_t>(soc.n()), 0);
    for (int v : comp) incomp[static_cast<std::size_t>(v)] = 1;
    for (int q : Q)
        if (!incomp[static_cast<std::size_t>(q)]) return {};
    std::sort(comp.begin(), comp.end());
    return comp;
}

}  // namespace detail

// Frontier-driven candidate generation per the two priority strategies,
// snapshotting every time the members induce a connected k-core containing
// Q; H_k^t itself always participates. Diversification runs three ways:
// one restart per dominance-graph leaf within Q's 2-hop neighborhood, and a
// breadth-first sweep over leaf-exclusion sets that mirrors the deletion
// process (without it, greedy growth can never produce a target community
// that omits a well-connected neighbor of Q).
inline std::vector<Candidate> expand(const RoadSocialNetwork& rsn, const std::vector<int>& Q,
                                     int k, double /*t*/, const DominanceGraph& gd,
                                     const Region& region, const ExpandParams& p = {}) {
    std::vector<Candidate> out;
    for (int q : Q)
        if (!gd.has(q)) return out;
    const auto& soc = rsn.social;
    double zeta = p.zeta;
    if (gd.max_layer() >= zeta) zeta = gd.max_layer() + 1;

    std::set<std::vector<int>> seen;
    std::vector<int> full = gd.members();

    // priority growth from Q (first snapshot = induced(Q) when it qualifies)
    detail::expand_run(soc, Q, k, gd, p, zeta, -1, seen, out,
                       std::max(2, p.budget / 4));
    if (seen.insert(full).second) {
        Candidate c;
        c.members = full;
        out.push_back(std::move(c));
    }

    // fixed-weight deletion probes: the chain's terminal community at a few
    // deterministic weights is a strong non-contained candidate there
    for (const auto& w : detail::probe_points(region)) {
        if (static_cast<int>(out.size()) >= p.budget) break;
        auto end = detail::chain_end_at(soc, full, Q, k, w);
        if (!end.empty() && seen.insert(end).second) {
            Candidate c;
            c.members = std::move(end);
            out.push_back(std::move(c));
        }
    }

    // leaf-exclusion sweep: drop a current leaf, re-core, repeat on what
    // remains; candidates are the surviving maximal cores
    std::vector<char> isq(static_cast<std::size_t>(soc.n()), 0);
    for (int q : Q) isq[static_cast<std::size_t>(q)] = 1;
    std::set<std::vector<int>> seen_excl;
    std::vector<std::vector<int>> queue;
    {
        DominanceView whole(gd, full);
        for (int leaf : whole.leaf_set())
            if (!isq[static_cast<std::size_t>(leaf)]) {
                std::vector<int> x{leaf};
                if (seen_excl.insert(x).second) queue.push_back(std::move(x));
            }
    }
    const std::size_t explore_cap = static_cast<std::size_t>(p.budget) * 8;
    for (std::size_t qi = 0; qi < queue.size() && qi < explore_cap &&
                             static_cast<int>(out.size()) < p.budget;
         ++qi) {
        std::vector<char> excluded(static_cast<std::size_t>(soc.n()), 0);
        for (int v : queue[qi]) excluded[static_cast<std::size_t>(v)] = 1;
        std::vector<int> allowed;
        for (int v : full)
            if (!excluded[static_cast<std::size_t>(v)]) allowed.push_back(v);
        auto m = detail::core_within(soc, allowed, Q, k);
        if (m.empty()) continue;
        bool fresh = seen.insert(m).second;
        if (fresh) {
            Candidate c;
            c.members = m;
            out.push_back(std::move(c));
        }
        // descend: exclude everything already outside m plus one more leaf
        DominanceView view(gd, m);
        std::vector<char> inm(static_cast<std::size_t>(soc.n()), 0);
        for (int v : m) inm[static_cast<std::size_t>(v)] = 1;
        std::vector<int> base;
        for (int v : full)
            if (!inm[static_cast<std::size_t>(v)]) base.push_back(v);
        for (int leaf : view.leaf_set()) {
            if (isq[static_cast<std::size_t>(leaf)]) continue;
            auto x = base;
            x.push_back(leaf);
            std::sort(x.begin(), x.end());
            if (seen_excl.insert(x).second) queue.push_back(std::move(x));
        }
    }

    // restarts biased toward dominance leaves near Q's neighborhood
    std::vector<char> nearq(static_cast<std::size_t>(soc.n()), 0);
    for (int q : Q) {
        for (int u : soc.adj[static_cast<std::size_t>(q)]) {
            if (!gd.has(u)) continue;
            nearq[static_cast<std::size_t>(u)] = 1;
            for (int w : soc.adj[static_cast<std::size_t>(u)])
                if (gd.has(w)) nearq[static_cast<std::size_t>(w)] = 1;
        }
    }
    for (int leaf : gd.leaves()) {
        if (static_cast<int>(out.size()) >= p.budget) break;
        if (!nearq[static_cast<std::size_t>(leaf)]) continue;
        detail::expand_run(soc, Q, k, gd, p, zeta, leaf, seen, out, 2);
    }
    return out;
}

struct PromisingCheck {
    bool promising = true;
    std::string reason;  // "Corollary2-1" or "Corollary2-2" when discarded
};

// A candidate can survive only if the deletion process can reach it: some
// outside vertex must be a dominance-graph leaf, and an outside vertex that
// r-dominates an inside one must be structurally deletable (it can never be
// the smallest-score vertex while the dominee lives).
inline PromisingCheck is_promising(const Candidate& c, const DominanceGraph& gd, int k,
                                   const SocialNetwork& soc) {
    PromisingCheck res;
    std::vector<char> inside(static_cast<std::size_t>(soc.n()), 0);
    for (int v : c.members) inside[static_cast<std::size_t>(v)] = 1;
    std::vector<int> outside;
    for (int v : gd.members())
        if (!inside[static_cast<std::size_t>(v)]) outside.push_back(v);
    if (outside.empty()) return res;

    std::vector<char> isleaf(static_cast<std::size_t>(soc.n()), 0);
    for (int v : gd.leaves()) isleaf[static_cast<std::size_t>(v)] = 1;
    bool any_leaf_outside = false;
    for (int v : outside) any_leaf_outside |= isleaf[static_cast<std::size_t>(v)] != 0;
    if (!any_leaf_outside) {
        res.promising = false;
        res.reason = "Corollary2-1";
        return res;
    }
    for (int v : outside) {
        bool dominates_inside = false;
        for (int u : c.members)
            if (gd.dominates(v, u)) { dominates_inside = true; break; }
        if (!dominates_inside) continue;
        int deg_inside = 0;
        for (int u : soc.adj[static_cast<std::size_t>(v)])
            if (inside[static_cast<std::size_t>(u)]) ++deg_inside;
        if (deg_inside >= k) {
            res.promising = false;
            res.reason = "Corollary2-2";
            return res;
        }
    }
    return res;
}

// Non-Q leaves of G_e whose removal still leaves a connected k-core
// containing Q; each is tested by a trial deletion.
inline std::vector<int> find_anchors(const Candidate& c, const DominanceGraph& gd, int k,
                                     const std::vector<int>& Q, const SocialNetwork& soc) {
    DominanceView ge(gd, c.members);
    Subgraph h = Subgraph::of(soc, c.members);
    std::vector<int> anchors;
    for (int v : ge.leaf_set()) {
        bool inq = false;
        for (int q : Q) inq |= q == v;
        if (inq) continue;
        if (dfs_delete(h, v, k, Q)) anchors.push_back(v);
    }
    std::sort(anchors.begin(), anchors.end());
    return anchors;
}

enum class BoundStatus { DeletableFromBelow, MutuallyBound, Free };

struct BoundResult {
    BoundStatus status = BoundStatus::Free;
    int partner = -1;  // for MutuallyBound
};

namespace detail {

// cascade simulation over H_k^t: given an initial removal set (outside
// vertices), repeatedly delete outside vertices whose degree drops below k.
// Inside vertices are never deleted. Returns the dead set flags.
inline std::vector<char> cascade_outside(const SocialNetwork& soc, const DominanceGraph& gd,
                                         const std::vector<char>& inside, int k,
                                         std::vector<char> dead) {
    std::vector<int> deg(static_cast<std::size_t>(soc.n()), 0);
    for (int v : gd.members()) {
        if (dead[static_cast<std::size_t>(v)]) continue;
        int d = 0;
        for (int u : soc.adj[static_cast<std::size_t>(v)])
            if (gd.has(u) && !dead[static_cast<std::size_t>(u)]) ++d;
        deg[static_cast<std::size_t>(v)] = d;
    }
    std::queue<int> q;
    for (int v : gd.members())
        if (!dead[static_cast<std::size_t>(v)] && !inside[static_cast<std::size_t>(v)] &&
            deg[static_cast<std::size_t>(v)] < k)
            q.push(v);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (dead[static_cast<std::size_t>(v)]) continue;
        dead[static_cast<std::size_t>(v)] = 1;
        for (int u : soc.adj[static_cast<std::size_t>(v)]) {
            if (!gd.has(u) || dead[static_cast<std::size_t>(u)]) continue;
            if (--deg[static_cast<std::size_t>(u)] < k && !inside[static_cast<std::size_t>(u)])
                q.push(u);
        }
    }
    return dead;
}

}  // namespace detail

// Structural classification of a top vertex of G_c (Corollary 3 conditions
// 2-3): deletable-from-below when removing the layers underneath it forces
// its degree under k; mutually bound when two tops each cascade the other.
inline BoundResult detect_bound(const DominanceGraph& gd, const std::vector<int>& candidate,
                                int v, int k, const SocialNetwork& soc) {
    std::vector<char> inside(static_cast<std::size_t>(soc.n()), 0);
    for (int u : candidate) inside[static_cast<std::size_t>(u)] = 1;
    std::vector<int> outside;
    for (int u : gd.members())
        if (!inside[static_cast<std::size_t>(u)]) outside.push_back(u);
    DominanceView gc(gd, outside);
    if (!gc.contains(v)) throw std::invalid_argument("detect_bound: v not in G_c");

    // mutual binding against the other tops
    for (int u : gc.top_set()) {
        if (u == v) continue;
        std::vector<char> d1(static_cast<std::size_t>(soc.n()), 0);
        d1[static_cast<std::size_t>(u)] = 1;
        auto dead1 = detail::cascade_outside(soc, gd, inside, k, d1);
        std::vector<char> d2(static_cast<std::size_t>(soc.n()), 0);
        d2[static_cast<std::size_t>(v)] = 1;
        auto dead2 = detail::cascade_outside(soc, gd, inside, k, d2);
        if (dead1[static_cast<std::size_t>(v)] && dead2[static_cast<std::size_t>(u)])
            return {BoundStatus::MutuallyBound, u};
    }
    // deleting l_b(G_c) upward: everything below v goes, then cascade
    std::vector<char> dead(static_cast<std::size_t>(soc.n()), 0);
    for (int u : outside)
        if (u != v) dead[static_cast<std::size_t>(u)] = 1;
    auto after = detail::cascade_outside(soc, gd, inside, k, dead);
    if (after[static_cast<std::size_t>(v)]) return {BoundStatus::DeletableFromBelow, -1};
    return {BoundStatus::Free, -1};
}

struct VerifyOutcome {
    enum class Status { Valid, Discarded };
    Status status = Status::Discarded;
    std::string reason;                        // discard reason
    std::vector<Cell> cells;                   // valid sub-regions
    std::vector<int> anchors;
    std::vector<std::pair<int, int>> competitor_pairs;  // inserted half-space pairs
};

namespace detail {

// Structural elimination closure: given an initial dead set of outside
// vertices, cascade degree failures and Q-component disconnections until
// stable (inside vertices never die). Returns true iff all outside die.
inline bool eliminates_outside(const SocialNetwork& soc, const DominanceGraph& gd,
                               const std::vector<char>& inside, int k,
                               const std::vector<int>& Q,
                               const std::vector<int>& outside, std::vector<char> dead) {
    auto after = cascade_outside(soc, gd, inside, k, std::move(dead));
    for (;;) {
        // prune outside vertices cut off from Q's component
        std::vector<char> seen(static_cast<std::size_t>(soc.n()), 0);
        std::queue<int> bfs;
        bfs.push(Q[0]);
        seen[static_cast<std::size_t>(Q[0])] = 1;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (int u : soc.adj[static_cast<std::size_t>(v)]) {
                if (!gd.has(u) || after[static_cast<std::size_t>(u)] ||
                    seen[static_cast<std::size_t>(u)])
                    continue;
                seen[static_cast<std::size_t>(u)] = 1;
                bfs.push(u);
            }
        }
        bool changed = false;
        for (int u : outside)
            if (!after[static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)]) {
                after[static_cast<std::size_t>(u)] = 1;
                changed = true;
            }
        if (!changed) break;
        after = cascade_outside(soc, gd, inside, k, std::move(after));
    }
    for (int u : outside)
        if (!after[static_cast<std::size_t>(u)]) return false;
    return true;
}

}  // namespace detail

// Verify a promising candidate. In a valid sub-region the outside vertices
// scoring below the candidate's minimum must structurally eliminate all of
// the outside (cascades and disconnection do the rest, generalizing the
// bound-vertex relaxations), and the smallest inside leaf must be
// un-deletable. Both conditions are constant inside each cell of the
// arrangement spanned by the inserted competitor half-spaces.
inline VerifyOutcome verify(const Candidate& c, const DominanceGraph& gd, int k,
                            const std::vector<int>& Q, const SocialNetwork& soc,
                            const Region& region, HalfSpaceCache& cache) {
    VerifyOutcome out;
    auto pc = is_promising(c, gd, k, soc);
    if (!pc.promising) {
        out.reason = pc.reason;
        return out;
    }
    std::vector<char> inside(static_cast<std::size_t>(soc.n()), 0);
    for (int v : c.members) inside[static_cast<std::size_t>(v)] = 1;
    std::vector<int> outside;
    for (int v : gd.members())
        if (!inside[static_cast<std::size_t>(v)]) outside.push_back(v);

    DominanceView ge(gd, c.members);
    std::vector<int> eleaves = ge.leaf_set();
    std::sort(eleaves.begin(), eleaves.end());
    out.anchors = find_anchors(c, gd, k, Q, soc);

    std::vector<int> nonanchor_leaves;
    for (int e : eleaves)
        if (std::find(out.anchors.begin(), out.anchors.end(), e) == out.anchors.end())
            nonanchor_leaves.push_back(e);
    if (!out.anchors.empty() && nonanchor_leaves.empty()) {
        // whoever scores lowest is removable, so the chain never stops here
        out.reason = "empty-partition";
        return out;
    }

    const auto& X = soc.attributes;
    if (outside.empty() && out.anchors.empty()) {
        out.status = VerifyOutcome::Status::Valid;
        Cell whole;
        whole.witness = region.pivot;
        out.cells.push_back(std::move(whole));
        return out;
    }

    // refine the region by every inside-leaf-vs-outside comparison plus the
    // leaf-vs-leaf comparisons the anchor test needs
    Arrangement arr(region);
    std::set<std::pair<int, int>> pairs;
    for (int e : eleaves)
        for (int cc : outside) pairs.emplace(std::min(e, cc), std::max(e, cc));
    for (std::size_t i = 0; i < eleaves.size(); ++i)
        for (std::size_t jj = i + 1; jj < eleaves.size(); ++jj)
            pairs.emplace(eleaves[i], eleaves[jj]);
    for (const auto& [u, v] : pairs) {
        const HalfSpace* hs = cache.canonical(u, v);
        arr.insert(hs);
        out.competitor_pairs.emplace_back(u, v);
    }

    arr.for_each_leaf([&](const Cell& cell) {
        const Weights& w = cell.witness;
        double min_inside = score(eleaves[0], w, X);
        for (int e : eleaves) min_inside = std::min(min_inside, score(e, w, X));
        std::vector<char> dead(static_cast<std::size_t>(soc.n()), 0);
        for (int cc : outside)
            if (score(cc, w, X) < min_inside) dead[static_cast<std::size_t>(cc)] = 1;
        if (!detail::eliminates_outside(soc, gd, inside, k, Q, outside, std::move(dead)))
            return;
        // the smallest-score leaf must be un-deletable: some non-anchor
        // leaf has to sit below every anchor
        if (!out.anchors.empty()) {
            bool stop_here = false;
            for (int u : nonanchor_leaves) {
                double su = score(u, w, X);
                bool below_all = true;
                for (int a : out.anchors)
                    if (score(a, w, X) < su) { below_all = false; break; }
                if (below_all) { stop_here = true; break; }
            }
            if (!stop_here) return;
        }
        out.cells.push_back(cell);
    });

    if (out.cells.empty()) {
        out.reason = "empty-partition";
        return out;
    }
    out.status = VerifyOutcome::Status::Valid;
    return out;
}

namespace detail {

// subtract winner's cell from loser's: convex-difference decomposition
inline std::vector<Cell> cell_difference(const Cell& loser, const Cell& winner,
                                         const Region& region) {
    std::vector<Cell> pieces;
    std::vector<SignedHalfSpace> accum = loser.constraints;
    for (const auto& wc : winner.constraints) {
        auto cs = accum;
        cs.push_back({wc.hs, -wc.side});
        if (auto w = cell_feasible(cs, region)) {
            Cell piece;
            piece.constraints = cs;
            piece.witness = *w;
            pieces.push_back(std::move(piece));
        }
        accum.push_back(wc);
    }
    return pieces;
}

}  // namespace detail

// Local search: expand, filter, verify; overlapping validations are resolved
// by the higher-scoring community at the overlap witness.
inline ResultSet ls_search_prepared(const RoadSocialNetwork& rsn, const std::vector<int>& Q,
                                    int k, double t, const Region& region, SearchMode mode,
                                    int j, const ExpandParams& params,
                                    const DominanceGraph& gd) {
    ResultSet rs;
    rs.mode = mode;
    rs.j = mode == SearchMode::TopJ ? j : 1;
    const auto& soc = rsn.social;
    const auto& X = soc.attributes;
    rs.halfspaces = std::make_shared<HalfSpaceCache>(X);
    HalfSpaceCache& cache = *rs.halfspaces;

    auto candidates = expand(rsn, Q, k, t, gd, region, params);

    struct Claim {
        Cell cell;
        std::vector<int> members;
    };
    std::vector<Claim> claims;
    for (const auto& c : candidates) {
        auto vo = verify(c, gd, k, Q, soc, region, cache);
        if (vo.status != VerifyOutcome::Status::Valid) continue;
        for (auto& cell : vo.cells) claims.push_back({std::move(cell), c.members});
    }

    // resolve overlaps pairwise; the loser keeps only its difference pieces
    for (std::size_t i = 0; i < claims.size(); ++i) {
        for (std::size_t jdx = i + 1; jdx < claims.size(); ++jdx) {
            if (claims[i].members == claims[jdx].members) continue;
            auto cs = claims[i].cell.constraints;
            cs.insert(cs.end(), claims[jdx].cell.constraints.begin(),
                      claims[jdx].cell.constraints.end());
            auto wopt = cell_feasible(cs, region);
            if (!wopt) continue;
            double si = community_score(claims[i].members, *wopt, X).first;
            double sj = community_score(claims[jdx].members, *wopt, X).first;
            std::size_t lose = si >= sj ? jdx : i;
            std::size_t win = si >= sj ? i : jdx;
            auto pieces = detail::cell_difference(claims[lose].cell, claims[win].cell, region);
            auto members = claims[lose].members;
            claims.erase(claims.begin() + static_cast<long>(lose));
            for (auto& p : pieces) claims.push_back({std::move(p), members});
            // restart the scan after a structural change
            i = 0;
            jdx = 0;
        }
    }

    if (mode == SearchMode::NonContained) {
        for (auto& cl : claims) {
            ResultCell rc;
            rc.cell = std::move(cl.cell);
            rc.communities.push_back(
                detail::make_ranked(cl.members, rc.cell.witness, X));
            rs.entries.push_back(std::move(rc));
        }
        return rs;
    }

    // top-j: refine each valid cell by the top layer of the remaining
    // outside vertices, adding back the highest-score top per sub-cell
    for (auto& cl : claims) {
        struct GrowState {
            Cell cell;
            std::vector<int> grown;                   // community ∪ added
            std::vector<std::vector<int>> emitted;    // rank list so far
        };
        std::vector<GrowState> stack;
        GrowState init;
        init.cell = cl.cell;
        init.grown = cl.members;
        init.emitted.push_back(cl.members);
        stack.push_back(std::move(init));
        while (!stack.empty()) {
            GrowState st = std::move(stack.back());
            stack.pop_back();
            std::vector<int> remaining;
            {
                std::vector<char> have(static_cast<std::size_t>(soc.n()), 0);
                for (int v : st.grown) have[static_cast<std::size_t>(v)] = 1;
                for (int v : gd.members())
                    if (!have[static_cast<std::size_t>(v)]) remaining.push_back(v);
            }
            if (static_cast<int>(st.emitted.size()) >= rs.j || remaining.empty()) {
                ResultCell rc;
                rc.cell = std::move(st.cell);
                for (const auto& ms : st.emitted)
                    rc.communities.push_back(detail::make_ranked(ms, rc.cell.witness, X));
                rs.entries.push_back(std::move(rc));
                continue;
            }
            DominanceView gc(gd, remaining);
            std::vector<int> tops = gc.top_set();
            std::sort(tops.begin(), tops.end());
            Arrangement arr(region, st.cell);
            for (std::size_t a = 0; a < tops.size(); ++a)
                for (std::size_t b = a + 1; b < tops.size(); ++b)
                    arr.insert(cache.canonical(tops[a], tops[b]));
            arr.for_each_leaf([&](const Cell& sub) {
                // highest-score top at the witness
                int best = tops[0];
                double bs = score(best, sub.witness, X);
                for (int v : tops) {
                    double s = score(v, sub.witness, X);
                    if (s > bs || (s == bs && v < best)) { best = v; bs = s; }
                }
                GrowState child;
                child.cell = sub;
                child.grown = st.grown;
                child.grown.push_back(best);
                // upward closure: remaining dominators come back first
                for (int u : remaining)
                    if (u != best && gd.dominates(u, best)) child.grown.push_back(u);
                std::sort(child.grown.begin(), child.grown.end());
                child.emitted = st.emitted;
                Subgraph s = Subgraph::of(soc, child.grown);
                peel_to_kcore(s, k);
                bool allq = true;
                for (int q : Q) allq &= s.contains(q);
                if (allq && s.count > 0) {
                    auto comp = s.component_of(Q[0]);
                    bool qconn = true;
                    {
                        std::vector<char> incomp(static_cast<std::size_t>(soc.n()), 0);
                        for (int v : comp) incomp[static_cast<std::size_t>(v)] = 1;
                        for (int q : Q) qconn &= incomp[static_cast<std::size_t>(q)] != 0;
                    }
                    if (qconn) {
                        std::sort(comp.begin(), comp.end());
                        if (comp != child.emitted.back() &&
                            comp.size() > child.emitted.back().size())
                            child.emitted.push_back(comp);
                    }
                }
                stack.push_back(std::move(child));
            });
        }
    }
    return rs;
}

inline ResultSet ls_search(const RoadSocialNetwork& rsn, const std::vector<int>& Q, int k,
                           double t, const Region& region, SearchMode mode, int j = 1,
                           const ExpandParams& params = {}) {
    auto core = maximal_kt_core(rsn, Q, k, t);
    if (!core) {
        ResultSet rs;
        rs.mode = mode;
        rs.j = mode == SearchMode::TopJ ? j : 1;
        rs.no_core = true;
        return rs;
    }
    DominanceGraph gd = build_rdominance_graph(*core, region, rsn.social.attributes);
    return ls_search_prepared(rsn, Q, k, t, region, mode, j, params, gd);
}

}  // namespace macs
