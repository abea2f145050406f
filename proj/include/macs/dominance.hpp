#pragma once

// The r-dominance graph G_d: a transitively reduced DAG of pairwise
// r-dominance over the maximal (k,t)-core, built by a best-first sweep over
// the spatial index keyed by pivot score.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <vector>

#include "macs/geometry.hpp"
#include "macs/ktcore.hpp"
#include "macs/rtree.hpp"

namespace macs {

namespace detail {

// fixed-width bitset over local indices
struct BitRows {
    std::size_t words = 0;
    std::vector<std::uint64_t> bits;

    void init(std::size_t n) {
        words = (n + 63) / 64;
        bits.assign(n * words, 0);
    }
    void set(std::size_t row, std::size_t col) {
        bits[row * words + col / 64] |= std::uint64_t{1} << (col % 64);
    }
    bool test(std::size_t row, std::size_t col) const {
        return bits[row * words + col / 64] >> (col % 64) & 1;
    }
    void or_into(std::size_t dst, std::size_t src) {
        for (std::size_t w = 0; w < words; ++w) bits[dst * words + w] |= bits[src * words + w];
    }
    int popcount(std::size_t row) const {
        int c = 0;
        for (std::size_t w = 0; w < words; ++w)
            c += __builtin_popcountll(bits[row * words + w]);
        return c;
    }
};

}  // namespace detail

class DominanceGraph {
public:
    // vertex ids of H_k^t, ascending
    const std::vector<int>& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }
    int local(int v) const {
        auto it = std::lower_bound(members_.begin(), members_.end(), v);
        if (it == members_.end() || *it != v)
            throw std::out_of_range("dominance graph: unknown vertex");
        return static_cast<int>(it - members_.begin());
    }
    bool has(int v) const {
        auto it = std::lower_bound(members_.begin(), members_.end(), v);
        return it != members_.end() && *it == v;
    }

    // reduced arcs as (dominator, dominee) vertex-id pairs
    const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }

    int layer_of(int v) const { return layer_[static_cast<std::size_t>(local(v))]; }
    int rdominance_count(int v) const { return count_[static_cast<std::size_t>(local(v))]; }
    int max_layer() const {
        int m = 0;
        for (int l : layer_) m = std::max(m, l);
        return m;
    }

    bool dominates(int u, int v) const {
        return anc_.test(static_cast<std::size_t>(local(v)), static_cast<std::size_t>(local(u)));
    }
    // local-index form: does lu dominate lv?
    bool dominates_local(int lu, int lv) const {
        return anc_.test(static_cast<std::size_t>(lv), static_cast<std::size_t>(lu));
    }

    // no outgoing arc == dominates nobody
    std::vector<int> leaves() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < members_.size(); ++i)
            if (out_deg_[i] == 0) out.push_back(members_[i]);
        return out;
    }
    std::vector<int> roots() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < members_.size(); ++i)
            if (count_[i] == 0) out.push_back(members_[i]);
        return out;
    }

    void dump_dot(std::ostream& os, const std::vector<std::string>& labels) const {
        os << "digraph rdominance {\n";
        for (int v : members_)
            os << "  \"" << labels[static_cast<std::size_t>(v)] << "\" [layer=" << layer_of(v)
               << "];\n";
        for (const auto& [u, v] : arcs_)
            os << "  \"" << labels[static_cast<std::size_t>(u)] << "\" -> \""
               << labels[static_cast<std::size_t>(v)] << "\";\n";
        os << "}\n";
    }

    // pivot scores in pop order, exposed for the ordering property
    const std::vector<double>& pop_order_scores() const { return pop_scores_; }

    friend DominanceGraph build_rdominance_graph(const std::vector<int>&,
                                                 const AttributeTable&, const Region&);

    // Rebuild derived state (ancestors, layers, counts) from members + arcs;
    // used by index deserialization.
    static DominanceGraph from_arcs(std::vector<int> members,
                                    std::vector<std::pair<int, int>> arcs) {
        DominanceGraph g;
        g.members_ = std::move(members);
        std::sort(g.members_.begin(), g.members_.end());
        g.arcs_ = std::move(arcs);
        const std::size_t n = g.members_.size();
        g.anc_.init(n);
        g.layer_.assign(n, 0);
        g.count_.assign(n, 0);
        g.out_deg_.assign(n, 0);
        std::vector<std::vector<int>> parents(n);
        std::vector<int> indeg(n, 0);
        for (const auto& [u, v] : g.arcs_) {
            int lu = g.local(u), lv = g.local(v);
            parents[static_cast<std::size_t>(lv)].push_back(lu);
            ++indeg[static_cast<std::size_t>(lv)];
            ++g.out_deg_[static_cast<std::size_t>(lu)];
        }
        // topological sweep
        std::vector<int> q;
        for (std::size_t i = 0; i < n; ++i)
            if (indeg[i] == 0) q.push_back(static_cast<int>(i));
        std::vector<std::vector<int>> children(n);
        for (const auto& [u, v] : g.arcs_)
            children[static_cast<std::size_t>(g.local(u))].push_back(g.local(v));
        for (std::size_t h = 0; h < q.size(); ++h) {
            int x = q[h];
            for (int p : parents[static_cast<std::size_t>(x)]) {
                g.anc_.set(static_cast<std::size_t>(x), static_cast<std::size_t>(p));
                g.anc_.or_into(static_cast<std::size_t>(x), static_cast<std::size_t>(p));
                g.layer_[static_cast<std::size_t>(x)] =
                    std::max(g.layer_[static_cast<std::size_t>(x)],
                             g.layer_[static_cast<std::size_t>(p)] + 1);
            }
            g.count_[static_cast<std::size_t>(x)] =
                g.anc_.popcount(static_cast<std::size_t>(x));
            for (int c : children[static_cast<std::size_t>(x)])
                if (--indeg[static_cast<std::size_t>(c)] == 0) q.push_back(c);
        }
        if (q.size() != n) throw std::runtime_error("dominance graph: arc set has a cycle");
        return g;
    }

private:
    std::vector<int> members_;
    std::vector<std::pair<int, int>> arcs_;
    detail::BitRows anc_;          // row v: bit u set iff u r-dominates v
    std::vector<int> layer_;
    std::vector<int> count_;
    std::vector<int> out_deg_;
    std::vector<double> pop_scores_;
};

// Adapted best-first sweep: a max-heap keyed by the score of an R-tree box
// (upper-right corner) or vertex w.r.t. the region's pivot. Vertices popped
// later cannot r-dominate earlier ones (ties resolved by id), so arcs always
// run from confirmed vertices to the newcomer; transitive reduction is
// maintained incrementally.
inline DominanceGraph build_rdominance_graph(const std::vector<int>& member_ids,
                                             const AttributeTable& X, const Region& region) {
    if (member_ids.empty()) throw std::invalid_argument("build_rdominance_graph: empty core");
    DominanceGraph g;
    g.members_ = member_ids;
    std::sort(g.members_.begin(), g.members_.end());
    const std::size_t n = g.members_.size();
    g.anc_.init(n);
    g.layer_.assign(n, 0);
    g.count_.assign(n, 0);
    g.out_deg_.assign(n, 0);

    SpatialIndex tree(g.members_, X);

    // full-dimension pivot weight vector reconstructed once
    Weights pivot = region.pivot;
    auto pivot_score = [&](const std::vector<double>& x) { return score(x, pivot); };

    struct Entry {
        double key;
        bool is_vertex;
        int id;        // vertex id or tree node index
        int tested;    // confirmed prefix already tested against (inherited)
        std::shared_ptr<std::vector<int>> known;  // inherited dominators (local ids)
    };
    // boxes before vertices on equal keys, then ascending id
    auto cmp = [](const Entry& a, const Entry& b) {
        if (a.key != b.key) return a.key < b.key;
        if (a.is_vertex != b.is_vertex) return a.is_vertex && !b.is_vertex;
        return a.id > b.id;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

    const auto& rootnode = tree.node(tree.root());
    heap.push({pivot_score(rootnode.hi), false, tree.root(), 0,
               std::make_shared<std::vector<int>>()});

    std::vector<int> confirmed;  // local ids in pop order
    auto corner_signs = [&](const std::vector<double>& xu, const std::vector<double>& xv,
                            bool& pos, bool& neg) {
        const std::size_t d = xu.size();
        double dd = xu[d - 1] - xv[d - 1];
        pos = neg = false;
        for (const auto& c : region.corners) {
            double e = dd;
            for (std::size_t i = 0; i + 1 < d; ++i)
                e += ((xu[i] - xv[i]) - dd) * c[i];
            if (e > 0) pos = true;
            else if (e < 0) neg = true;
        }
    };

    while (!heap.empty()) {
        Entry e = heap.top();
        heap.pop();
        if (!e.is_vertex) {
            const auto& node = tree.node(e.id);
            // extend the inherited dominator set: confirmed vertices that
            // strictly dominate the box's upper-right corner dominate all of it
            auto known = e.known;
            int tested = e.tested;
            if (tested < static_cast<int>(confirmed.size())) {
                auto ext = std::make_shared<std::vector<int>>(*known);
                for (std::size_t ci = static_cast<std::size_t>(tested); ci < confirmed.size(); ++ci) {
                    int lu = confirmed[ci];
                    bool pos, neg;
                    corner_signs(X[static_cast<std::size_t>(g.members_[static_cast<std::size_t>(lu)])],
                                 node.hi, pos, neg);
                    if (pos && !neg) ext->push_back(lu);
                }
                known = ext;
                tested = static_cast<int>(confirmed.size());
            }
            if (node.leaf) {
                for (int vid : node.entries) {
                    const auto& xv = X[static_cast<std::size_t>(vid)];
                    heap.push({pivot_score(xv), true, vid, tested, known});
                }
            } else {
                for (int c : node.children)
                    heap.push({pivot_score(tree.node(c).hi), false, c, tested, known});
            }
            continue;
        }

        // vertex pop: dominators = inherited + tests against the rest
        int lv = g.local(e.id);
        g.pop_scores_.push_back(e.key);
        std::vector<char> dominated(n, 0);
        for (int lu : *e.known) dominated[static_cast<std::size_t>(lu)] = 1;
        const auto& xv = X[static_cast<std::size_t>(e.id)];
        for (std::size_t ci = 0; ci < confirmed.size(); ++ci) {
            int lu = confirmed[ci];
            if (dominated[static_cast<std::size_t>(lu)]) continue;
            if (static_cast<int>(ci) < e.tested) continue;  // covered by box tests
            int uid = g.members_[static_cast<std::size_t>(lu)];
            bool pos, neg;
            corner_signs(X[static_cast<std::size_t>(uid)], xv, pos, neg);
            bool dom = (pos && !neg) || (!pos && !neg && uid < e.id);
            if (dom) dominated[static_cast<std::size_t>(lu)] = 1;
        }
        // ancestors row, count, reduced parents (dominators with no
        // dominated descendant), layer
        std::vector<int> doms;
        for (std::size_t lu = 0; lu < n; ++lu)
            if (dominated[lu]) {
                doms.push_back(static_cast<int>(lu));
                g.anc_.set(static_cast<std::size_t>(lv), lu);
            }
        g.count_[static_cast<std::size_t>(lv)] = static_cast<int>(doms.size());
        int layer = 0;
        for (int lu : doms) {
            bool has_desc = false;
            for (int lw : doms)
                if (lw != lu && g.anc_.test(static_cast<std::size_t>(lw), static_cast<std::size_t>(lu))) {
                    has_desc = true;
                    break;
                }
            layer = std::max(layer, g.layer_[static_cast<std::size_t>(lu)] + 1);
            if (!has_desc) {
                g.arcs_.emplace_back(g.members_[static_cast<std::size_t>(lu)], e.id);
                ++g.out_deg_[static_cast<std::size_t>(lu)];
            }
        }
        g.layer_[static_cast<std::size_t>(lv)] = layer;
        confirmed.push_back(lv);
    }
    std::sort(g.arcs_.begin(), g.arcs_.end());
    return g;
}

inline DominanceGraph build_rdominance_graph(const KTCore& core, const Region& region,
                                             const AttributeTable& X) {
    return build_rdominance_graph(core.subgraph.members(), X, region);
}

// Live view of G_d restricted to a member subset, with layers/counts/leaf
// and top sets recomputed against the projected dominance relation.
class DominanceView {
public:
    DominanceView(const DominanceGraph& gd, const std::vector<int>& members)
        : gd_(&gd), in_(static_cast<std::size_t>(gd.size()), 0) {
        for (int v : members)
            if (gd.has(v)) {
                in_[static_cast<std::size_t>(gd.local(v))] = 1;
                locals_.push_back(gd.local(v));
            }
        std::sort(locals_.begin(), locals_.end());
    }

    bool contains(int v) const {
        return gd_->has(v) && in_[static_cast<std::size_t>(gd_->local(v))];
    }

    // vertices dominating nobody inside the view
    std::vector<int> leaf_set() const {
        std::vector<int> out;
        for (int lv : locals_) {
            bool dominates_any = false;
            for (int lu : locals_) {
                if (lu == lv) continue;
                if (gd_->dominates_local(lv, lu)) { dominates_any = true; break; }
            }
            if (!dominates_any) out.push_back(gd_->members()[static_cast<std::size_t>(lv)]);
        }
        return out;
    }

    // vertices dominated by nobody inside the view
    std::vector<int> top_set() const {
        std::vector<int> out;
        for (int lv : locals_) {
            bool dominated = false;
            for (int lu : locals_) {
                if (lu == lv) continue;
                if (gd_->dominates_local(lu, lv)) { dominated = true; break; }
            }
            if (!dominated) out.push_back(gd_->members()[static_cast<std::size_t>(lv)]);
        }
        return out;
    }

    int local_count(int v) const {
        int lv = gd_->local(v);
        int c = 0;
        for (int lu : locals_)
            if (lu != lv && gd_->dominates_local(lu, lv)) ++c;
        return c;
    }

    // longest dominance chain inside the view ending at v
    int local_layer(int v) const {
        std::vector<int> order = locals_;
        std::vector<int> layer(static_cast<std::size_t>(gd_->size()), 0);
        auto count_in_view = [&](int lv) {
            int c = 0;
            for (int lu : locals_)
                if (lu != lv && gd_->dominates_local(lu, lv)) ++c;
            return c;
        };
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            int ca = count_in_view(a), cb = count_in_view(b);
            return ca != cb ? ca < cb : a < b;
        });
        for (int lv : order) {
            int l = 0;
            for (int lu : locals_)
                if (lu != lv && gd_->dominates_local(lu, lv))
                    l = std::max(l, layer[static_cast<std::size_t>(lu)] + 1);
            layer[static_cast<std::size_t>(lv)] = l;
        }
        return layer[static_cast<std::size_t>(gd_->local(v))];
    }

    // direct successors of v in the projected, reduced relation
    std::vector<int> direct_children(int v) const {
        int lv = gd_->local(v);
        std::vector<int> dominees;
        for (int lu : locals_)
            if (lu != lv && gd_->dominates_local(lv, lu)) dominees.push_back(lu);
        std::vector<int> out;
        for (int lu : dominees) {
            bool via = false;
            for (int lw : dominees)
                if (lw != lu && gd_->dominates_local(lw, lu)) { via = true; break; }
            if (!via) out.push_back(gd_->members()[static_cast<std::size_t>(lu)]);
        }
        return out;
    }

    std::vector<int> member_ids() const {
        std::vector<int> out;
        for (int lv : locals_) out.push_back(gd_->members()[static_cast<std::size_t>(lv)]);
        return out;
    }

private:
    const DominanceGraph* gd_;
    std::vector<char> in_;
    std::vector<int> locals_;
};

// (G_e, G_c): the dominance graph restricted to a candidate's members and to
// the rest of H_k^t.
inline std::pair<DominanceView, DominanceView> induced_views(const DominanceGraph& gd,
                                                             const std::vector<int>& members) {
    std::vector<char> in(static_cast<std::size_t>(gd.size()), 0);
    for (int v : members) {
        if (!gd.has(v)) throw std::invalid_argument("induced_views: member not in G_d");
        in[static_cast<std::size_t>(gd.local(v))] = 1;
    }
    std::vector<int> rest;
    for (int i = 0; i < gd.size(); ++i)
        if (!in[static_cast<std::size_t>(i)]) rest.push_back(gd.members()[static_cast<std::size_t>(i)]);
    return {DominanceView(gd, members), DominanceView(gd, rest)};
}

}  // namespace macs
