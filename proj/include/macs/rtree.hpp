#pragma once

// Bounding-box tree over attribute vectors, bulk-loaded sort-tile-recursive
// with fixed fanout. Each node keeps its box's upper-right corner, the sort
// key the adapted best-first sweep needs.

#include <algorithm>
#include <cmath>
#include <vector>

#include "macs/geometry.hpp"

namespace macs {

struct RTreeNode {
    std::vector<double> lo, hi;   // bounding box
    std::vector<int> children;    // node indices (internal) ...
    std::vector<int> entries;     // ... or vertex ids (leaf)
    bool leaf = false;
};

class SpatialIndex {
public:
    static constexpr int kFanout = 16;

    SpatialIndex() = default;

    // items: (vertex id, attribute vector)
    SpatialIndex(const std::vector<int>& ids, const AttributeTable& X) {
        if (ids.empty()) throw std::invalid_argument("spatial index: empty input");
        dim_ = static_cast<int>(X[static_cast<std::size_t>(ids[0])].size());
        std::vector<int> sorted = ids;
        root_ = build_leafless(sorted, X, 0);
    }

    int root() const { return root_; }
    const RTreeNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    int dim() const { return dim_; }
    std::size_t node_count() const { return nodes_.size(); }

    // depth-first membership scan used by tests
    bool findable(int id, const std::vector<double>& x) const {
        return find_rec(root_, id, x);
    }

private:
    int build_leafless(std::vector<int>& ids, const AttributeTable& X, int depth) {
        if (static_cast<int>(ids.size()) <= kFanout) {
            RTreeNode n;
            n.leaf = true;
            n.entries = ids;
            box_of_entries(n, X);
            nodes_.push_back(std::move(n));
            return static_cast<int>(nodes_.size()) - 1;
        }
        // sort-tile-recursive: sort by the cycling dimension, slice into
        // fanout groups of near-equal size, recurse
        int axis = depth % dim_;
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            double xa = X[static_cast<std::size_t>(a)][static_cast<std::size_t>(axis)];
            double xb = X[static_cast<std::size_t>(b)][static_cast<std::size_t>(axis)];
            return xa != xb ? xa < xb : a < b;
        });
        std::size_t groups = std::min<std::size_t>(kFanout,
            (ids.size() + kFanout - 1) / kFanout);
        std::size_t per = (ids.size() + groups - 1) / groups;
        RTreeNode n;
        for (std::size_t i = 0; i < ids.size(); i += per) {
            std::vector<int> part(ids.begin() + static_cast<long>(i),
                                  ids.begin() + static_cast<long>(std::min(ids.size(), i + per)));
            n.children.push_back(build_leafless(part, X, depth + 1));
        }
        box_of_children(n);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    void box_of_entries(RTreeNode& n, const AttributeTable& X) {
        n.lo.assign(static_cast<std::size_t>(dim_), 0);
        n.hi.assign(static_cast<std::size_t>(dim_), 0);
        bool first = true;
        for (int id : n.entries) {
            const auto& x = X[static_cast<std::size_t>(id)];
            for (int i = 0; i < dim_; ++i) {
                if (first || x[static_cast<std::size_t>(i)] < n.lo[static_cast<std::size_t>(i)])
                    n.lo[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
                if (first || x[static_cast<std::size_t>(i)] > n.hi[static_cast<std::size_t>(i)])
                    n.hi[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
            }
            first = false;
        }
    }

    void box_of_children(RTreeNode& n) {
        bool first = true;
        n.lo.assign(static_cast<std::size_t>(dim_), 0);
        n.hi.assign(static_cast<std::size_t>(dim_), 0);
        for (int c : n.children) {
            const auto& cn = nodes_[static_cast<std::size_t>(c)];
            for (int i = 0; i < dim_; ++i) {
                if (first || cn.lo[static_cast<std::size_t>(i)] < n.lo[static_cast<std::size_t>(i)])
                    n.lo[static_cast<std::size_t>(i)] = cn.lo[static_cast<std::size_t>(i)];
                if (first || cn.hi[static_cast<std::size_t>(i)] > n.hi[static_cast<std::size_t>(i)])
                    n.hi[static_cast<std::size_t>(i)] = cn.hi[static_cast<std::size_t>(i)];
            }
            first = false;
        }
    }

    bool find_rec(int ni, int id, const std::vector<double>& x) const {
        const auto& n = nodes_[static_cast<std::size_t>(ni)];
        for (int i = 0; i < dim_; ++i)
            if (x[static_cast<std::size_t>(i)] < n.lo[static_cast<std::size_t>(i)] ||
                x[static_cast<std::size_t>(i)] > n.hi[static_cast<std::size_t>(i)])
                return false;
        if (n.leaf) {
            for (int e : n.entries)
                if (e == id) return true;
            return false;
        }
        for (int c : n.children)
            if (find_rec(c, id, x)) return true;
        return false;
    }

    std::vector<RTreeNode> nodes_;
    int root_ = -1;
    int dim_ = 0;
};

}  // namespace macs
