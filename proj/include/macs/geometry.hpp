#pragma once

// Preference-domain geometry: vertex scores, score-comparison half-spaces,
// the r-dominance test against a convex region, feasibility of signed
// half-space systems, and the recursive arrangement index.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace macs {

using Weights = std::vector<double>;          // point in the (d-1)-dim preference domain
using AttributeTable = std::vector<std::vector<double>>;  // per-vertex d-dim vectors

constexpr double kFeasEps = 1e-9;  // min-slack tolerance for cell interiors

// Convex region of admissible weight vectors, stored as its corner list.
// Axis-parallel rectangles are the common case; any convex polytope given
// by its vertices works.
struct Region {
    int dim = 0;
    std::vector<Weights> corners;
    Weights pivot;                 // per-dimension mean of the corners
    // set for rectangles only, used by uniform sampling
    Weights rect_lo, rect_hi;

    static Region rectangle(const Weights& lo, const Weights& hi) {
        if (lo.size() != hi.size() || lo.empty())
            throw std::invalid_argument("region: lo/hi dimension mismatch");
        Region r;
        r.dim = static_cast<int>(lo.size());
        for (int i = 0; i < r.dim; ++i)
            if (!(lo[i] < hi[i]))
                throw std::invalid_argument("region: requires lo < hi per dimension");
        const std::size_t n = std::size_t{1} << r.dim;
        for (std::size_t mask = 0; mask < n; ++mask) {
            Weights c(r.dim);
            for (int i = 0; i < r.dim; ++i)
                c[i] = (mask >> i & 1) ? hi[i] : lo[i];
            r.corners.push_back(std::move(c));
        }
        r.rect_lo = lo;
        r.rect_hi = hi;
        r.compute_pivot();
        return r;
    }

    static Region polytope(std::vector<Weights> pts) {
        if (pts.empty()) throw std::invalid_argument("region: no corners");
        Region r;
        r.dim = static_cast<int>(pts[0].size());
        for (const auto& p : pts)
            if (static_cast<int>(p.size()) != r.dim)
                throw std::invalid_argument("region: mixed corner dimensions");
        r.corners = std::move(pts);
        r.compute_pivot();
        return r;
    }

    void compute_pivot() {
        pivot.assign(dim, 0.0);
        for (const auto& c : corners)
            for (int i = 0; i < dim; ++i) pivot[i] += c[i];
        for (int i = 0; i < dim; ++i) pivot[i] /= static_cast<double>(corners.size());
    }

    bool is_rectangle() const { return !rect_lo.empty(); }

    // Uniform for rectangles; a random convex combination otherwise
    // (interior, not uniform -- fine for property sampling).
    Weights sample(std::mt19937_64& rng) const {
        Weights w(dim);
        if (is_rectangle()) {
            for (int i = 0; i < dim; ++i) {
                std::uniform_real_distribution<double> u(rect_lo[i], rect_hi[i]);
                w[i] = u(rng);
            }
            return w;
        }
        std::vector<double> lam(corners.size());
        std::exponential_distribution<double> e(1.0);
        double s = 0;
        for (auto& l : lam) { l = e(rng) + 1e-6; s += l; }
        for (std::size_t j = 0; j < corners.size(); ++j)
            for (int i = 0; i < dim; ++i) w[i] += lam[j] / s * corners[j][i];
        return w;
    }
};

// Reconstructs the dropped weight w_d = 1 - sum(w_i) and checks the open
// simplex condition the scoring model assumes.
inline double last_weight(const Weights& w) {
    double s = 0;
    for (double x : w) {
        if (!(x > 0.0 && x < 1.0))
            throw std::domain_error("weight outside open simplex");
        s += x;
    }
    if (!(s < 1.0)) throw std::domain_error("weight outside open simplex");
    return 1.0 - s;
}

// S(v) = sum_i w_i x_i with w_d reconstructed.
inline double score(const std::vector<double>& x, const Weights& w) {
    const std::size_t d = x.size();
    if (w.size() + 1 != d) throw std::invalid_argument("score: weight/attribute dim mismatch");
    double wd = last_weight(w);
    double s = wd * x[d - 1];
    for (std::size_t i = 0; i + 1 < d; ++i) s += w[i] * x[i];
    return s;
}

inline double score(int v, const Weights& w, const AttributeTable& X) {
    return score(X[static_cast<std::size_t>(v)], w);
}

// min-score member and its vertex; ties by smallest id.
inline std::pair<double, int> community_score(const std::vector<int>& members,
                                              const Weights& w,
                                              const AttributeTable& X) {
    if (members.empty()) throw std::invalid_argument("community_score: empty member set");
    double best = 0;
    int arg = -1;
    for (int v : members) {
        double s = score(v, w, X);
        if (arg < 0 || s < best || (s == best && v < arg)) {
            best = s;
            arg = v;
        }
    }
    return {best, arg};
}

// Deletion victim at a fixed weight: minimum score; exact ties (identical
// attribute vectors) resolved toward the larger id, mirroring the
// r-dominance tie rule where the lower id dominates and is deleted last.
inline int smallest_score_victim(const std::vector<int>& members, const Weights& w,
                                 const AttributeTable& X) {
    double best = 0;
    int arg = -1;
    for (int v : members) {
        double s = score(v, w, X);
        if (arg < 0 || s < best || (s == best && v > arg)) {
            best = s;
            arg = v;
        }
    }
    return arg;
}

// Half-space a.w + b >= 0 over the preference domain, meaning S(winner) >= S(loser).
struct HalfSpace {
    std::vector<double> a;
    double b = 0;
    int winner = -1, loser = -1;

    double eval(const Weights& w) const {
        double s = b;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * w[i];
        return s;
    }
    double norm() const {
        double s = 0;
        for (double x : a) s += x * x;
        return std::sqrt(s);
    }
};

// The reduction is: with delta_i = x_i^u - x_i^v,
//   S(u) - S(v) = delta_d + sum_{i<d} w_i (delta_i - delta_d),
// so a_i = delta_i - delta_d and b = delta_d.
inline HalfSpace halfspace_of(int u, int v, const AttributeTable& X) {
    if (u == v) throw std::invalid_argument("halfspace_of: u == v");
    const auto& xu = X[static_cast<std::size_t>(u)];
    const auto& xv = X[static_cast<std::size_t>(v)];
    const std::size_t d = xu.size();
    HalfSpace hs;
    hs.winner = u;
    hs.loser = v;
    const double dd = xu[d - 1] - xv[d - 1];
    hs.a.resize(d - 1);
    for (std::size_t i = 0; i + 1 < d; ++i) hs.a[i] = (xu[i] - xv[i]) - dd;
    hs.b = dd;
    return hs;
}

enum class RDominance { Dominates, DominatedBy, Incomparable };

// Corner test: S(u) >= S(v) at every polygon vertex of the region means u
// r-dominates v. Exact equality on all corners is resolved by ids so the
// relation stays a DAG (lower id dominates).
inline RDominance r_dominance_test(int u, int v, const Region& region,
                                   const AttributeTable& X) {
    HalfSpace hs = halfspace_of(u, v, X);
    bool pos = false, neg = false;
    for (const auto& c : region.corners) {
        double e = hs.eval(c);
        if (e > 0) pos = true;
        else if (e < 0) neg = true;
    }
    if (pos && neg) return RDominance::Incomparable;
    if (pos) return RDominance::Dominates;
    if (neg) return RDominance::DominatedBy;
    return u < v ? RDominance::Dominates : RDominance::DominatedBy;
}

// side +1: a.w + b >= 0, side -1: a.w + b <= 0
struct SignedHalfSpace {
    const HalfSpace* hs;
    int side;
    double eval(const Weights& w) const { return side * hs->eval(w); }
};

namespace detail {

// Dense primal simplex (Bland's rule) for:  max c.x  s.t.  A x <= b, x >= 0.
// Small dense systems only. Returns optimal objective; `duals` receives the
// objective-row coefficients under the slack columns (shadow prices).
inline double simplex_max(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b,
                          const std::vector<double>& c,
                          std::vector<double>& duals) {
    const std::size_t m = A.size(), n = c.size();
    // tableau: m rows x (n + m + 1) cols, last col = rhs
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
        t[i][n + i] = 1.0;
        t[i][n + m] = b[i];
    }
    for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    constexpr double tol = 1e-11;
    for (int iter = 0; iter < 10000; ++iter) {
        // entering: Bland -- smallest index with negative reduced cost
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m; ++j)
            if (t[m][j] < -tol) { enter = j; break; }
        if (enter == n + m) break;  // optimal
        // leaving: min ratio, Bland ties by basis index
        std::size_t leave = m;
        double best = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > tol) {
                double ratio = t[i][n + m] / t[i][enter];
                if (leave == m || ratio < best - tol ||
                    (ratio < best + tol && basis[i] < basis[leave]))
                    { leave = i; best = ratio; }
            }
        }
        if (leave == m) throw std::runtime_error("simplex: unbounded");
        // pivot
        double p = t[leave][enter];
        for (auto& x : t[leave]) x /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double f = t[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    duals.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) duals[i] = t[m][n + i];
    return t[m][n + m];
}

}  // namespace detail

// Decides whether region ∩ signed half-spaces has a (strictly) feasible
// interior and returns a witness that maximises the minimum slack.
//
// Formulated over convex coefficients of the region corners: with
// e_ij = side_i * hs_i(corner_j) / |a_i|, the max-min slack equals the value
// of the matrix game max_{λ in Δ} min_i (Eλ)_i, solved by one small LP.
inline std::optional<Weights> cell_feasible(const std::vector<SignedHalfSpace>& constraints,
                                            const Region& region) {
    const std::size_t p = region.corners.size();
    std::vector<std::vector<double>> E;  // rows: constraints, cols: corners
    for (const auto& sc : constraints) {
        if (static_cast<int>(sc.hs->a.size()) != region.dim)
            throw std::invalid_argument("cell_feasible: half-space dimension mismatch");
        double nrm = sc.hs->norm();
        if (nrm < 1e-300) {
            // degenerate half-space (identical attribute vectors)
            if (sc.side * sc.hs->b < 0) return std::nullopt;
            continue;
        }
        std::vector<double> row(p);
        for (std::size_t j = 0; j < p; ++j)
            row[j] = sc.eval(region.corners[j]) / nrm;
        E.push_back(std::move(row));
    }
    if (E.empty()) return region.pivot;

    double L = 1.0;
    for (const auto& r : E)
        for (double x : r) L = std::max(L, std::abs(x) + 1.0);

    // dual game LP: max 1.y  s.t.  E'^T y <= 1, y >= 0  (E' = E + L > 0)
    const std::size_t rows = E.size();
    std::vector<std::vector<double>> A(p, std::vector<double>(rows));
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < rows; ++i) A[j][i] = E[i][j] + L;
    std::vector<double> rhs(p, 1.0), obj(rows, 1.0), duals;
    double z = detail::simplex_max(A, rhs, obj, duals);
    if (z <= 0) return std::nullopt;  // cannot happen with E' > 0, kept as a guard
    double value = 1.0 / z - L;
    if (value <= kFeasEps) return std::nullopt;

    double lsum = 0;
    for (double d : duals) lsum += d;
    Weights w(region.dim, 0.0);
    if (lsum <= 0) return std::nullopt;
    for (std::size_t j = 0; j < p; ++j) {
        double lam = duals[j] / lsum;
        for (int i = 0; i < region.dim; ++i) w[i] += lam * region.corners[j][i];
    }
    // recheck the witness against the exact constraint arithmetic
    for (const auto& sc : constraints) {
        double nrm = sc.hs->norm();
        if (nrm < 1e-300) continue;
        if (sc.eval(w) / nrm <= kFeasEps) return std::nullopt;
    }
    return w;
}

struct Cell {
    std::vector<SignedHalfSpace> constraints;
    Weights witness;
};

// Recursive binary partition of a region by half-space boundaries.
// Internal nodes carry the splitting hyperplane; leaves carry cells with
// their accumulated signed constraints and an interior witness.
class Arrangement {
public:
    explicit Arrangement(const Region& region) : region_(&region) {
        nodes_.push_back(Node{});
        nodes_[0].cell.witness = region.pivot;
    }
    Arrangement(const Region& region, Cell root_cell) : region_(&region) {
        nodes_.push_back(Node{});
        nodes_[0].cell = std::move(root_cell);
    }

    const Region& region() const { return *region_; }

    // Routes the hyperplane down the tree; splits leaves it properly crosses,
    // annotates leaves it only touches on one side.
    void insert(const HalfSpace* hs) {
        if (static_cast<int>(hs->a.size()) != region_->dim)
            throw std::invalid_argument("arrangement: hyperplane dimension mismatch");
        // fast reject: one-signed on the whole region
        bool pos = false, neg = false;
        for (const auto& c : region_->corners) {
            double e = hs->eval(c);
            if (e > 0) pos = true;
            if (e < 0) neg = true;
        }
        if (!(pos && neg)) return;
        insert_rec(0, hs);
        ++inserted_;
    }

    int inserted_count() const { return inserted_; }

    template <typename F>
    void for_each_leaf(F&& f) const {
        for (const auto& n : nodes_)
            if (n.leaf) f(n.cell);
    }

    std::vector<const Cell*> leaves() const {
        std::vector<const Cell*> out;
        for (const auto& n : nodes_)
            if (n.leaf) out.push_back(&n.cell);
        return out;
    }

    // Leaf cell whose side sequence matches w.
    const Cell& locate(const Weights& w) const {
        std::size_t i = 0;
        while (!nodes_[i].leaf)
            i = nodes_[i].hp->eval(w) >= 0 ? nodes_[i].plus : nodes_[i].minus;
        return nodes_[i].cell;
    }

private:
    struct Node {
        bool leaf = true;
        const HalfSpace* hp = nullptr;
        std::size_t plus = 0, minus = 0;
        Cell cell;
    };

    void insert_rec(std::size_t idx, const HalfSpace* hs) {
        if (!nodes_[idx].leaf) {
            std::size_t p = nodes_[idx].plus, m = nodes_[idx].minus;
            insert_rec(p, hs);
            insert_rec(m, hs);
            return;
        }
        Cell& cell = nodes_[idx].cell;
        const double at_witness = hs->eval(cell.witness);
        const double nrm = hs->norm();
        if (nrm < 1e-300) return;  // degenerate, no geometric content

        int wside = at_witness >= 0 ? +1 : -1;
        bool witness_strict = std::abs(at_witness) / nrm > kFeasEps;

        auto try_side = [&](int side) {
            auto cs = cell.constraints;
            cs.push_back({hs, side});
            return std::pair{cell_feasible(cs, *region_), std::move(cs)};
        };

        if (witness_strict) {
            // witness side is feasible for free; test only the opposite side
            auto [oppw, oppcs] = try_side(-wside);
            if (!oppw) {
                cell.constraints.push_back({hs, wside});  // forced side, no split
                return;
            }
            split(idx, hs, wside, cell.witness, std::move(*oppw));
        } else {
            auto [pw, pcs] = try_side(+1);
            auto [mw, mcs] = try_side(-1);
            if (pw && mw) {
                split(idx, hs, +1, std::move(*pw), std::move(*mw));
            } else if (pw) {
                cell.constraints.push_back({hs, +1});
                cell.witness = std::move(*pw);
            } else if (mw) {
                cell.constraints.push_back({hs, -1});
                cell.witness = std::move(*mw);
            }
            // both infeasible: degenerate sliver, leave the cell untouched
        }
    }

    void split(std::size_t idx, const HalfSpace* hs, int first_side,
               Weights w_first, Weights w_opp) {
        Node a, b;
        a.cell.constraints = nodes_[idx].cell.constraints;
        a.cell.constraints.push_back({hs, first_side});
        a.cell.witness = std::move(w_first);
        b.cell.constraints = nodes_[idx].cell.constraints;
        b.cell.constraints.push_back({hs, -first_side});
        b.cell.witness = std::move(w_opp);
        std::size_t ia = nodes_.size();
        nodes_.push_back(std::move(a));
        std::size_t ib = nodes_.size();
        nodes_.push_back(std::move(b));
        nodes_[idx].leaf = false;
        nodes_[idx].hp = hs;
        nodes_[idx].cell = Cell{};
        nodes_[idx].plus = first_side > 0 ? ia : ib;
        nodes_[idx].minus = first_side > 0 ? ib : ia;
    }

    const Region* region_;
    std::vector<Node> nodes_;
    int inserted_ = 0;
};

// Query-lifetime cache of pairwise score half-spaces; each pair is computed
// once and owns stable storage.
class HalfSpaceCache {
public:
    explicit HalfSpaceCache(const AttributeTable& X) : X_(&X) {}

    // canonical orientation: winner = smaller id
    const HalfSpace* canonical(int u, int v) {
        auto key = std::minmax(u, v);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            store_.push_back(halfspace_of(key.first, key.second, *X_));
            it = cache_.emplace(key, &store_.back()).first;
        }
        return it->second;
    }

    std::size_t size() const { return store_.size(); }

private:
    const AttributeTable* X_;
    std::map<std::pair<int, int>, const HalfSpace*> cache_;
    std::deque<HalfSpace> store_;
};

}  // namespace macs
