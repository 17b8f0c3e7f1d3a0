#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hankelgm/errors.hpp"

namespace hankelgm {

// Abscissa carrier for sampled functions on (0, infinity).
//
// The usual construction is geometric: nodes x_min * ratio^i with ratio in
// (1, 2], so that dyadic points land on nodes whenever x_min is a power of two
// and ratio = 2^(1/m).  Outputs of measure-space operations (rearrangements)
// need irregular abscissae, so an explicit strictly-increasing node list is
// also accepted; those may start at 0.
class Grid {
public:
    // Geometric grid covering [x_min, x_max]; the last node is rounded up so
    // the whole interval is covered.
    static Grid geometric(double x_min, double x_max, double ratio) {
        if (!(x_min > 0.0) || !(x_max > x_min))
            throw DomainError("Grid::geometric: need 0 < x_min < x_max");
        if (!(ratio > 1.0) || !(ratio <= 2.0))
            throw DomainError("Grid::geometric: ratio must lie in (1, 2]");
        const double lr = std::log(ratio);
        const std::size_t n =
            static_cast<std::size_t>(std::ceil(std::log(x_max / x_min) / lr - 1e-9));
        std::vector<double> nodes(n + 1);
        // Exponent-based fill keeps dyadic nodes exact when x_min = 2^k and
        // ratio = 2^(1/m): node i is then exp2(k + i/m).
        const double e0 = std::log2(x_min);
        const double em = std::log2(ratio);
        for (std::size_t i = 0; i <= n; ++i) nodes[i] = std::exp2(e0 + em * static_cast<double>(i));
        Grid g;
        g.nodes_ = std::move(nodes);
        g.ratio_ = ratio;
        g.geometric_ = true;
        return g;
    }

    // Convenience: dyadic-aligned grid, m nodes per octave, window [2^e_lo, 2^e_hi].
    static Grid dyadic(int e_lo, int e_hi, int per_octave) {
        if (e_hi <= e_lo) throw DomainError("Grid::dyadic: need e_lo < e_hi");
        if (per_octave < 1 || per_octave > 4096)
            throw DomainError("Grid::dyadic: per_octave out of range");
        const std::size_t n = static_cast<std::size_t>(e_hi - e_lo) * per_octave;
        std::vector<double> nodes(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            nodes[i] = std::exp2(e_lo + static_cast<double>(i) / per_octave);
        Grid g;
        g.nodes_ = std::move(nodes);
        g.ratio_ = std::exp2(1.0 / per_octave);
        g.geometric_ = true;
        g.per_octave_ = per_octave;
        g.e_lo_ = e_lo;
        return g;
    }

    static Grid explicit_nodes(std::vector<double> nodes) {
        if (nodes.size() < 2) throw DomainError("Grid::explicit_nodes: need at least 2 nodes");
        if (nodes.front() < 0.0) throw DomainError("Grid::explicit_nodes: nodes must be >= 0");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1]))
                throw DomainError("Grid::explicit_nodes: nodes must increase strictly");
        Grid g;
        g.nodes_ = std::move(nodes);
        g.ratio_ = 0.0;
        g.geometric_ = false;
        return g;
    }

    const std::vector<double>& nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    std::size_t size() const { return nodes_.size(); }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }
    bool is_geometric() const { return geometric_; }
    double ratio() const { return ratio_; }

    // Dyadic alignment witness: per-octave count when the grid was built as
    // 2^(e_lo + i/m), 0 otherwise.  The dyadic block machinery requires this.
    int per_octave() const { return per_octave_; }
    int e_lo() const { return e_lo_; }

    // Largest i with node(i) <= x (x must be within [front, back]).
    std::size_t locate(double x) const {
        if (x < front() || x > back()) throw DomainError("Grid::locate: x outside window");
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        return static_cast<std::size_t>(it - nodes_.begin()) - 1;
    }

    bool contains(double x) const { return x >= front() && x <= back(); }

private:
    std::vector<double> nodes_;
    double ratio_ = 0.0;
    bool geometric_ = false;
    int per_octave_ = 0;
    int e_lo_ = 0;
};

}  // namespace hankelgm
