#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace lvlm {

// Node coordinate, 0-based, one entry per axis.
using Coord = std::vector<std::size_t>;

// Extents of a d-dimensional lattice. Nodes are addressed either by
// coordinate or by their row-major flat index (last axis fastest).
class LatticeShape {
public:
    LatticeShape() = default;
    explicit LatticeShape(std::vector<std::size_t> lengths);

    std::size_t dims() const { return lengths_.size(); }
    std::size_t length(std::size_t axis) const { return lengths_[axis]; }
    std::span<const std::size_t> lengths() const { return lengths_; }
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }
    // Total node count U.
    std::size_t size() const { return size_; }

    bool contains(const Coord& t) const;
    std::size_t index(const Coord& t) const;
    Coord coord(std::size_t index) const;

    bool operator==(const LatticeShape&) const = default;

private:
    std::vector<std::size_t> lengths_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

// Axis-adjacent nodes of t inside the lattice, ordered axis by axis with the
// lower neighbor first. Interior nodes have 2d neighbors.
std::vector<Coord> neighbors(const LatticeShape& shape, const Coord& t);

// Clamped w-window around a node: the hypercube [t-w, t+w] intersected with
// the lattice.
struct WindowRange {
    Coord lo;
    Coord hi;  // inclusive
    std::size_t cells = 0;
};

WindowRange window_bounds(const LatticeShape& shape, const Coord& t, std::size_t w);

// Cell count of an unclamped w-window, (2w+1)^d.
std::size_t full_window_cells(const LatticeShape& shape, std::size_t w);

// Calls f(node_index, coord) for every node in row-major order.
template <class F>
void for_each_node(const LatticeShape& shape, F&& f) {
    if (shape.size() == 0) return;
    Coord c(shape.dims(), 0);
    for (std::size_t i = 0; i < shape.size(); ++i) {
        f(i, static_cast<const Coord&>(c));
        for (std::size_t axis = shape.dims(); axis-- > 0;) {
            if (++c[axis] < shape.length(axis)) break;
            c[axis] = 0;
        }
    }
}

// Calls f(neighbor_index) for each in-lattice neighbor of the node at
// (index, coord), in the same order as neighbors().
template <class F>
void for_each_neighbor(const LatticeShape& shape, std::size_t index, const Coord& c, F&& f) {
    for (std::size_t axis = 0; axis < shape.dims(); ++axis) {
        if (c[axis] > 0) f(index - shape.stride(axis));
        if (c[axis] + 1 < shape.length(axis)) f(index + shape.stride(axis));
    }
}

// Discrete observations: one symbol in [0, alphabet) per node.
struct SymbolLattice {
    LatticeShape shape;
    std::size_t alphabet = 0;
    std::vector<std::uint32_t> symbols;

    void validate() const;
};

// Real observations: one vector in R^dim per node, stored node-major.
struct VectorLattice {
    LatticeShape shape;
    std::size_t dim = 0;
    std::vector<double> values;

    std::span<const double> at(std::size_t node) const { return {values.data() + node * dim, dim}; }
    void validate() const;
};

// An observed lattice of either kind.
using Observation = std::variant<SymbolLattice, VectorLattice>;

// Latent state configuration Q.
struct StateLattice {
    LatticeShape shape;
    std::vector<std::uint32_t> states;

    void validate(std::size_t num_states) const;
};

// Per-node window statistic X: an empirical symbol distribution (discrete)
// or a sample mean (real).
struct SignatureField {
    LatticeShape shape;
    std::size_t dim = 0;
    std::vector<double> values;

    std::span<const double> at(std::size_t node) const { return {values.data() + node * dim, dim}; }
};

// Sliding-window sweep shared by signature computation and the inertia
// index. Nodes are visited in row-major order; along the last axis the
// window is updated incrementally (one slab leaves, one enters), and at the
// start of each row it is rebuilt from scratch.
//
// The accumulator must provide reset(), add(cell), remove(cell) and
// emit(node, cells) where cells is the clamped window's cell count.
template <class Acc>
void sweep_windows(const LatticeShape& shape, std::size_t w, Acc& acc) {
    const std::size_t d = shape.dims();
    if (shape.size() == 0) return;
    const std::size_t last = d - 1;
    const std::size_t row_len = shape.length(last);
    const std::size_t rows = shape.size() / row_len;

    Coord prefix(d, 0);  // only axes [0, last) are used
    std::vector<std::size_t> bases;
    for (std::size_t row = 0; row < rows; ++row) {
        // Flat offsets of every cross-section cell (last coordinate 0) within
        // the clamped window over the leading axes.
        bases.assign(1, 0);
        for (std::size_t axis = 0; axis < last; ++axis) {
            const std::size_t lo = prefix[axis] > w ? prefix[axis] - w : 0;
            const std::size_t hi = std::min(shape.length(axis) - 1, prefix[axis] + w);
            const std::size_t n = bases.size();
            std::vector<std::size_t> next;
            next.reserve(n * (hi - lo + 1));
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t x = lo; x <= hi; ++x) next.push_back(bases[b] + x * shape.stride(axis));
            bases = std::move(next);
        }

        acc.reset();
        std::size_t lo = 0;
        std::size_t hi = std::min(row_len - 1, w);
        for (std::size_t x = lo; x <= hi; ++x)
            for (std::size_t b : bases) acc.add(b + x);

        const std::size_t row_base = row * row_len;
        for (std::size_t x = 0; x < row_len; ++x) {
            acc.emit(row_base + x, bases.size() * (hi - lo + 1));
            if (x + 1 == row_len) break;
            const std::size_t next_lo = x + 1 > w ? x + 1 - w : 0;
            const std::size_t next_hi = std::min(row_len - 1, x + 1 + w);
            for (; lo < next_lo; ++lo)
                for (std::size_t b : bases) acc.remove(b + lo);
            for (; hi < next_hi;) {
                ++hi;
                for (std::size_t b : bases) acc.add(b + hi);
            }
        }

        for (std::size_t axis = last; axis-- > 0;) {
            if (++prefix[axis] < shape.length(axis)) break;
            prefix[axis] = 0;
        }
    }
}

// Empirical symbol distribution over each clamped w-window. Entries are
// symbol counts divided by the window's cell count, so each signature lies
// on the probability simplex.
SignatureField sweep_signatures(const SymbolLattice& lattice, std::size_t w);

// Sample mean of the observation vectors over each clamped w-window.
SignatureField sweep_signatures(const VectorLattice& lattice, std::size_t w);

}  // namespace lvlm
