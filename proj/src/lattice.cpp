#include "lvlm/lattice.hpp"

#include <cmath>
#include <string>

#include "lvlm/error.hpp"

namespace lvlm {

LatticeShape::LatticeShape(std::vector<std::size_t> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.empty()) throw InputError("lattice must have at least one dimension");
    strides_.assign(lengths_.size(), 1);
    size_ = 1;
    for (std::size_t axis = lengths_.size(); axis-- > 0;) {
        if (lengths_[axis] == 0) throw InputError("lattice lengths must be positive");
        strides_[axis] = size_;
        size_ *= lengths_[axis];
    }
}

bool LatticeShape::contains(const Coord& t) const {
    if (t.size() != dims()) return false;
    for (std::size_t axis = 0; axis < dims(); ++axis)
        if (t[axis] >= lengths_[axis]) return false;
    return true;
}

std::size_t LatticeShape::index(const Coord& t) const {
    if (!contains(t)) throw InputError("coordinate outside lattice");
    std::size_t i = 0;
    for (std::size_t axis = 0; axis < dims(); ++axis) i += t[axis] * strides_[axis];
    return i;
}

Coord LatticeShape::coord(std::size_t index) const {
    if (index >= size_) throw InputError("node index outside lattice");
    Coord c(dims());
    for (std::size_t axis = 0; axis < dims(); ++axis) {
        c[axis] = index / strides_[axis];
        index %= strides_[axis];
    }
    return c;
}

std::vector<Coord> neighbors(const LatticeShape& shape, const Coord& t) {
    if (!shape.contains(t)) throw InputError("coordinate outside lattice");
    std::vector<Coord> out;
    out.reserve(2 * shape.dims());
    for (std::size_t axis = 0; axis < shape.dims(); ++axis) {
        if (t[axis] > 0) {
            out.push_back(t);
            --out.back()[axis];
        }
        if (t[axis] + 1 < shape.length(axis)) {
            out.push_back(t);
            ++out.back()[axis];
        }
    }
    return out;
}

WindowRange window_bounds(const LatticeShape& shape, const Coord& t, std::size_t w) {
    if (!shape.contains(t)) throw InputError("coordinate outside lattice");
    WindowRange r{Coord(shape.dims()), Coord(shape.dims()), 1};
    for (std::size_t axis = 0; axis < shape.dims(); ++axis) {
        r.lo[axis] = t[axis] > w ? t[axis] - w : 0;
        r.hi[axis] = std::min(shape.length(axis) - 1, t[axis] + w);
        r.cells *= r.hi[axis] - r.lo[axis] + 1;
    }
    return r;
}

std::size_t full_window_cells(const LatticeShape& shape, std::size_t w) {
    std::size_t cells = 1;
    for (std::size_t axis = 0; axis < shape.dims(); ++axis) cells *= 2 * w + 1;
    return cells;
}

void SymbolLattice::validate() const {
    if (symbols.size() != shape.size()) throw InputError("symbol payload does not match lattice size");
    if (alphabet == 0) throw InputError("symbol alphabet must be non-empty");
    for (std::uint32_t s : symbols)
        if (s >= alphabet)
            throw InputError("symbol " + std::to_string(s) + " outside alphabet of size " + std::to_string(alphabet));
}

void VectorLattice::validate() const {
    if (dim == 0) throw InputError("observation dimension must be positive");
    if (values.size() != shape.size() * dim) throw InputError("vector payload does not match lattice size");
    for (double v : values)
        if (!std::isfinite(v)) throw InputError("observation values must be finite");
}

void StateLattice::validate(std::size_t num_states) const {
    if (states.size() != shape.size()) throw InputError("state payload does not match lattice size");
    for (std::uint32_t s : states)
        if (s >= num_states)
            throw InputError("state " + std::to_string(s) + " outside model with " + std::to_string(num_states) +
                             " states");
}

namespace {

struct SymbolCounter {
    const std::uint32_t* symbols;
    std::vector<std::uint64_t> counts;
    SignatureField* out;

    void reset() { std::fill(counts.begin(), counts.end(), 0); }
    void add(std::size_t cell) { ++counts[symbols[cell]]; }
    void remove(std::size_t cell) { --counts[symbols[cell]]; }
    void emit(std::size_t node, std::size_t cells) {
        double* x = out->values.data() + node * out->dim;
        const double n = static_cast<double>(cells);
        for (std::size_t k = 0; k < counts.size(); ++k) x[k] = static_cast<double>(counts[k]) / n;
    }
};

struct VectorSummer {
    const double* values;
    std::size_t dim;
    std::vector<double> sums;
    SignatureField* out;

    void reset() { std::fill(sums.begin(), sums.end(), 0.0); }
    void add(std::size_t cell) {
        const double* v = values + cell * dim;
        for (std::size_t k = 0; k < dim; ++k) sums[k] += v[k];
    }
    void remove(std::size_t cell) {
        const double* v = values + cell * dim;
        for (std::size_t k = 0; k < dim; ++k) sums[k] -= v[k];
    }
    void emit(std::size_t node, std::size_t cells) {
        double* x = out->values.data() + node * dim;
        const double n = static_cast<double>(cells);
        for (std::size_t k = 0; k < dim; ++k) x[k] = sums[k] / n;
    }
};

}  // namespace

SignatureField sweep_signatures(const SymbolLattice& lattice, std::size_t w) {
    lattice.validate();
    SignatureField field{lattice.shape, lattice.alphabet, std::vector<double>(lattice.shape.size() * lattice.alphabet)};
    SymbolCounter acc{lattice.symbols.data(), std::vector<std::uint64_t>(lattice.alphabet), &field};
    sweep_windows(lattice.shape, w, acc);
    return field;
}

SignatureField sweep_signatures(const VectorLattice& lattice, std::size_t w) {
    lattice.validate();
    SignatureField field{lattice.shape, lattice.dim, std::vector<double>(lattice.values.size())};
    VectorSummer acc{lattice.values.data(), lattice.dim, std::vector<double>(lattice.dim), &field};
    sweep_windows(lattice.shape, w, acc);
    return field;
}

}  // namespace lvlm
