#include "lvlm/indices.hpp"

#include <cmath>
#include <vector>

#include "lvlm/error.hpp"

namespace lvlm {

double associativity_index(const Eigen::MatrixXd& adjacency) {
    if (adjacency.rows() == 0 || adjacency.rows() != adjacency.cols())
        throw InputError("associativity needs a non-empty square matrix");
    if (!adjacency.allFinite() || (adjacency.array() < 0.0).any())
        throw InputError("associativity needs a finite nonnegative matrix");
    const double total = adjacency.sum();
    if (!(total > 0.0)) throw InputError("associativity is undefined for an all-zero matrix");
    return adjacency.trace() / total;
}

namespace {

struct StateWindow {
    const std::uint32_t* states;
    std::vector<std::uint64_t> counts;
    std::size_t full_cells;
    bool interior_only;
    double sum = 0.0;
    std::size_t nodes = 0;

    void reset() { std::fill(counts.begin(), counts.end(), 0); }
    void add(std::size_t cell) { ++counts[states[cell]]; }
    void remove(std::size_t cell) { --counts[states[cell]]; }
    void emit(std::size_t, std::size_t cells) {
        if (interior_only && cells != full_cells) return;
        double sq = 0.0;
        for (std::uint64_t c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
        sum += std::sqrt(sq) / static_cast<double>(cells);
        ++nodes;
    }
};

}  // namespace

double inertia_index(const StateLattice& states, std::size_t num_states, std::size_t w, WindowMode mode) {
    if (num_states == 0) throw InputError("inertia needs at least one state");
    states.validate(num_states);
    StateWindow acc{states.states.data(), std::vector<std::uint64_t>(num_states), full_window_cells(states.shape, w),
                    mode == WindowMode::interior_only};
    sweep_windows(states.shape, w, acc);
    if (acc.nodes == 0) throw InputError("no node has a full window of radius " + std::to_string(w));
    return acc.sum / static_cast<double>(acc.nodes);
}

IndexReport index_report(const Eigen::MatrixXd& adjacency, const StateLattice& states, std::size_t w,
                         WindowMode mode) {
    const auto n = static_cast<std::size_t>(adjacency.rows());
    return {associativity_index(adjacency), inertia_index(states, n, w, mode), w, n};
}

}  // namespace lvlm
