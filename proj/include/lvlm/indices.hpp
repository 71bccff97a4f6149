#pragma once

#include <Eigen/Dense>

#include "lvlm/lattice.hpp"

namespace lvlm {

// Suggested lower limits for the model to be applicable. Advisory only.
inline constexpr double kAssociativityAdvisory = 0.5;
inline constexpr double kInertiaAdvisory = 0.9;

// trace(A) / sum(A): 1 when adjacent nodes always share a state, near 0 when
// they rarely do.
double associativity_index(const Eigen::MatrixXd& adjacency);

enum class WindowMode {
    clamped,        // every node, windows clipped at the lattice boundary
    interior_only,  // only nodes whose full window fits in the lattice
};

// Mean over nodes of sqrt(sum_j p_j^2), p_j the frequency of state j in the
// w-window around the node. Ranges from 1/sqrt(N) to 1.
double inertia_index(const StateLattice& states, std::size_t num_states, std::size_t w,
                     WindowMode mode = WindowMode::clamped);

struct IndexReport {
    double associativity = 0.0;
    double inertia = 0.0;
    std::size_t w = 0;
    std::size_t num_states = 0;
};

IndexReport index_report(const Eigen::MatrixXd& adjacency, const StateLattice& states, std::size_t w,
                         WindowMode mode = WindowMode::clamped);

}  // namespace lvlm
