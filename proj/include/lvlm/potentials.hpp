#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lvlm/lattice.hpp"

namespace lvlm {

// Window radii for the three uses of the sliding window.
struct Radii {
    std::size_t decode = 1;
    std::size_t evaluate = 1;
    std::size_t learn = 1;

    static Radii uniform(std::size_t w) { return {w, w, w}; }
    bool operator==(const Radii&) const = default;
};

// State adjacency potentials estimated from decoded lattices. Entry (j, i)
// counts ordered (node in state j, neighbor in state i) pairs; each row is
// then divided by the number of pairs it counted, so rows are stochastic
// even where boundary nodes have fewer than 2d neighbors. Pairs never cross
// lattice boundaries. A state with no counted pairs gets a self-transition
// row.
Eigen::MatrixXd estimate_adjacency(std::span<const StateLattice> lattices, std::size_t num_states);

// Node count per state over all lattices.
std::vector<std::size_t> state_counts(std::span<const StateLattice> lattices, std::size_t num_states);

// Neighbor part of the evaluation log-score:
//   sum_t 1/2 sum_{r in R(t)} [log alpha + log a(q_t, q_r) - log k_t],
//   k_t = sum_{r in R(t)} a(q_t, q_r).
// Returns -infinity if some k_t or used a(q_t, q_r) is zero.
double neighbor_log_score(const Eigen::MatrixXd& adjacency, double alpha, const StateLattice& states);

}  // namespace lvlm
