#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lvlm/lattice.hpp"

namespace lvlm {

struct DiscreteEmission {
    Eigen::MatrixXd B;  // N x M, row-stochastic
};

struct GaussianEmission {
    Eigen::MatrixXd mu;                  // N x M
    std::vector<Eigen::MatrixXd> sigma;  // N covariances, symmetric PSD
};

using Emission = std::variant<DiscreteEmission, GaussianEmission>;

// Ground-truth generator configuration. States follow the pairwise model
// P(Q) proportional to prod over adjacent pairs of potentials(q_t, q_r).
struct SynthConfig {
    LatticeShape shape;
    Eigen::MatrixXd potentials;  // N x N, nonnegative, positive row sums
    std::size_t sweeps = 50;
    std::uint64_t seed = 0;

    std::size_t num_states() const { return static_cast<std::size_t>(potentials.rows()); }
    void validate() const;
};

// Gibbs sampler: uniform random start, then `sweeps` row-major scans that
// redraw each node from P(s | neighbors) proportional to
// prod_{r in R(t)} potentials(s, q_r). No separate burn-in; the sweep count
// is the burn-in. Deterministic for a given seed (see Rng).
StateLattice gibbs_sample(const SynthConfig& config);

// Draws one observation per node from the emission of its state: a symbol
// from B(q_t, .) or a vector from Normal(mu(q_t), Sigma(q_t)).
Observation emit_observations(const StateLattice& states, const Emission& emission, std::uint64_t seed);

}  // namespace lvlm
