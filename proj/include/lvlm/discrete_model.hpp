#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lvlm/lattice.hpp"
#include "lvlm/potentials.hpp"
#include "lvlm/vq.hpp"

namespace lvlm {

// Model for lattices of discrete symbols: eta = <A, B, w> plus the markov
// correction alpha.
struct DiscreteModel {
    // N x N adjacency potentials; row is the node's state, column the
    // neighbor's.
    Eigen::MatrixXd A;
    // N x M observation distributions, one simplex point per state.
    Eigen::MatrixXd B;
    // Lattice dimension d the model applies to.
    std::size_t dims = 2;
    Radii radii;
    double alpha = 1.0;

    std::size_t num_states() const { return static_cast<std::size_t>(B.rows()); }
    std::size_t num_symbols() const { return static_cast<std::size_t>(B.cols()); }

    void validate() const;
};

// Decoded configuration together with the signatures it was assigned from.
struct Decoding {
    SignatureField signatures;
    StateLattice states;
};

// State whose distribution B(j) is nearest x in L2; ties go to the lowest j.
std::size_t assign_discrete(const DiscreteModel& model, std::span<const double> x);

// Window signatures with radius w, then per-node assignment.
Decoding decode_discrete(const DiscreteModel& model, const SymbolLattice& obs);
Decoding decode_discrete(const DiscreteModel& model, const SymbolLattice& obs, std::size_t w);

// Log-score of an image: decode with the evaluation radius, then
//   sum_t log b(q_t, o_t) + 1/2 sum_{r in R(t)} [log alpha + log a(q_t,q_r) - log k_t].
// -infinity when the decoded configuration is impossible under the model.
double evaluate_discrete(const DiscreteModel& model, const SymbolLattice& obs);

struct DiscreteLearning {
    DiscreteModel model;
    // Decoded configuration of each training lattice.
    std::vector<StateLattice> states;
    Quantization quantization;
};

// Learns A and B from unlabelled images. Signatures of every node (radius
// radii.learn) are pooled across images and quantized into N clusters; the
// codebook, projected onto the simplex, becomes B. Each node is then
// assigned to its nearest row of B, so decoding a training image with
// radii.decode == radii.learn reproduces the learned configuration. A comes
// from neighbor pair counts in that configuration.
DiscreteLearning learn_discrete(std::span<const SymbolLattice> images, std::size_t num_states, Radii radii,
                                double alpha = 1.0, std::size_t alphabet = 0);

}  // namespace lvlm
