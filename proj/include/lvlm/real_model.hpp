#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lvlm/discrete_model.hpp"
#include "lvlm/lattice.hpp"
#include "lvlm/potentials.hpp"
#include "lvlm/vq.hpp"

namespace lvlm {

// Model for lattices of real vectors: eta = <A, mu, Sigma, w> plus alpha.
// Emissions are multivariate normal per state.
struct RealModel {
    Eigen::MatrixXd A;                   // N x N
    Eigen::MatrixXd mu;                  // N x M state means
    std::vector<Eigen::MatrixXd> sigma;  // N covariances, M x M
    std::size_t dims = 2;
    Radii radii;
    double alpha = 1.0;

    std::size_t num_states() const { return static_cast<std::size_t>(mu.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(mu.cols()); }

    void validate() const;
};

// State whose mean is nearest x in L2; ties go to the lowest index. The
// covariances play no part in assignment.
std::size_t assign_real(const RealModel& model, std::span<const double> x);

Decoding decode_real(const RealModel& model, const VectorLattice& obs);
Decoding decode_real(const RealModel& model, const VectorLattice& obs, std::size_t w);

// Log-score: decode with the evaluation radius, then
//   sum_t log N(o_t; mu(q_t), Sigma(q_t)) + the neighbor term.
// There is no state prior term. Throws NumericError naming the state if a
// covariance is not positive definite.
double evaluate_real(const RealModel& model, const VectorLattice& obs);

// Multivariate normal log-density through a Cholesky factor.
class GaussianDensity {
public:
    GaussianDensity(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance);
    bool ok() const { return ok_; }
    double log_density(std::span<const double> x) const;

private:
    Eigen::VectorXd mean_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_norm_ = 0.0;
    bool ok_ = false;
};

struct RealLearning {
    RealModel model;
    std::vector<StateLattice> states;
    Quantization quantization;
};

// Ridge added to a covariance estimate: 1e-6 * trace / M, at least 1e-12.
double covariance_ridge(const Eigen::MatrixXd& covariance);

// Learns A, mu and Sigma. Sample-mean signatures (radius radii.learn) are
// quantized into N clusters whose centroids become mu; nodes are assigned to
// the nearest mean. Sigma(j) is the mean outer product of raw-observation
// residuals o_t - mu(q_t) over the nodes in state j, plus covariance_ridge.
//
// Cost note: the covariance pass is O(M^2 U), taken to be below the
// O(M U log U) quantization since M is usually smaller than log U.
RealLearning learn_real(std::span<const VectorLattice> images, std::size_t num_states, Radii radii,
                        double alpha = 1.0);

}  // namespace lvlm
