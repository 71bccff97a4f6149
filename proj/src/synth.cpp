#include "lvlm/synth.hpp"

#include <cmath>
#include <string>

#include "lvlm/error.hpp"
#include "lvlm/random.hpp"

namespace lvlm {

void SynthConfig::validate() const {
    if (potentials.rows() < 1 || potentials.rows() != potentials.cols())
        throw InputError("potentials must be a non-empty square matrix");
    if (!potentials.allFinite() || (potentials.array() < 0.0).any())
        throw InputError("potentials must be finite and nonnegative");
    for (Eigen::Index j = 0; j < potentials.rows(); ++j)
        if (!(potentials.row(j).sum() > 0.0)) throw InputError("potential rows must have positive sums");
    if (sweeps < 1) throw InputError("at least one Gibbs sweep is required");
    if (shape.size() == 0) throw InputError("synthesis needs a non-empty lattice");
}

StateLattice gibbs_sample(const SynthConfig& config) {
    config.validate();
    const std::size_t n = config.num_states();
    Rng rng(config.seed);
    StateLattice q{config.shape, std::vector<std::uint32_t>(config.shape.size(), 0)};
    if (n == 1) return q;
    for (auto& s : q.states) s = static_cast<std::uint32_t>(rng.below(n));

    std::vector<double> weights(n);
    for (std::size_t sweep = 0; sweep < config.sweeps; ++sweep) {
        for_each_node(config.shape, [&](std::size_t t, const Coord& c) {
            std::fill(weights.begin(), weights.end(), 1.0);
            for_each_neighbor(config.shape, t, c, [&](std::size_t r) {
                for (std::size_t s = 0; s < n; ++s) weights[s] *= config.potentials(s, q.states[r]);
            });
            double total = 0.0;
            for (double w : weights) total += w;
            // Every state impossible: fall back to a uniform draw.
            q.states[t] = static_cast<std::uint32_t>(total > 0.0 ? rng.categorical(weights) : rng.below(n));
        });
    }
    return q;
}

namespace {

SymbolLattice emit_symbols(const StateLattice& states, const DiscreteEmission& e, Rng& rng) {
    const auto n = static_cast<std::size_t>(e.B.rows());
    if (n == 0 || e.B.cols() == 0) throw InputError("emission matrix must be non-empty");
    states.validate(n);
    std::vector<std::vector<double>> rows(n);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (Eigen::Index k = 0; k < e.B.cols(); ++k) {
            const double b = e.B(static_cast<Eigen::Index>(j), k);
            if (!(b >= 0.0) || !std::isfinite(b)) throw InputError("emission probabilities must be nonnegative");
            rows[j].push_back(b);
            sum += b;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw InputError("emission row " + std::to_string(j) + " does not sum to 1");
    }
    SymbolLattice out{states.shape, static_cast<std::size_t>(e.B.cols()), std::vector<std::uint32_t>(states.states.size())};
    for (std::size_t t = 0; t < states.states.size(); ++t)
        out.symbols[t] = static_cast<std::uint32_t>(rng.categorical(rows[states.states[t]]));
    return out;
}

// Square root factor L with L L^T = Sigma; Cholesky when definite, otherwise
// the symmetric eigen-decomposition with negative eigenvalues clipped.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& sigma) {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    if (eig.info() != Eigen::Success) throw NumericError("could not factor emission covariance");
    return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

VectorLattice emit_vectors(const StateLattice& states, const GaussianEmission& e, Rng& rng) {
    const auto n = static_cast<std::size_t>(e.mu.rows());
    const auto m = e.mu.cols();
    if (n == 0 || m == 0) throw InputError("emission means must be non-empty");
    if (e.sigma.size() != n) throw InputError("need one emission covariance per state");
    states.validate(n);
    std::vector<Eigen::MatrixXd> factors;
    for (const auto& s : e.sigma) {
        if (s.rows() != m || s.cols() != m) throw InputError("emission covariance must be M x M");
        if (!s.allFinite()) throw InputError("emission covariance must be finite");
        factors.push_back(covariance_factor(s));
    }
    VectorLattice out{states.shape, static_cast<std::size_t>(m), std::vector<double>(states.states.size() * m)};
    Eigen::VectorXd z(m);
    for (std::size_t t = 0; t < states.states.size(); ++t) {
        const std::uint32_t j = states.states[t];
        for (Eigen::Index k = 0; k < m; ++k) z(k) = rng.normal();
        const Eigen::VectorXd v = e.mu.row(j).transpose() + factors[j] * z;
        for (Eigen::Index k = 0; k < m; ++k) out.values[t * m + k] = v(k);
    }
    return out;
}

}  // namespace

Observation emit_observations(const StateLattice& states, const Emission& emission, std::uint64_t seed) {
    Rng rng(seed);
    if (const auto* d = std::get_if<DiscreteEmission>(&emission)) return emit_symbols(states, *d, rng);
    return emit_vectors(states, std::get<GaussianEmission>(emission), rng);
}

}  // namespace lvlm
