#include "lvlm/real_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lvlm/error.hpp"

namespace lvlm {

namespace {

void check_compatible(const RealModel& model, const VectorLattice& obs) {
    obs.validate();
    if (obs.shape.dims() != model.dims)
        throw InputError("model is for " + std::to_string(model.dims) + "-dimensional lattices, image has " +
                         std::to_string(obs.shape.dims()));
    if (obs.dim != model.dim())
        throw InputError("observation dimension " + std::to_string(obs.dim) + " does not match model dimension " +
                         std::to_string(model.dim()));
}

}  // namespace

void RealModel::validate() const {
    if (mu.rows() < 1 || mu.cols() < 1) throw InputError("real model needs N >= 1 and M >= 1");
    if (A.rows() != mu.rows() || A.cols() != mu.rows()) throw InputError("A must be N x N");
    if (sigma.size() != num_states()) throw InputError("need one covariance per state");
    if (dims < 1) throw InputError("model dimension must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in (0, 1]");
    if (!A.allFinite() || (A.array() < 0.0).any()) throw InputError("A entries must be finite and nonnegative");
    if (!mu.allFinite()) throw InputError("means must be finite");
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        const auto& s = sigma[j];
        if (s.rows() != mu.cols() || s.cols() != mu.cols())
            throw InputError("covariance " + std::to_string(j) + " must be M x M");
        if (!s.allFinite()) throw InputError("covariance " + std::to_string(j) + " must be finite");
        if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff()))
            throw InputError("covariance " + std::to_string(j) + " is not symmetric");
    }
}

std::size_t assign_real(const RealModel& model, std::span<const double> x) {
    if (x.size() != model.dim())
        throw InputError("signature has " + std::to_string(x.size()) + " entries, model expects " +
                         std::to_string(model.dim()));
    const Eigen::Map<const Eigen::RowVectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < model.mu.rows(); ++j) {
        const double d2 = (model.mu.row(j) - v).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<std::size_t>(j);
        }
    }
    return best;
}

Decoding decode_real(const RealModel& model, const VectorLattice& obs) {
    return decode_real(model, obs, model.radii.decode);
}

Decoding decode_real(const RealModel& model, const VectorLattice& obs, std::size_t w) {
    model.validate();
    check_compatible(model, obs);
    Decoding out{sweep_signatures(obs, w), StateLattice{obs.shape, std::vector<std::uint32_t>(obs.shape.size())}};
    for (std::size_t t = 0; t < obs.shape.size(); ++t)
        out.states.states[t] = static_cast<std::uint32_t>(assign_real(model, out.signatures.at(t)));
    return out;
}

GaussianDensity::GaussianDensity(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance)
    : mean_(mean), llt_(covariance) {
    if (llt_.info() != Eigen::Success) return;
    const Eigen::VectorXd diag = llt_.matrixL().toDenseMatrix().diagonal();
    if (!(diag.array() > 0.0).all() || !diag.allFinite()) return;
    const double log_det = 2.0 * diag.array().log().sum();
    log_norm_ = -0.5 * (static_cast<double>(mean.size()) * std::log(2.0 * std::numbers::pi) + log_det);
    ok_ = true;
}

double GaussianDensity::log_density(std::span<const double> x) const {
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd z = llt_.matrixL().solve(v - mean_);
    return log_norm_ - 0.5 * z.squaredNorm();
}

double evaluate_real(const RealModel& model, const VectorLattice& obs) {
    const Decoding dec = decode_real(model, obs, model.radii.evaluate);
    std::vector<GaussianDensity> densities;
    densities.reserve(model.num_states());
    for (std::size_t j = 0; j < model.num_states(); ++j) {
        densities.emplace_back(model.mu.row(static_cast<Eigen::Index>(j)).transpose(), model.sigma[j]);
        if (!densities.back().ok())
            throw NumericError("covariance of state " + std::to_string(j) + " is not positive definite");
    }
    double emission = 0.0;
    for (std::size_t t = 0; t < obs.shape.size(); ++t) emission += densities[dec.states.states[t]].log_density(obs.at(t));
    return emission + neighbor_log_score(model.A, model.alpha, dec.states);
}

double covariance_ridge(const Eigen::MatrixXd& covariance) {
    const double m = static_cast<double>(covariance.rows());
    return std::max(1e-6 * covariance.trace() / m, 1e-12);
}

RealLearning learn_real(std::span<const VectorLattice> images, std::size_t num_states, Radii radii, double alpha) {
    if (images.empty()) throw InputError("learning needs at least one image");
    if (num_states == 0) throw InputError("state count must be at least 1");
    const std::size_t dims = images.front().shape.dims();
    const std::size_t m = images.front().dim;
    std::size_t total_nodes = 0;
    for (const VectorLattice& img : images) {
        img.validate();
        if (img.shape.dims() != dims) throw InputError("training images must share the lattice dimension");
        if (img.dim != m) throw InputError("training images must share the observation dimension");
        total_nodes += img.shape.size();
    }
    if (total_nodes < num_states)
        throw InputError("cannot learn " + std::to_string(num_states) + " states from " +
                         std::to_string(total_nodes) + " nodes");

    std::vector<double> points;
    points.reserve(total_nodes * m);
    for (const VectorLattice& img : images) {
        SignatureField x = sweep_signatures(img, radii.learn);
        points.insert(points.end(), x.values.begin(), x.values.end());
    }

    RealLearning out;
    out.quantization = pnn_quantize(points, m, num_states);
    const Codebook& cb = out.quantization.codebook;

    RealModel& model = out.model;
    model.dims = dims;
    model.radii = radii;
    model.alpha = alpha;
    const auto n = static_cast<Eigen::Index>(num_states);
    const auto md = static_cast<Eigen::Index>(m);
    model.mu.resize(n, md);
    for (std::size_t j = 0; j < num_states; ++j)
        for (std::size_t k = 0; k < m; ++k) model.mu(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = cb.centroid(j)[k];

    std::vector<Eigen::MatrixXd> scatter(num_states, Eigen::MatrixXd::Zero(md, md));
    std::size_t offset = 0;
    Eigen::VectorXd y(md);
    for (const VectorLattice& img : images) {
        StateLattice q{img.shape, std::vector<std::uint32_t>(img.shape.size())};
        for (std::size_t t = 0; t < img.shape.size(); ++t, ++offset) {
            const auto j = assign_real(model, {points.data() + offset * m, m});
            q.states[t] = static_cast<std::uint32_t>(j);
            const auto o = img.at(t);
            for (std::size_t k = 0; k < m; ++k) y(static_cast<Eigen::Index>(k)) = o[k] - model.mu(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            scatter[j].selfadjointView<Eigen::Upper>().rankUpdate(y);
        }
        out.states.push_back(std::move(q));
    }

    // A state left without nodes (coincident centroids) takes its covariance
    // from the members of its quantization cluster instead.
    auto counts = state_counts(out.states, num_states);
    std::vector<bool> empty(num_states);
    for (std::size_t j = 0; j < num_states; ++j) empty[j] = counts[j] == 0;
    offset = 0;
    for (const VectorLattice& img : images) {
        for (std::size_t t = 0; t < img.shape.size(); ++t, ++offset) {
            const std::size_t j = out.quantization.assignment[offset];
            if (!empty[j]) continue;
            const auto o = img.at(t);
            for (std::size_t k = 0; k < m; ++k) y(static_cast<Eigen::Index>(k)) = o[k] - model.mu(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            scatter[j].selfadjointView<Eigen::Upper>().rankUpdate(y);
            ++counts[j];
        }
    }
    model.sigma.resize(num_states);
    for (std::size_t j = 0; j < num_states; ++j) {
        Eigen::MatrixXd s = scatter[j].selfadjointView<Eigen::Upper>();
        s /= static_cast<double>(counts[j]);
        s.diagonal().array() += covariance_ridge(s);
        model.sigma[j] = s;
    }

    model.A = estimate_adjacency(out.states, num_states);
    return out;
}

}  // namespace lvlm
