#include "lvlm/discrete_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lvlm/error.hpp"

namespace lvlm {

namespace {

constexpr double kStochasticTolerance = 1e-9;

void check_compatible(const DiscreteModel& model, const SymbolLattice& obs) {
    obs.validate();
    if (obs.shape.dims() != model.dims)
        throw InputError("model is for " + std::to_string(model.dims) + "-dimensional lattices, image has " +
                         std::to_string(obs.shape.dims()));
    if (obs.alphabet > model.num_symbols()) {
        for (std::uint32_t s : obs.symbols)
            if (s >= model.num_symbols())
                throw InputError("symbol " + std::to_string(s) + " outside model alphabet of size " +
                                 std::to_string(model.num_symbols()));
    }
}

// Signatures over the model's alphabet, whatever alphabet the image header
// declared.
SignatureField model_signatures(const DiscreteModel& model, const SymbolLattice& obs, std::size_t w) {
    if (obs.alphabet == model.num_symbols()) return sweep_signatures(obs, w);
    SymbolLattice widened{obs.shape, model.num_symbols(), obs.symbols};
    return sweep_signatures(widened, w);
}

}  // namespace

void DiscreteModel::validate() const {
    if (B.rows() < 1 || B.cols() < 1) throw InputError("discrete model needs N >= 1 and M >= 1");
    if (A.rows() != B.rows() || A.cols() != B.rows()) throw InputError("A must be N x N");
    if (dims < 1) throw InputError("model dimension must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in (0, 1]");
    if (!A.allFinite() || (A.array() < 0.0).any()) throw InputError("A entries must be finite and nonnegative");
    if (!B.allFinite() || (B.array() < 0.0).any()) throw InputError("B entries must be finite and nonnegative");
    for (Eigen::Index j = 0; j < B.rows(); ++j)
        if (std::abs(B.row(j).sum() - 1.0) > kStochasticTolerance)
            throw InputError("row " + std::to_string(j) + " of B does not sum to 1");
}

std::size_t assign_discrete(const DiscreteModel& model, std::span<const double> x) {
    if (x.size() != model.num_symbols())
        throw InputError("signature has " + std::to_string(x.size()) + " entries, model expects " +
                         std::to_string(model.num_symbols()));
    const Eigen::Map<const Eigen::RowVectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < model.B.rows(); ++j) {
        const double d2 = (model.B.row(j) - v).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<std::size_t>(j);
        }
    }
    return best;
}

Decoding decode_discrete(const DiscreteModel& model, const SymbolLattice& obs) {
    return decode_discrete(model, obs, model.radii.decode);
}

Decoding decode_discrete(const DiscreteModel& model, const SymbolLattice& obs, std::size_t w) {
    model.validate();
    check_compatible(model, obs);
    Decoding out{model_signatures(model, obs, w), StateLattice{obs.shape, std::vector<std::uint32_t>(obs.shape.size())}};
    for (std::size_t t = 0; t < obs.shape.size(); ++t)
        out.states.states[t] = static_cast<std::uint32_t>(assign_discrete(model, out.signatures.at(t)));
    return out;
}

double evaluate_discrete(const DiscreteModel& model, const SymbolLattice& obs) {
    const Decoding dec = decode_discrete(model, obs, model.radii.evaluate);
    double emission = 0.0;
    for (std::size_t t = 0; t < obs.shape.size(); ++t) {
        const double b = model.B(dec.states.states[t], obs.symbols[t]);
        if (!(b > 0.0)) return -std::numeric_limits<double>::infinity();
        emission += std::log(b);
    }
    return emission + neighbor_log_score(model.A, model.alpha, dec.states);
}

DiscreteLearning learn_discrete(std::span<const SymbolLattice> images, std::size_t num_states, Radii radii,
                                double alpha, std::size_t alphabet) {
    if (images.empty()) throw InputError("learning needs at least one image");
    if (num_states == 0) throw InputError("state count must be at least 1");
    const std::size_t dims = images.front().shape.dims();
    std::size_t total_nodes = 0;
    for (const SymbolLattice& img : images) {
        img.validate();
        if (img.shape.dims() != dims) throw InputError("training images must share the lattice dimension");
        alphabet = std::max(alphabet, img.alphabet);
        total_nodes += img.shape.size();
    }
    if (total_nodes < num_states)
        throw InputError("cannot learn " + std::to_string(num_states) + " states from " +
                         std::to_string(total_nodes) + " nodes");

    std::vector<double> points;
    points.reserve(total_nodes * alphabet);
    for (const SymbolLattice& img : images) {
        SignatureField x = img.alphabet == alphabet ? sweep_signatures(img, radii.learn)
                                                    : sweep_signatures(SymbolLattice{img.shape, alphabet, img.symbols},
                                                                       radii.learn);
        points.insert(points.end(), x.values.begin(), x.values.end());
    }

    DiscreteLearning out;
    out.quantization = pnn_quantize(points, alphabet, num_states);
    const Codebook& cb = out.quantization.codebook;

    DiscreteModel& model = out.model;
    model.dims = dims;
    model.radii = radii;
    model.alpha = alpha;
    model.B.resize(static_cast<Eigen::Index>(num_states), static_cast<Eigen::Index>(alphabet));
    for (std::size_t j = 0; j < num_states; ++j) {
        const auto c = cb.centroid(j);
        double sum = 0.0;
        for (std::size_t k = 0; k < alphabet; ++k) {
            const double v = std::max(0.0, c[k]);
            model.B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
            sum += v;
        }
        model.B.row(static_cast<Eigen::Index>(j)) /= sum;
    }

    // Nearest-row assignment of the training signatures; identical to what
    // decoding with the learning radius computes.
    std::size_t offset = 0;
    for (const SymbolLattice& img : images) {
        StateLattice q{img.shape, std::vector<std::uint32_t>(img.shape.size())};
        for (std::size_t t = 0; t < img.shape.size(); ++t, ++offset)
            q.states[t] = static_cast<std::uint32_t>(assign_discrete(model, {points.data() + offset * alphabet, alphabet}));
        out.states.push_back(std::move(q));
    }

    // A state can end up with no nodes when two centroids coincide; its B row
    // stays the centroid and its A row becomes a self-loop.
    model.A = estimate_adjacency(out.states, num_states);
    return out;
}

}  // namespace lvlm
