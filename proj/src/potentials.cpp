#include "lvlm/potentials.hpp"

#include <cmath>
#include <limits>

#include "lvlm/error.hpp"

namespace lvlm {

Eigen::MatrixXd estimate_adjacency(std::span<const StateLattice> lattices, std::size_t num_states) {
    const auto n = static_cast<Eigen::Index>(num_states);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    for (const StateLattice& q : lattices) {
        q.validate(num_states);
        for_each_node(q.shape, [&](std::size_t t, const Coord& c) {
            for_each_neighbor(q.shape, t, c, [&](std::size_t r) { counts(q.states[t], q.states[r]) += 1.0; });
        });
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const double total = counts.row(j).sum();
        if (total > 0.0) {
            counts.row(j) /= total;
        } else {
            counts(j, j) = 1.0;
        }
    }
    return counts;
}

std::vector<std::size_t> state_counts(std::span<const StateLattice> lattices, std::size_t num_states) {
    std::vector<std::size_t> counts(num_states, 0);
    for (const StateLattice& q : lattices) {
        q.validate(num_states);
        for (std::uint32_t s : q.states) ++counts[s];
    }
    return counts;
}

double neighbor_log_score(const Eigen::MatrixXd& adjacency, double alpha, const StateLattice& states) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    const double log_alpha = std::log(alpha);
    double total = 0.0;
    bool impossible = false;
    for_each_node(states.shape, [&](std::size_t t, const Coord& c) {
        if (impossible) return;
        const std::uint32_t qt = states.states[t];
        double k = 0.0;
        double log_a = 0.0;
        std::size_t degree = 0;
        for_each_neighbor(states.shape, t, c, [&](std::size_t r) {
            const double a = adjacency(qt, states.states[r]);
            k += a;
            log_a += std::log(a);
            ++degree;
        });
        if (degree == 0) return;
        if (!(k > 0.0) || std::isinf(log_a)) {
            impossible = true;
            return;
        }
        const double deg = static_cast<double>(degree);
        total += 0.5 * (deg * log_alpha + log_a - deg * std::log(k));
    });
    return impossible ? kNegInf : total;
}

}  // namespace lvlm
