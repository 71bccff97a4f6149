#include "lvlm/vq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "centroid_index.hpp"
#include "lvlm/error.hpp"

namespace lvlm {

double merge_cost(std::size_t size_a, std::span<const double> centroid_a, std::size_t size_b,
                  std::span<const double> centroid_b) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < centroid_a.size(); ++k) {
        const double diff = centroid_a[k] - centroid_b[k];
        d2 += diff * diff;
    }
    const double na = static_cast<double>(size_a);
    const double nb = static_cast<double>(size_b);
    return (na * nb / (na + nb)) * d2;
}

void merge_centroid(std::size_t size_a, std::span<double> centroid_a, std::size_t size_b,
                    std::span<const double> centroid_b) {
    const double t = static_cast<double>(size_b) / static_cast<double>(size_a + size_b);
    for (std::size_t k = 0; k < centroid_a.size(); ++k) centroid_a[k] += (centroid_b[k] - centroid_a[k]) * t;
}

namespace {

using detail::ClusterTable;
using detail::kNoCluster;
using detail::Partner;

struct Candidate {
    double cost;
    std::uint32_t lo, hi;
    std::uint32_t owner;
    std::uint64_t stamp;
};

struct CandidateAfter {
    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.cost != b.cost) return a.cost > b.cost;
        if (a.lo != b.lo) return a.lo > b.lo;
        return a.hi > b.hi;
    }
};

class PnnRun {
public:
    PnnRun(std::span<const double> points, std::size_t dim, std::size_t target, const PnnOptions& options)
        : points_(points), n_(points.size() / dim), target_(target), options_(options), index_(table_) {
        table_.dim = dim;
        table_.centroids.assign(points.begin(), points.end());
        table_.sizes.assign(n_, 1);
        table_.versions.assign(n_, 0);
        table_.active.assign(n_, 1);
        parent_.resize(n_);
        std::iota(parent_.begin(), parent_.end(), 0u);
    }

    Quantization run() {
        pool_duplicates();
        if (live_.size() > target_) agglomerate();
        return finish();
    }

private:
    // Groups bit-identical points. Their pairwise cost is exactly zero, so
    // the greedy procedure merges them first, always taking the lowest
    // remaining (kept, absorbed) pair: group minima in ascending order, each
    // absorbing its other members in ascending order.
    void pool_duplicates() {
        const std::size_t dim = table_.dim;
        std::vector<std::uint32_t> order(n_);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const double* pa = points_.data() + std::size_t{a} * dim;
            const double* pb = points_.data() + std::size_t{b} * dim;
            for (std::size_t k = 0; k < dim; ++k)
                if (pa[k] != pb[k]) return pa[k] < pb[k];
            return a < b;
        });

        std::vector<std::pair<std::uint32_t, std::uint32_t>> zero_merges;  // (group min, member)
        for (std::size_t i = 0; i < n_;) {
            std::size_t j = i + 1;
            const double* pi = points_.data() + std::size_t{order[i]} * dim;
            while (j < n_ && std::equal(pi, pi + dim, points_.data() + std::size_t{order[j]} * dim)) ++j;
            for (std::size_t m = i + 1; m < j; ++m) zero_merges.emplace_back(order[i], order[m]);
            i = j;
        }
        std::sort(zero_merges.begin(), zero_merges.end());

        const std::size_t allowed = std::min(zero_merges.size(), n_ - target_);
        for (std::size_t m = 0; m < allowed; ++m) apply_merge(zero_merges[m].first, zero_merges[m].second, 0.0);

        for (std::uint32_t id = 0; id < n_; ++id)
            if (table_.active[id]) live_.push_back(id);
    }

    void apply_merge(std::uint32_t a, std::uint32_t b, double cost) {
        merge_centroid(table_.sizes[a], table_.centroid(a), table_.sizes[b], table_.centroid(b));
        table_.sizes[a] += table_.sizes[b];
        table_.active[b] = 0;
        ++table_.versions[a];
        ++table_.versions[b];
        parent_[b] = a;
        merges_.push_back({a, b, cost});
    }

    void set_partner(std::uint32_t x, Partner p) {
        partner_[x] = p;
        ++stamp_[x];
        if (p.id == kNoCluster) return;
        pointed_by_[p.id].push_back(x);
        heap_.push({p.cost, std::min(x, p.id), std::max(x, p.id), x, stamp_[x]});
    }

    void refresh_partner(std::uint32_t x) { set_partner(x, index_.nearest(x)); }

    void compact_live() {
        std::erase_if(live_, [&](std::uint32_t id) { return !table_.active[id]; });
    }

    // Establishes the exact partner of every live cluster; required before
    // the first merge and on entering the exact-tie regime.
    void refresh_all() {
        compact_live();
        for (std::uint32_t x : live_) refresh_partner(x);
    }

    void agglomerate() {
        partner_.assign(n_, Partner{});
        stamp_.assign(n_, 0);
        pointed_by_.assign(n_, {});
        index_.rebuild(live_);
        std::size_t remaining = live_.size();
        bool exact = remaining <= options_.exact_tie_limit;
        refresh_all();

        std::vector<std::uint32_t> affected;
        while (remaining > target_) {
            if (heap_.empty()) throw NumericError("vector quantization ran out of merge candidates");
            const Candidate top = heap_.top();
            heap_.pop();
            if (!table_.active[top.owner] || stamp_[top.owner] != top.stamp) continue;

            const std::uint32_t a = top.lo, b = top.hi;
            affected.clear();
            for (std::uint32_t side : {a, b}) {
                for (std::uint32_t x : pointed_by_[side])
                    if (x != a && x != b && table_.active[x] && partner_[x].id == side) affected.push_back(x);
                pointed_by_[side].clear();
                pointed_by_[side].shrink_to_fit();
            }
            std::sort(affected.begin(), affected.end());
            affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

            apply_merge(a, b, top.cost);
            ++stamp_[b];
            --remaining;
            if (remaining <= target_) break;

            if (index_.entries() > 2 * remaining + 64) {
                compact_live();
                index_.rebuild(live_);
            } else {
                index_.insert(a);
            }

            if (!exact && remaining <= options_.exact_tie_limit) {
                exact = true;
                heap_ = {};
                for (auto& list : pointed_by_) list.clear();
                refresh_all();
                continue;
            }

            refresh_partner(a);
            for (std::uint32_t x : affected) refresh_partner(x);

            if (exact) {
                // The merged centroid may now be a strictly closer (or equally
                // close, lower-numbered) partner for clusters it did not
                // previously attract.
                compact_live();
                for (std::uint32_t x : live_) {
                    if (x == a) continue;
                    const double cost = merge_cost(table_.sizes[x], table_.centroid(x), table_.sizes[a],
                                                   table_.centroid(a));
                    if (better(cost, a, partner_[x])) set_partner(x, {cost, a});
                }
            }
        }
    }

    std::uint32_t root(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    Quantization finish() {
        Quantization q;
        q.codebook.dim = table_.dim;
        std::vector<std::uint32_t> slot(n_, kNoCluster);
        for (std::uint32_t id = 0; id < n_; ++id) {
            if (!table_.active[id]) continue;
            slot[id] = static_cast<std::uint32_t>(q.codebook.sizes.size());
            q.codebook.sizes.push_back(table_.sizes[id]);
            const auto c = table_.centroid(id);
            q.codebook.centroids.insert(q.codebook.centroids.end(), c.begin(), c.end());
        }
        q.assignment.resize(n_);
        for (std::uint32_t i = 0; i < n_; ++i) q.assignment[i] = slot[root(i)];
        q.merges = std::move(merges_);
        return q;
    }

    std::span<const double> points_;
    std::size_t n_;
    std::size_t target_;
    PnnOptions options_;

    ClusterTable table_;
    detail::CentroidIndex index_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> live_;
    std::vector<Merge> merges_;

    std::vector<Partner> partner_;
    std::vector<std::uint64_t> stamp_;
    std::vector<std::vector<std::uint32_t>> pointed_by_;
    std::priority_queue<Candidate, std::vector<Candidate>, CandidateAfter> heap_;
};

}  // namespace

Quantization pnn_quantize(std::span<const double> points, std::size_t dim, std::size_t target,
                          const PnnOptions& options) {
    if (dim == 0) throw InputError("vector quantization needs a positive dimension");
    if (points.size() % dim != 0) throw InputError("point buffer is not a whole number of vectors");
    const std::size_t n = points.size() / dim;
    if (target == 0) throw InputError("codebook size must be at least 1");
    if (n < target)
        throw InputError("cannot quantize " + std::to_string(n) + " points into " + std::to_string(target) +
                         " clusters");
    if (n >= kNoCluster) throw InputError("too many points for vector quantization");
    for (double v : points)
        if (!std::isfinite(v)) throw InputError("vector quantization input must be finite");
    return PnnRun(points, dim, target, options).run();
}

double total_distortion(std::span<const double> points, const Quantization& q) {
    const std::size_t dim = q.codebook.dim;
    double total = 0.0;
    for (std::size_t i = 0; i < q.assignment.size(); ++i) {
        const auto c = q.codebook.centroid(q.assignment[i]);
        for (std::size_t k = 0; k < dim; ++k) {
            const double diff = points[i * dim + k] - c[k];
            total += diff * diff;
        }
    }
    return total;
}

}  // namespace lvlm
