#include "centroid_index.hpp"

#include <algorithm>

#include "lvlm/vq.hpp"

namespace lvlm::detail {

namespace {

constexpr std::uint32_t kLeafSize = 8;
// Slack on the pruning bound so rounding in the bound never discards a
// candidate whose computed cost ties the current best.
constexpr double kBoundSlack = 1.0 + 1e-12;

}  // namespace

void CentroidIndex::insert(std::uint32_t id) {
    std::vector<Entry> carry{{id, table_->versions[id]}};
    std::size_t level = 0;
    for (; level < levels_.size() && !levels_[level].entries.empty(); ++level) {
        Tree& t = levels_[level];
        for (const Entry& e : t.entries)
            if (live(e)) carry.push_back(e);
        entries_ -= t.entries.size();
        t = Tree{};
    }
    if (level == levels_.size()) levels_.emplace_back();
    entries_ += carry.size();
    build(levels_[level], std::move(carry));
}

void CentroidIndex::rebuild(std::span<const std::uint32_t> live_ids) {
    levels_.clear();
    entries_ = 0;
    if (live_ids.empty()) return;
    std::vector<Entry> all;
    all.reserve(live_ids.size());
    for (std::uint32_t id : live_ids) all.push_back({id, table_->versions[id]});
    std::size_t level = 0;
    while ((std::size_t{1} << level) < all.size()) ++level;
    levels_.resize(level + 1);
    entries_ = all.size();
    build(levels_[level], std::move(all));
}

void CentroidIndex::build(Tree& tree, std::vector<Entry> entries) const {
    tree.entries = std::move(entries);
    tree.nodes.clear();
    tree.bounds.clear();
    if (tree.entries.empty()) return;
    tree.nodes.reserve(2 * tree.entries.size() / kLeafSize + 2);
    build_node(tree, 0, static_cast<std::uint32_t>(tree.entries.size()));
}

std::int32_t CentroidIndex::build_node(Tree& tree, std::uint32_t begin, std::uint32_t end) const {
    const std::size_t dim = table_->dim;
    const auto index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back({begin, end});
    tree.bounds.resize(tree.bounds.size() + 2 * dim);
    double* lo = tree.bounds.data() + std::size_t(index) * 2 * dim;
    double* hi = lo + dim;
    std::fill(lo, lo + dim, std::numeric_limits<double>::infinity());
    std::fill(hi, hi + dim, -std::numeric_limits<double>::infinity());
    double min_size = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = begin; i < end; ++i) {
        const auto c = table_->centroid(tree.entries[i].id);
        for (std::size_t k = 0; k < dim; ++k) {
            lo[k] = std::min(lo[k], c[k]);
            hi[k] = std::max(hi[k], c[k]);
        }
        min_size = std::min(min_size, static_cast<double>(table_->sizes[tree.entries[i].id]));
    }
    tree.nodes[index].min_size = min_size;
    if (end - begin <= kLeafSize) return index;

    std::size_t axis = 0;
    for (std::size_t k = 1; k < dim; ++k)
        if (hi[k] - lo[k] > hi[axis] - lo[axis]) axis = k;
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(tree.entries.begin() + begin, tree.entries.begin() + mid, tree.entries.begin() + end,
                     [&](const Entry& a, const Entry& b) {
                         return table_->centroid(a.id)[axis] < table_->centroid(b.id)[axis];
                     });
    const std::int32_t left = build_node(tree, begin, mid);
    const std::int32_t right = build_node(tree, mid, end);
    tree.nodes[index].left = left;
    tree.nodes[index].right = right;
    return index;
}

double CentroidIndex::bound(const Tree& tree, std::int32_t node, double qsize, std::span<const double> qc) const {
    const std::size_t dim = table_->dim;
    const double* lo = tree.bounds.data() + std::size_t(node) * 2 * dim;
    const double* hi = lo + dim;
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        double gap = 0.0;
        if (qc[k] < lo[k])
            gap = lo[k] - qc[k];
        else if (qc[k] > hi[k])
            gap = qc[k] - hi[k];
        d2 += gap * gap;
    }
    // n_q m / (n_q + m) grows with m, so the smallest cluster in the subtree
    // gives the smallest possible weight.
    const double m = tree.nodes[node].min_size;
    return (qsize * m / (qsize + m)) * d2;
}

void CentroidIndex::search(const Tree& tree, std::int32_t node, std::uint32_t query, double qsize,
                           std::span<const double> qc, Partner& best) const {
    const Node& n = tree.nodes[node];
    if (n.left < 0) {
        for (std::uint32_t i = n.begin; i < n.end; ++i) {
            const Entry& e = tree.entries[i];
            if (e.id == query || !live(e)) continue;
            const double cost =
                merge_cost(static_cast<std::size_t>(qsize), qc, table_->sizes[e.id], table_->centroid(e.id));
            if (better(cost, e.id, best)) best = {cost, e.id};
        }
        return;
    }
    double bl = bound(tree, n.left, qsize, qc);
    double br = bound(tree, n.right, qsize, qc);
    std::int32_t first = n.left, second = n.right;
    if (br < bl) {
        std::swap(first, second);
        std::swap(bl, br);
    }
    if (bl <= best.cost * kBoundSlack) search(tree, first, query, qsize, qc, best);
    if (br <= best.cost * kBoundSlack) search(tree, second, query, qsize, qc, best);
}

Partner CentroidIndex::nearest(std::uint32_t query) const {
    Partner best;
    const double qsize = static_cast<double>(table_->sizes[query]);
    const auto qc = table_->centroid(query);
    for (const Tree& tree : levels_) {
        if (tree.nodes.empty()) continue;
        if (bound(tree, 0, qsize, qc) <= best.cost * kBoundSlack) search(tree, 0, query, qsize, qc, best);
    }
    return best;
}

}  // namespace lvlm::detail
