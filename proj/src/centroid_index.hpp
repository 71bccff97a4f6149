#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace lvlm::detail {

// Mutable cluster state shared between the PNN loop and its search index.
// Clusters are addressed by identifier; a merge bumps the survivor's version
// so index entries recorded before the merge are recognised as stale.
struct ClusterTable {
    std::size_t dim = 0;
    std::vector<double> centroids;
    std::vector<std::size_t> sizes;
    std::vector<std::uint32_t> versions;
    std::vector<char> active;

    std::span<const double> centroid(std::uint32_t id) const { return {centroids.data() + std::size_t{id} * dim, dim}; }
    std::span<double> centroid(std::uint32_t id) { return {centroids.data() + std::size_t{id} * dim, dim}; }
};

inline constexpr std::uint32_t kNoCluster = std::numeric_limits<std::uint32_t>::max();

struct Partner {
    double cost = std::numeric_limits<double>::infinity();
    std::uint32_t id = kNoCluster;
};

// Lexicographic (cost, id) order used for every partner choice.
inline bool better(double cost, std::uint32_t id, const Partner& p) {
    return cost < p.cost || (cost == p.cost && id < p.id);
}

// Nearest-merge-partner search over the live clusters. Entries are kept in
// a logarithmic forest of static kd-trees (level i holds at most 2^i
// entries); stale entries are skipped at query time and dropped whenever
// levels are merged or the forest is rebuilt.
class CentroidIndex {
public:
    explicit CentroidIndex(const ClusterTable& table) : table_(&table) {}

    void insert(std::uint32_t id);
    void rebuild(std::span<const std::uint32_t> live);
    std::size_t entries() const { return entries_; }

    // Live cluster minimising (merge cost, id) against `query`, excluding
    // the query itself.
    Partner nearest(std::uint32_t query) const;

private:
    struct Entry {
        std::uint32_t id;
        std::uint32_t version;
    };
    struct Node {
        std::uint32_t begin, end;
        std::int32_t left = -1, right = -1;
        double min_size = 0.0;
    };
    struct Tree {
        std::vector<Entry> entries;
        std::vector<Node> nodes;
        std::vector<double> bounds;  // per node: dim lows then dim highs
    };

    bool live(const Entry& e) const { return table_->active[e.id] && table_->versions[e.id] == e.version; }
    void build(Tree& tree, std::vector<Entry> entries) const;
    std::int32_t build_node(Tree& tree, std::uint32_t begin, std::uint32_t end) const;
    void search(const Tree& tree, std::int32_t node, std::uint32_t query, double qsize, std::span<const double> qc,
                Partner& best) const;
    double bound(const Tree& tree, std::int32_t node, double qsize, std::span<const double> qc) const;

    const ClusterTable* table_;
    std::vector<Tree> levels_;
    std::size_t entries_ = 0;
};

}  // namespace lvlm::detail
