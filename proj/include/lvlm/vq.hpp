#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lvlm {

// N centroids in R^dim, stored row-major, with the number of input points
// each one represents.
struct Codebook {
    std::size_t dim = 0;
    std::vector<double> centroids;
    std::vector<std::size_t> sizes;

    std::size_t size() const { return sizes.size(); }
    std::span<const double> centroid(std::size_t j) const { return {centroids.data() + j * dim, dim}; }
};

// One agglomeration step. Clusters are identified by the lowest input point
// index they contain; the merged cluster keeps the lower identifier.
struct Merge {
    std::size_t kept = 0;
    std::size_t absorbed = 0;
    double cost = 0.0;
};

struct Quantization {
    Codebook codebook;
    // Codebook index for every input point.
    std::vector<std::uint32_t> assignment;
    // Merges in the order they were performed.
    std::vector<Merge> merges;
};

struct PnnOptions {
    // While at most this many clusters remain, every merge also re-checks all
    // clusters against the merged centroid so that equal-cost ties resolve to
    // the lowest identifier pair exactly. Above it, merges are still of
    // globally minimal cost but exact ties may resolve differently.
    std::size_t exact_tie_limit = 2048;
};

// Increase in total squared distortion caused by merging two clusters:
// n_a n_b / (n_a + n_b) * |c_a - c_b|^2.
double merge_cost(std::size_t size_a, std::span<const double> centroid_a, std::size_t size_b,
                  std::span<const double> centroid_b);

// Centroid of the union of two clusters, c_a + (c_b - c_a) n_b / (n_a + n_b).
// Coincident centroids are reproduced exactly.
void merge_centroid(std::size_t size_a, std::span<double> centroid_a, std::size_t size_b,
                    std::span<const double> centroid_b);

// Pairwise-nearest-neighbor vector quantization. Starting from singleton
// clusters, the pair with the smallest merge cost is merged until `target`
// clusters remain; ties go to the lowest identifier pair. Codebook entries
// are ordered by cluster identifier.
//
// Identical points are pooled before the main loop (their merges cost zero
// and are recorded in the order the greedy procedure would perform them).
// The remaining clusters keep a nearest-merge partner each, kept in a lazily
// invalidated priority queue; partner searches go through a kd-tree forest
// over the live centroids.
Quantization pnn_quantize(std::span<const double> points, std::size_t dim, std::size_t target,
                          const PnnOptions& options = {});

// Total squared distance of every point to its assigned centroid.
double total_distortion(std::span<const double> points, const Quantization& q);

}  // namespace lvlm
