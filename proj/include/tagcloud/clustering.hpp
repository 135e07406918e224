#pragma once

#include "tagcloud/similarity.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tagcloud {

/// Which cluster bisecting k-means splits next.
enum class SplitCriterion {
    Largest,        // most members; ties -> cluster holding the smallest tag
    LowestCohesion, // lowest mean member-centroid cosine among splittable clusters
};

struct ClusteringOptions {
    std::size_t k = 12;
    std::uint64_t seed = 0;
    std::size_t trials = 10;
    std::size_t max_iterations = 100;
    SplitCriterion split = SplitCriterion::Largest;
};

/// Partition of tag indices (into the profile / matrix tag list).
struct ClusterSet {
    std::vector<std::vector<std::size_t>> clusters;
    std::size_t k_requested = 0;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return clusters.size(); }

    friend bool operator==(const ClusterSet&, const ClusterSet&) = default;
};

/// Bisecting spherical k-means with cosine similarity.
///
/// Starts from one cluster holding every tag and bisects until
/// min(k, tags) clusters exist. Each bisection runs 2-means `trials` times
/// from seeded random centroid pairs and keeps the split with the highest
/// mean member-centroid cosine. Trial RNG streams depend only on
/// (seed, split index, trial index). Within-cluster order is ascending
/// index; cluster order is the order of creation.
///
/// Throws InvalidArgumentError when k or trials is 0.
ClusterSet bisecting_kmeans(const ProfileVectors& profiles, const ClusteringOptions& options);
ClusterSet bisecting_kmeans(const SimilarityMatrix& matrix, const ClusteringOptions& options);

/// Mean Jaccard value over all cross pairs. Clusters must be non-empty.
double cluster_similarity(const SimilarityMatrix& matrix, std::span<const std::size_t> a,
                          std::span<const std::size_t> b);

/// Greedy chain over clusters: start from the cluster with the highest
/// total similarity to all others (or `start`), then repeatedly append the
/// unvisited cluster most similar to the last one. Ties go to the cluster
/// holding the lexicographically smallest tag.
ClusterSet order_clusters(const SimilarityMatrix& matrix, ClusterSet clusters,
                          std::optional<std::size_t> start = std::nullopt);

/// The same greedy chain over the tags of one cluster, using Jaccard
/// values; ties by tag name. `start` must be a member when given.
std::vector<std::size_t> order_tags_within(const SimilarityMatrix& matrix, std::span<const std::size_t> cluster,
                                           std::optional<std::size_t> start = std::nullopt);

/// order_clusters followed by order_tags_within on every cluster.
ClusterSet seriate(const SimilarityMatrix& matrix, ClusterSet clusters);

/// Tag names per cluster.
std::vector<std::vector<std::string>> cluster_tags(const ClusterSet& clusters, std::span<const std::string> tags);

struct ClusterQuality {
    double intra_mean = 0.0; // mean Jaccard over pairs inside a cluster
    double inter_mean = 0.0; // mean Jaccard over pairs across clusters
};

ClusterQuality cluster_quality(const SimilarityMatrix& matrix, const ClusterSet& clusters);

} // namespace tagcloud
