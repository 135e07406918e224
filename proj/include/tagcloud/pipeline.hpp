#pragma once

#include "tagcloud/clustering.hpp"
#include "tagcloud/corpus.hpp"
#include "tagcloud/layout.hpp"
#include "tagcloud/similarity.hpp"
#include "tagcloud/weighting.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace tagcloud {

/// Everything that determines a cloud, with the reference defaults
/// (method d, 95 tags, 12 clusters).
struct CloudParams {
    SelectionMethod method = SelectionMethod::LogOverMSquared;
    std::size_t n = 95;
    std::size_t k = 12;
    CloudMode mode = CloudMode::Clustered;
    std::uint64_t seed = 0;
    std::size_t trials = 10;
    int buckets = kDefaultBuckets;
    bool log_smoothing = false;
    ClusterSpace cluster_space = ClusterSpace::Jaccard;
    SplitCriterion split = SplitCriterion::Largest;

    friend bool operator==(const CloudParams&, const CloudParams&) = default;
};

/// Selection, similarity, clustering and seriation for one cloud.
struct CloudBuild {
    SelectionResult selection;
    SimilarityMatrix matrix;
    ClusterSet clusters; // seriated; empty in alphabetical mode
    CloudModel model;
};

/// Runs the whole pipeline over `corpus`. Tags in `excluded` are never
/// selected. `digest` goes into the cloud metadata.
CloudBuild run_pipeline(const Corpus& corpus, const CloudParams& params, const std::string& digest,
                        std::span<const std::string> excluded = {});

inline CloudModel compute_cloud(const Corpus& corpus, const CloudParams& params, const std::string& digest,
                                std::span<const std::string> excluded = {}) {
    return run_pipeline(corpus, params, digest, excluded).model;
}

std::string_view cluster_space_id(ClusterSpace space) noexcept;
ClusterSpace parse_cluster_space(std::string_view id);
std::string_view split_criterion_id(SplitCriterion split) noexcept;
SplitCriterion parse_split_criterion(std::string_view id);

} // namespace tagcloud
