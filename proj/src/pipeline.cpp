#include "tagcloud/pipeline.hpp"

#include "tagcloud/errors.hpp"

namespace tagcloud {

CloudBuild run_pipeline(const Corpus& corpus, const CloudParams& params, const std::string& digest,
                        std::span<const std::string> excluded) {
    if (params.n == 0)
        throw InvalidArgumentError("n must be >= 1", "n");
    if (params.k == 0)
        throw InvalidArgumentError("k must be >= 1", "k");
    if (params.trials == 0)
        throw InvalidArgumentError("trials must be >= 1", "trials");
    if (params.buckets < 1)
        throw InvalidArgumentError("buckets must be >= 1", "buckets");

    CloudBuild out;
    out.selection = select_top_n(corpus, params.method, params.n, {params.log_smoothing}, excluded);
    auto tags = out.selection.tags();

    CloudMetadata meta{std::string(method_id(params.method)), params.n, params.k, params.seed, digest};
    std::optional<std::vector<std::vector<std::string>>> rows;
    if (!tags.empty()) {
        out.matrix = build_matrix(corpus, tags);
        if (params.mode == CloudMode::Clustered) {
            ClusteringOptions options;
            options.k = params.k;
            options.seed = params.seed;
            options.trials = params.trials;
            options.split = params.split;
            auto profiles = params.cluster_space == ClusterSpace::Counts ? cooccurrence_profiles(corpus, tags)
                                                                         : profile_vectors(out.matrix);
            out.clusters = seriate(out.matrix, bisecting_kmeans(profiles, options));
            rows = cluster_tags(out.clusters, out.matrix.tags());
        }
    }
    out.model = build_cloud(out.selection, rows, params.mode, std::move(meta), params.buckets);
    return out;
}

std::string_view cluster_space_id(ClusterSpace space) noexcept {
    return space == ClusterSpace::Counts ? "counts" : "jaccard";
}

ClusterSpace parse_cluster_space(std::string_view id) {
    if (id == "jaccard")
        return ClusterSpace::Jaccard;
    if (id == "counts")
        return ClusterSpace::Counts;
    throw InvalidArgumentError("cluster space must be 'jaccard' or 'counts'", "cluster_space");
}

std::string_view split_criterion_id(SplitCriterion split) noexcept {
    return split == SplitCriterion::LowestCohesion ? "cohesion" : "largest";
}

SplitCriterion parse_split_criterion(std::string_view id) {
    if (id == "largest")
        return SplitCriterion::Largest;
    if (id == "cohesion")
        return SplitCriterion::LowestCohesion;
    throw InvalidArgumentError("split criterion must be 'largest' or 'cohesion'", "split");
}

} // namespace tagcloud
