#pragma once

#include "tagcloud/corpus.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace tagcloud {

/// Symmetric tag-tag Jaccard matrix; zeros implicit, diagonal 1.
class SimilarityMatrix {
  public:
    struct Entry {
        std::size_t column;
        double value;
    };

    SimilarityMatrix() = default;

    /// From explicit off-diagonal values. `pairs` are (i, j, value) with
    /// i != j; each unordered pair may appear once. Zero values are dropped.
    static SimilarityMatrix from_pairs(std::vector<std::string> tags,
                                       std::span<const std::tuple<std::size_t, std::size_t, double>> pairs);

    std::size_t size() const noexcept { return tags_.size(); }
    std::span<const std::string> tags() const noexcept { return tags_; }
    const std::string& tag(std::size_t i) const { return tags_.at(i); }
    std::optional<std::size_t> index_of(std::string_view tag) const;

    double value(std::size_t i, std::size_t j) const;
    /// Off-diagonal non-zeros of row i, sorted by column.
    std::span<const Entry> row(std::size_t i) const;
    /// Row i as a dense vector including the diagonal.
    std::vector<double> dense_row(std::size_t i) const;
    /// Number of unordered pairs with a non-zero value.
    std::size_t nonzero_pairs() const noexcept;

  private:
    std::vector<std::string> tags_;
    std::vector<std::vector<Entry>> rows_;
};

/// |A ∩ B| / |A ∪ B| over the tags' resource sets; 1 when a == b.
double jaccard(const Corpus& corpus, TagId a, TagId b);
double jaccard(const Corpus& corpus, std::string_view a, std::string_view b);

/// Number of resources shared by two tags (sorted-merge intersection).
std::size_t intersection_size(const Corpus& corpus, TagId a, TagId b);

struct MatrixBuildStats {
    std::size_t candidate_pairs = 0; // pairs sharing >= 1 resource
    std::size_t intersections = 0;   // postings intersections performed
};

/// Jaccard matrix over `tags` (in the given order). Postings are only
/// intersected for pairs found together on some resource through the
/// resource -> tag index. Throws NotFoundError on unknown tags and
/// InvalidArgumentError on an empty or duplicated tag list.
SimilarityMatrix build_matrix(const Corpus& corpus, std::span<const std::string> tags,
                              MatrixBuildStats* stats = nullptr);

/// Cosine of rows i and j (diagonal included); 0 if either row is zero.
/// Throws InvalidArgumentError when an index is out of range.
double cosine_rows(const SimilarityMatrix& m, std::size_t i, std::size_t j);

struct SynonymPair {
    std::string a;
    std::string b; // a < b
    double value;

    friend bool operator==(const SynonymPair&, const SynonymPair&) = default;
};

/// Pairs with value >= threshold, by value descending then (a, b).
/// Threshold must lie in (0, 1].
std::vector<SynonymPair> synonym_pairs(const SimilarityMatrix& m, double threshold);

/// Which vectors represent a tag for clustering.
enum class ClusterSpace {
    Jaccard, // row of the Jaccard matrix
    Counts,  // raw co-occurrence counts with the other selected tags, n_j on the diagonal
};

/// Sparse non-negative vectors, one per tag, each sorted by index.
struct ProfileVectors {
    std::vector<std::string> tags;
    std::vector<std::vector<SimilarityMatrix::Entry>> rows;
};

ProfileVectors profile_vectors(const SimilarityMatrix& m);
ProfileVectors cooccurrence_profiles(const Corpus& corpus, std::span<const std::string> tags);

} // namespace tagcloud
