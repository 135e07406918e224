#pragma once

#include "tagcloud/corpus.hpp"
#include "tagcloud/similarity.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tagcloud {

/// Tag selection functions, serialized as "a".."d":
///   a: n_j
///   b: sum of d_ij
///   c: sum of log(d_ij) / m_i
///   d: sum of log(d_ij) / m_i^2
/// where sums run over the resources carrying the tag.
enum class SelectionMethod { Frequency, SumWeight, LogOverM, LogOverMSquared };

inline constexpr SelectionMethod kAllMethods[] = {SelectionMethod::Frequency, SelectionMethod::SumWeight,
                                                  SelectionMethod::LogOverM, SelectionMethod::LogOverMSquared};

std::string_view method_id(SelectionMethod method) noexcept;
/// Throws InvalidArgumentError for anything but "a".."d".
SelectionMethod parse_method(std::string_view id);

struct ScoringOptions {
    /// Use log(1 + d_ij) instead of log(d_ij) for methods c and d.
    bool log_smoothing = false;
};

/// Natural logarithm. Throws NotFoundError for an unknown tag.
double score(const Corpus& corpus, TagId tag, SelectionMethod method, ScoringOptions options = {});
double score(const Corpus& corpus, std::string_view tag, SelectionMethod method, ScoringOptions options = {});

struct SelectionEntry {
    std::string tag;
    double score;

    friend bool operator==(const SelectionEntry&, const SelectionEntry&) = default;
};

struct SelectionResult {
    SelectionMethod method = SelectionMethod::LogOverMSquared;
    std::size_t n_requested = 0;
    /// Score descending, ties by tag ascending. Zero-score tags never appear.
    std::vector<SelectionEntry> entries;

    std::vector<std::string> tags() const;

    friend bool operator==(const SelectionResult&, const SelectionResult&) = default;
};

/// Top-n tags by score. Tags listed in `excluded` are never candidates.
/// Throws InvalidArgumentError when n == 0.
SelectionResult select_top_n(const Corpus& corpus, SelectionMethod method, std::size_t n,
                             ScoringOptions options = {}, std::span<const std::string> excluded = {});

struct Coverage {
    std::size_t count = 0;
    double fraction = 0.0;
};

/// Resources carrying at least one of `tags`.
Coverage coverage(const Corpus& corpus, std::span<const std::string> tags);

struct OverlapStats {
    double mean = 0.0;
    double stddev = 0.0; // population
};

/// Mean and population standard deviation of the Jaccard values over all
/// unordered pairs of `tags`, zero pairs included. Needs >= 2 tags.
OverlapStats overlap_stats(const SimilarityMatrix& matrix, std::span<const std::string> tags);

/// One row of the method comparison report.
struct MethodReport {
    SelectionMethod method;
    std::size_t selected = 0;
    Coverage coverage;
    OverlapStats overlap;
};

/// Selects top-n under every method and measures coverage and overlap.
/// Overlap is zero when fewer than two tags are selected.
std::vector<MethodReport> compare_methods(const Corpus& corpus, std::size_t n, ScoringOptions options = {});

} // namespace tagcloud
