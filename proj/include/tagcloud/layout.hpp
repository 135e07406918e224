#pragma once

#include "tagcloud/weighting.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tagcloud {

enum class CloudMode { Clustered, Alphabetical };

std::string_view mode_id(CloudMode mode) noexcept;
/// "clustered" or "alphabetical"; throws InvalidArgumentError otherwise.
CloudMode parse_mode(std::string_view id);

struct CloudTag {
    std::string tag;
    double weight = 0.0;
    int bucket = 1;

    friend bool operator==(const CloudTag&, const CloudTag&) = default;
};

struct CloudMetadata {
    std::string method;
    std::size_t n = 0;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::string corpus_digest;

    friend bool operator==(const CloudMetadata&, const CloudMetadata&) = default;
};

/// Render-ready cloud. Clustered clouds have one row per cluster;
/// alphabetical clouds have a single row (none when empty).
struct CloudModel {
    CloudMode mode = CloudMode::Clustered;
    CloudMetadata metadata;
    std::vector<std::vector<CloudTag>> rows;

    std::size_t tag_count() const noexcept;
    std::vector<std::string> tags() const;

    friend bool operator==(const CloudModel&, const CloudModel&) = default;
};

inline constexpr int kDefaultBuckets = 6;

/// Log-scaled font buckets in [1, buckets]:
///   1 + floor((B - 1) * (log(1 + w) - log(1 + w_min)) / (log(1 + w_max) - log(1 + w_min)))
/// All-equal weights map to ceil(B / 2). Throws InvalidArgumentError on an
/// empty list, B < 1, negative weights or no positive weight.
std::vector<int> assign_buckets(std::span<const double> weights, int buckets);

/// Builds the cloud for `selection`. Clustered mode needs `clusters`, an
/// ordered partition of exactly the selected tags (InconsistentInputError
/// otherwise); alphabetical mode ignores it.
CloudModel build_cloud(const SelectionResult& selection,
                       const std::optional<std::vector<std::vector<std::string>>>& clusters, CloudMode mode,
                       CloudMetadata metadata, int buckets = kDefaultBuckets);

struct HtmlOptions {
    int buckets = kDefaultBuckets;
    /// Emit an <hr> between clustered rows.
    bool separators = false;
};

/// Self-contained HTML page; byte-identical for identical input.
std::string emit_html(const CloudModel& model, const HtmlOptions& options = {});

/// JSON document {mode, method, n, k, seed, corpus_digest, rows}.
std::string emit_document(const CloudModel& model);
/// Inverse of emit_document; throws ParseError on malformed input.
CloudModel parse_document(std::string_view text);

/// Percent-encodes everything but RFC 3986 unreserved characters.
std::string url_encode(std::string_view s);
std::string html_escape(std::string_view s);

} // namespace tagcloud
