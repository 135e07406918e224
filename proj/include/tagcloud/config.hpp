#pragma once

#include "tagcloud/corpus.hpp"
#include "tagcloud/pipeline.hpp"
#include "tagcloud/synthetic.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tagcloud {

/// Fully resolved command-line configuration. Field names double as the
/// keys of the optional JSON config file and, with '_' turned into '-',
/// as the long flag names.
struct RunConfig {
    std::vector<std::string> input;
    std::string input_format = "auto"; // auto | jsonl | tsv
    std::string on_error = "abort";    // abort | skip

    std::string method = "d";
    std::size_t n = 95;
    std::size_t k = 12;
    std::uint64_t seed = 0;
    int buckets = kDefaultBuckets;
    std::size_t trials = 10;
    bool log_smoothing = false;
    std::string cluster_space = "jaccard"; // jaccard | counts
    std::string split = "largest";         // largest | cohesion
    std::string mode = "clustered";        // clustered | alphabetical
    bool separators = false;

    std::string output;
    std::string format = "text"; // stats: text | csv; gen: jsonl | tsv; similarity: auto | dense | sparse
    double synonym_threshold = 0.0;
    std::string subcloud;

    std::string bind = "127.0.0.1";
    int port = 8080;
    std::string ui_dir;
    std::size_t cache_capacity = 256;

    std::string fixture = "standard"; // standard | block | custom
    std::size_t topics = 5;
    std::size_t tags_per_topic = 10;
    std::size_t resources_per_topic = 60;
    double noise = 0.05;
    std::size_t dominant_tags = 40;
    std::size_t dominant_resources = 300;
};

/// Every key a config file may carry.
const std::vector<std::string>& config_keys();

/// JSON object with every field, in declaration order.
std::string config_to_json(const RunConfig& config);

/// Applies the keys present in `json_text` onto `config`, skipping keys in
/// `keep` (those already set on the command line). Unknown keys and
/// type mismatches throw InvalidArgumentError.
void apply_config_json(RunConfig& config, std::string_view json_text, const std::set<std::string>& keep = {});

/// Translates the pipeline fields; throws InvalidArgumentError naming the
/// offending field.
CloudParams cloud_params(const RunConfig& config);

std::optional<InputFormat> input_format(const RunConfig& config);
ErrorPolicy error_policy(const RunConfig& config);

/// Generator spec for the configured fixture.
SyntheticSpec synthetic_spec(const RunConfig& config);

} // namespace tagcloud
