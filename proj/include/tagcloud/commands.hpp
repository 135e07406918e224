#pragma once

#include "tagcloud/config.hpp"
#include "tagcloud/corpus.hpp"
#include "tagcloud/layout.hpp"

#include <filesystem>
#include <string>

namespace tagcloud {

// Subcommand bodies, kept in the library so they can be tested without
// spawning the binary. Each returns the text the CLI prints or writes.

/// Reads config.input (record files or one serialized corpus).
Corpus load_inputs(const RunConfig& config, IngestReport* report = nullptr);

struct Artifact {
    std::string corpus_bytes;
    std::string digest;
    CloudModel model;
    std::string cloud_json;
    std::string cloud_html;
};

Artifact build_artifact(const Corpus& corpus, const RunConfig& config);

/// Writes corpus.bin, cloud.json and cloud.html into `dir`.
void write_artifact(const Artifact& artifact, const std::filesystem::path& dir);

/// Coverage and overlap of the top-n tags under each method a-d.
/// config.format selects "text" (aligned columns) or "csv".
std::string stats_report(const Corpus& corpus, const RunConfig& config);

/// Jaccard matrix over the top-n tags: dense CSV up to 1000 tags, sparse
/// (tag_a, tag_b, value) triples above. With synonym_threshold > 0 only
/// the pairs at or above the threshold are listed.
std::string similarity_report(const Corpus& corpus, const RunConfig& config);

/// One line per cluster in display order, plus quality diagnostics.
std::string cluster_report(const Corpus& corpus, const RunConfig& config);

/// Synthetic fixture records as JSON lines (or TSV when format is "tsv").
std::string synthetic_report(const RunConfig& config);

std::string csv_field(std::string_view s);

} // namespace tagcloud
