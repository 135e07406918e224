#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tagcloud {

using ResourceId = std::uint32_t;
using TagId = std::uint32_t;

/// One (user, resource, tag) tagging event.
struct Assignment {
    std::string user;
    std::string resource;
    std::string tag;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Lowercases ASCII letters and strips surrounding whitespace.
/// Returns nullopt when nothing is left.
std::optional<std::string> normalize_tag(std::string_view raw);

struct TagStats {
    std::uint32_t resources = 0;    // n_j
    std::uint64_t total_weight = 0; // sum over i of d_ij
};

/// Immutable tag-resource weight matrix.
///
/// Stored twice: row-major (resource -> tags) and column-major
/// (tag -> postings). Resource and tag ids are assigned in lexicographic
/// order of their names, so two corpora built from the same set of
/// assignments are identical regardless of input order.
class Corpus {
  public:
    Corpus() = default;

    std::size_t resource_count() const noexcept { return resource_names_.size(); }
    std::size_t tag_count() const noexcept { return tag_names_.size(); }
    /// Number of stored (resource, tag) cells.
    std::size_t cell_count() const noexcept { return row_tags_.size(); }

    const std::string& resource_name(ResourceId r) const { return resource_names_.at(r); }
    const std::string& tag_name(TagId t) const { return tag_names_.at(t); }
    std::span<const std::string> tag_names() const noexcept { return tag_names_; }
    std::span<const std::string> resource_names() const noexcept { return resource_names_; }

    std::optional<TagId> find_tag(std::string_view tag) const;
    std::optional<ResourceId> find_resource(std::string_view resource) const;
    /// Throws NotFoundError for an unknown tag.
    TagId tag_id(std::string_view tag) const;

    /// Resources carrying tag `t`, strictly increasing.
    std::span<const ResourceId> postings(TagId t) const;
    /// d_ij aligned with postings(t).
    std::span<const std::uint32_t> posting_weights(TagId t) const;

    /// Tags on resource `r`, strictly increasing.
    std::span<const TagId> resource_tags(ResourceId r) const;
    std::span<const std::uint32_t> resource_weights(ResourceId r) const;

    /// m_i
    std::uint32_t resource_tag_count(ResourceId r) const;
    /// n_j
    std::uint32_t tag_resource_count(TagId t) const;
    /// d_ij, 0 when absent.
    std::uint32_t weight(ResourceId r, TagId t) const;

    /// Throws NotFoundError for an unknown tag.
    TagStats tag_stats(std::string_view tag) const;

    /// Verifies the structural invariants (row/column consistency,
    /// sorted postings, positive weights).
    bool check_invariants() const;

    /// Keeps only the resources carrying `t`, with their full rows.
    /// Weights are inherited; tags left without resources are dropped.
    Corpus restrict_to_tag(TagId t) const;

    /// Canonical little-endian binary encoding.
    std::string serialize() const;
    static Corpus deserialize(std::string_view bytes);
    static bool looks_serialized(std::string_view bytes);

    /// Hex SHA-256 of serialize().
    std::string digest() const;

    friend bool operator==(const Corpus&, const Corpus&) = default;

  private:
    friend class CorpusBuilder;

    std::vector<std::string> resource_names_;
    std::vector<std::string> tag_names_;

    // CSR by resource
    std::vector<std::uint64_t> row_offsets_{0};
    std::vector<TagId> row_tags_;
    std::vector<std::uint32_t> row_weights_;

    // CSC by tag
    std::vector<std::uint64_t> col_offsets_{0};
    std::vector<ResourceId> col_resources_;
    std::vector<std::uint32_t> col_weights_;

    void build_columns();
};

/// Collects assignments; build() deduplicates (user, resource, tag)
/// triples and counts distinct users per (resource, tag).
class CorpusBuilder {
  public:
    /// Normalizes the tag; throws InvalidArgumentError when it is empty.
    void add(Assignment a);
    std::size_t size() const noexcept { return records_.size(); }
    Corpus build() &&;

  private:
    std::vector<Assignment> records_;
};

Corpus build_corpus(std::span<const Assignment> records);

enum class InputFormat { JsonLines, Tsv };
enum class ErrorPolicy { Abort, Skip };

struct IngestReport {
    std::size_t lines = 0;
    std::size_t records = 0;
    std::size_t skipped = 0;
    /// First few skipped-record diagnostics.
    std::vector<std::string> diagnostics;
};

/// Parses one input line. Throws ParseError (tagged with `line_number`).
Assignment parse_record(std::string_view line, InputFormat format, std::size_t line_number);

/// Blank lines are ignored. With ErrorPolicy::Abort the first malformed
/// record throws ParseError; with Skip it is counted in the report.
Corpus ingest(std::istream& in, InputFormat format, ErrorPolicy policy = ErrorPolicy::Abort,
              IngestReport* report = nullptr);

/// Same as ingest() but appends to an existing builder; the report
/// accumulates across calls.
void ingest_into(CorpusBuilder& builder, std::istream& in, InputFormat format, ErrorPolicy policy,
                 IngestReport& report);

/// ".tsv"/".tab"/".txt" select Tsv, everything else JsonLines.
InputFormat format_for_path(const std::filesystem::path& path);

/// Loads either a serialized corpus (detected by its magic header) or a
/// record file. Throws NotFoundError when the file cannot be opened.
Corpus load_corpus(const std::filesystem::path& path, std::optional<InputFormat> format = {},
                   ErrorPolicy policy = ErrorPolicy::Abort, IngestReport* report = nullptr);

/// Several record files merged into one corpus. A single path may also be
/// a serialized corpus.
Corpus load_corpora(std::span<const std::filesystem::path> paths, std::optional<InputFormat> format = {},
                    ErrorPolicy policy = ErrorPolicy::Abort, IngestReport* report = nullptr);

} // namespace tagcloud
