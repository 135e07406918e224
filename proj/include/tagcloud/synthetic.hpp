#pragma once

#include "tagcloud/corpus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tagcloud {

/// Parameters of the planted-topic corpus generator.
///
/// Each topic owns a disjoint tag vocabulary and a set of resources.
/// Every resource is bookmarked by a few users, and each user picks tags
/// from the resource's topic with Zipf-like popularity. With probability
/// `noise` a user also adds one tag from another topic; with noise 0 the
/// postings of different topics never intersect.
///
/// When `dominant_tags` > 0, topic 0 is a dominant topic with its own
/// vocabulary size, resource count and bookmark depth; the other
/// `topics - 1` topics use the regular sizes.
struct SyntheticSpec {
    std::size_t topics = 3;
    std::size_t tags_per_topic = 4;
    std::size_t resources_per_topic = 10;
    double noise = 0.0;
    std::uint64_t seed = 0;

    std::size_t users_per_resource = 4;  // upper bound, drawn uniformly in [1, n]
    std::size_t tags_per_user = 3;       // upper bound, drawn uniformly in [1, n]
    std::size_t user_pool = 500;

    std::size_t dominant_tags = 0;
    std::size_t dominant_resources = 0;
    std::size_t dominant_users_per_resource = 0; // 0 means users_per_resource

    /// For the first `synonym_topics` topics, tag 00 gets an alias tag
    /// ("<tag>-alias") assigned by the same users to the same resources.
    std::size_t synonym_topics = 0;
};

struct SyntheticCorpus {
    std::vector<Assignment> records;
    /// Planted vocabulary per topic (aliases included).
    std::vector<std::vector<std::string>> topic_tags;
};

/// Throws InvalidArgumentError on zero counts or noise outside [0, 1].
SyntheticCorpus generate_synthetic_records(const SyntheticSpec& spec);
Corpus generate_synthetic(const SyntheticSpec& spec);

/// Name of tag `index` in topic `topic`, e.g. "topic2-07".
std::string synthetic_tag_name(std::size_t topic, std::size_t index);

/// The reference fixture: one dominant topic of 40 tags plus four minor
/// topics of 10 tags, with light cross-topic noise.
SyntheticSpec standard_fixture(std::uint64_t seed);

/// Zero-noise planted partition with `topics` equally sized topics.
SyntheticSpec block_fixture(std::size_t topics, std::uint64_t seed);

} // namespace tagcloud
