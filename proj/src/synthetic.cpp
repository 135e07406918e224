#include "tagcloud/synthetic.hpp"

#include "tagcloud/errors.hpp"
#include "tagcloud/random.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace tagcloud {

namespace {

struct Topic {
    std::size_t tags;
    std::size_t resources;
    std::size_t users_per_resource;
};

// Zipf-like popularity: tag j of a topic has weight 1 / (j + 1).
std::size_t zipf_pick(Rng& rng, std::size_t n) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        total += 1.0 / static_cast<double>(j + 1);
    double u = rng.uniform() * total;
    for (std::size_t j = 0; j < n; ++j) {
        u -= 1.0 / static_cast<double>(j + 1);
        if (u < 0.0)
            return j;
    }
    return n - 1;
}

std::string resource_name(std::size_t topic, std::size_t index) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "res-%zu-%04zu", topic, index);
    return buf;
}

} // namespace

std::string synthetic_tag_name(std::size_t topic, std::size_t index) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "topic%zu-%02zu", topic, index);
    return buf;
}

SyntheticCorpus generate_synthetic_records(const SyntheticSpec& spec) {
    if (spec.topics == 0 || spec.tags_per_topic == 0 || spec.resources_per_topic == 0)
        throw InvalidArgumentError("topic, tag and resource counts must be >= 1");
    if (spec.users_per_resource == 0 || spec.tags_per_user == 0 || spec.user_pool == 0)
        throw InvalidArgumentError("user counts must be >= 1");
    if (!(spec.noise >= 0.0 && spec.noise <= 1.0))
        throw InvalidArgumentError("noise must be in [0, 1]", "noise");
    if (spec.dominant_tags > 0 && spec.dominant_resources == 0)
        throw InvalidArgumentError("dominant topic needs at least one resource", "dominant_resources");

    std::vector<Topic> topics;
    for (std::size_t t = 0; t < spec.topics; ++t) {
        if (t == 0 && spec.dominant_tags > 0) {
            auto users = spec.dominant_users_per_resource ? spec.dominant_users_per_resource : spec.users_per_resource;
            topics.push_back({spec.dominant_tags, spec.dominant_resources, users});
        } else {
            topics.push_back({spec.tags_per_topic, spec.resources_per_topic, spec.users_per_resource});
        }
    }

    SyntheticCorpus out;
    for (std::size_t t = 0; t < topics.size(); ++t) {
        std::vector<std::string> names;
        for (std::size_t j = 0; j < topics[t].tags; ++j)
            names.push_back(synthetic_tag_name(t, j));
        if (t < spec.synonym_topics)
            names.push_back(names.front() + "-alias");
        out.topic_tags.push_back(std::move(names));
    }

    std::vector<std::vector<bool>> used(topics.size());
    for (std::size_t t = 0; t < topics.size(); ++t)
        used[t].assign(topics[t].tags, false);

    auto emit = [&](const std::string& user, const std::string& resource, std::size_t topic, std::size_t tag) {
        out.records.push_back({user, resource, out.topic_tags[topic][tag]});
        used[topic][tag] = true;
        if (tag == 0 && topic < spec.synonym_topics)
            out.records.push_back({user, resource, out.topic_tags[topic].back()});
    };

    Rng rng(spec.seed);
    for (std::size_t t = 0; t < topics.size(); ++t) {
        const auto& topic = topics[t];
        for (std::size_t r = 0; r < topic.resources; ++r) {
            const auto resource = resource_name(t, r);
            const auto n_users = 1 + rng.index(topic.users_per_resource);
            std::set<std::uint64_t> users;
            while (users.size() < std::min<std::uint64_t>(n_users, spec.user_pool))
                users.insert(rng.index(spec.user_pool));
            for (auto u : users) {
                const auto user = "user" + std::to_string(u);
                const auto n_tags = std::min<std::uint64_t>(1 + rng.index(spec.tags_per_user), topic.tags);
                std::set<std::size_t> picked;
                while (picked.size() < n_tags)
                    picked.insert(zipf_pick(rng, topic.tags));
                for (auto j : picked)
                    emit(user, resource, t, j);
                if (topics.size() > 1 && rng.bernoulli(spec.noise)) {
                    auto other = rng.index(topics.size() - 1);
                    if (other >= t)
                        ++other;
                    emit(user, resource, other, zipf_pick(rng, topics[other].tags));
                }
            }
        }
    }

    // Every planted tag must exist in the corpus.
    for (std::size_t t = 0; t < topics.size(); ++t)
        for (std::size_t j = 0; j < topics[t].tags; ++j)
            if (!used[t][j])
                emit("user-fill", resource_name(t, j % topics[t].resources), t, j);

    return out;
}

Corpus generate_synthetic(const SyntheticSpec& spec) {
    return build_corpus(generate_synthetic_records(spec).records);
}

SyntheticSpec standard_fixture(std::uint64_t seed) {
    SyntheticSpec s;
    s.topics = 5;
    s.tags_per_topic = 10;
    s.resources_per_topic = 60;
    s.noise = 0.05;
    s.seed = seed;
    s.users_per_resource = 4;
    s.tags_per_user = 3;
    s.dominant_tags = 40;
    s.dominant_resources = 300;
    s.dominant_users_per_resource = 10;
    return s;
}

SyntheticSpec block_fixture(std::size_t topics, std::uint64_t seed) {
    SyntheticSpec s;
    s.topics = topics;
    s.tags_per_topic = 6;
    s.resources_per_topic = 30;
    s.noise = 0.0;
    s.seed = seed;
    return s;
}

} // namespace tagcloud
