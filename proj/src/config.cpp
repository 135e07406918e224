#include "tagcloud/config.hpp"

#include "tagcloud/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>

namespace tagcloud {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Field {
    std::string key;
    std::function<void(const RunConfig&, ordered_json&)> write;
    std::function<void(RunConfig&, const ordered_json&)> read;
};

template <typename T>
Field field(std::string key, T RunConfig::*member) {
    return {key, [key, member](const RunConfig& c, ordered_json& j) { j[key] = c.*member; },
            [key, member](RunConfig& c, const ordered_json& j) {
                try {
                    c.*member = j.get<T>();
                } catch (const nlohmann::json::exception&) {
                    throw InvalidArgumentError("config key '" + key + "' has the wrong type", key);
                }
            }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> all = {
        field("input", &RunConfig::input),
        field("input_format", &RunConfig::input_format),
        field("on_error", &RunConfig::on_error),
        field("method", &RunConfig::method),
        field("n", &RunConfig::n),
        field("k", &RunConfig::k),
        field("seed", &RunConfig::seed),
        field("buckets", &RunConfig::buckets),
        field("trials", &RunConfig::trials),
        field("log_smoothing", &RunConfig::log_smoothing),
        field("cluster_space", &RunConfig::cluster_space),
        field("split", &RunConfig::split),
        field("mode", &RunConfig::mode),
        field("separators", &RunConfig::separators),
        field("output", &RunConfig::output),
        field("format", &RunConfig::format),
        field("synonym_threshold", &RunConfig::synonym_threshold),
        field("subcloud", &RunConfig::subcloud),
        field("bind", &RunConfig::bind),
        field("port", &RunConfig::port),
        field("ui_dir", &RunConfig::ui_dir),
        field("cache_capacity", &RunConfig::cache_capacity),
        field("fixture", &RunConfig::fixture),
        field("topics", &RunConfig::topics),
        field("tags_per_topic", &RunConfig::tags_per_topic),
        field("resources_per_topic", &RunConfig::resources_per_topic),
        field("noise", &RunConfig::noise),
        field("dominant_tags", &RunConfig::dominant_tags),
        field("dominant_resources", &RunConfig::dominant_resources),
    };
    return all;
}

} // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& f : fields())
            out.push_back(f.key);
        return out;
    }();
    return keys;
}

std::string config_to_json(const RunConfig& config) {
    ordered_json j = ordered_json::object();
    for (const auto& f : fields())
        f.write(config, j);
    return j.dump(2) + "\n";
}

void apply_config_json(RunConfig& config, std::string_view json_text, const std::set<std::string>& keep) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgumentError(std::string("config file is not valid JSON: ") + e.what(), "config");
    }
    if (!j.is_object())
        throw InvalidArgumentError("config file must hold a JSON object", "config");
    for (const auto& item : j.items()) {
        const std::string key = item.key();
        const auto& value = item.value();
        auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) { return f.key == key; });
        if (it == fields().end())
            throw InvalidArgumentError("unknown config key '" + key + "'", key);
        if (!keep.contains(key))
            it->read(config, value);
    }
}

CloudParams cloud_params(const RunConfig& c) {
    CloudParams p;
    p.method = parse_method(c.method);
    p.mode = parse_mode(c.mode);
    if (c.n == 0)
        throw InvalidArgumentError("n must be >= 1", "n");
    if (c.k == 0)
        throw InvalidArgumentError("k must be >= 1", "k");
    if (c.trials == 0)
        throw InvalidArgumentError("trials must be >= 1", "trials");
    if (c.buckets < 1)
        throw InvalidArgumentError("buckets must be >= 1", "buckets");
    p.n = c.n;
    p.k = c.k;
    p.seed = c.seed;
    p.trials = c.trials;
    p.buckets = c.buckets;
    p.log_smoothing = c.log_smoothing;
    p.cluster_space = parse_cluster_space(c.cluster_space);
    p.split = parse_split_criterion(c.split);
    return p;
}

std::optional<InputFormat> input_format(const RunConfig& c) {
    if (c.input_format == "auto")
        return std::nullopt;
    if (c.input_format == "jsonl")
        return InputFormat::JsonLines;
    if (c.input_format == "tsv")
        return InputFormat::Tsv;
    throw InvalidArgumentError("input_format must be auto, jsonl or tsv", "input_format");
}

ErrorPolicy error_policy(const RunConfig& c) {
    if (c.on_error == "abort")
        return ErrorPolicy::Abort;
    if (c.on_error == "skip")
        return ErrorPolicy::Skip;
    throw InvalidArgumentError("on_error must be abort or skip", "on_error");
}

SyntheticSpec synthetic_spec(const RunConfig& c) {
    if (c.fixture == "standard")
        return standard_fixture(c.seed);
    if (c.fixture == "block")
        return block_fixture(c.topics, c.seed);
    if (c.fixture != "custom")
        throw InvalidArgumentError("fixture must be standard, block or custom", "fixture");
    SyntheticSpec s;
    s.topics = c.topics;
    s.tags_per_topic = c.tags_per_topic;
    s.resources_per_topic = c.resources_per_topic;
    s.noise = c.noise;
    s.seed = c.seed;
    s.dominant_tags = c.dominant_tags;
    s.dominant_resources = c.dominant_resources;
    return s;
}

} // namespace tagcloud
