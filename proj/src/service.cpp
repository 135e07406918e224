#include "tagcloud/service.hpp"

#include "tagcloud/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>

namespace tagcloud {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kMaxPageSize = 10000;
constexpr std::size_t kDefaultResourceLimit = 20;
constexpr std::size_t kDefaultRelatedLimit = 10;

std::optional<std::string> first_value(const QueryParams& query, const std::string& key) {
    auto it = query.find(key);
    if (it == query.end())
        return std::nullopt;
    return it->second;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& field) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw InvalidArgumentError(field + " must be a non-negative integer (got '" + text + "')", field);
    return v;
}

std::size_t bounded(const QueryParams& query, const std::string& field, std::size_t fallback, std::size_t lo,
                    std::size_t hi) {
    auto raw = first_value(query, field);
    if (!raw)
        return fallback;
    auto v = parse_unsigned(*raw, field);
    if (v < lo || v > hi)
        throw InvalidArgumentError(field + " must be between " + std::to_string(lo) + " and " + std::to_string(hi),
                                   field);
    return static_cast<std::size_t>(v);
}

Response error_response(int status, const std::string& code, const std::string& message,
                        const std::string& field = {}) {
    ordered_json body;
    body["error"] = code;
    body["message"] = message;
    if (!field.empty())
        body["field"] = field;
    return {status, "application/json", body.dump() + "\n"};
}

template <typename Fn>
Response guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const InvalidArgumentError& e) {
        return error_response(400, "invalid_argument", e.what(), e.field());
    } catch (const NotFoundError& e) {
        return error_response(404, "not_found", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

std::string cache_key(const std::string& scope, const CloudParams& p) {
    std::string key = scope;
    key += '\x1f';
    key += method_id(p.method);
    key += ':' + std::to_string(p.n) + ':' + std::to_string(p.k) + ':' + std::string(mode_id(p.mode)) + ':' +
           std::to_string(p.seed) + ':' + std::to_string(p.trials) + ':' + std::to_string(p.buckets) + ':' +
           (p.log_smoothing ? "1" : "0") + ':' + std::string(cluster_space_id(p.cluster_space)) + ':' +
           std::string(split_criterion_id(p.split));
    return key;
}

ordered_json resources_json(const std::vector<ResourceEntry>& page) {
    auto list = ordered_json::array();
    for (const auto& r : page) {
        ordered_json item;
        item["resource"] = r.resource;
        item["weight"] = r.weight;
        list.push_back(std::move(item));
    }
    return list;
}

ordered_json related_json(const std::vector<RelatedTag>& tags) {
    auto list = ordered_json::array();
    for (const auto& r : tags) {
        ordered_json item;
        item["tag"] = r.tag;
        item["value"] = r.value;
        list.push_back(std::move(item));
    }
    return list;
}

} // namespace

TagCloudService::TagCloudService(Corpus corpus, CloudParams defaults, std::size_t cache_capacity)
    : corpus_(std::move(corpus)), digest_(corpus_.digest()), defaults_(defaults), cache_(cache_capacity) {
    main_cloud_ = compute_cloud(corpus_, defaults_, digest_);
}

std::shared_ptr<const CloudModel> TagCloudService::cloud(const CloudParams& params) const {
    if (params == defaults_)
        return std::shared_ptr<const CloudModel>(std::shared_ptr<const CloudModel>{}, &main_cloud_);
    return cache_.get_or_compute(cache_key("", params), [&] {
        return std::make_shared<const CloudModel>(compute_cloud(corpus_, params, digest_));
    });
}

std::shared_ptr<const CloudModel> TagCloudService::subcloud(const std::string& tag, const CloudParams& params) const {
    auto id = corpus_.tag_id(tag);
    return cache_.get_or_compute(cache_key("tag=" + tag, params), [&] {
        auto sub = corpus_.restrict_to_tag(id);
        const std::string excluded[] = {tag};
        return std::make_shared<const CloudModel>(compute_cloud(sub, params, digest_, excluded));
    });
}

std::vector<ResourceEntry> TagCloudService::resources(const std::string& tag, std::size_t limit,
                                                      std::size_t offset) const {
    auto id = corpus_.tag_id(tag);
    auto postings = corpus_.postings(id);
    auto weights = corpus_.posting_weights(id);
    std::vector<std::size_t> order(postings.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    // Resource ids follow name order, so the id breaks ties by name.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    std::vector<ResourceEntry> out;
    for (std::size_t i = offset; i < order.size() && out.size() < limit; ++i)
        out.push_back({corpus_.resource_name(postings[order[i]]), weights[order[i]]});
    return out;
}

std::vector<RelatedTag> TagCloudService::related(const std::string& tag, std::size_t limit) const {
    auto id = corpus_.tag_id(tag);
    std::vector<TagId> neighbours;
    for (auto r : corpus_.postings(id))
        for (auto t : corpus_.resource_tags(r))
            if (t != id)
                neighbours.push_back(t);
    std::sort(neighbours.begin(), neighbours.end());
    neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());
    std::vector<RelatedTag> out;
    for (auto t : neighbours)
        out.push_back({corpus_.tag_name(t), jaccard(corpus_, id, t)});
    std::sort(out.begin(), out.end(), [](const RelatedTag& a, const RelatedTag& b) {
        if (a.value != b.value)
            return a.value > b.value;
        return a.tag < b.tag;
    });
    if (out.size() > limit)
        out.resize(limit);
    return out;
}

CloudParams TagCloudService::parse_params(const QueryParams& query) const {
    CloudParams p = defaults_;
    if (auto v = first_value(query, "method"))
        p.method = parse_method(*v);
    if (auto v = first_value(query, "mode"))
        p.mode = parse_mode(*v);
    p.n = bounded(query, "n", p.n, 1, 100000);
    p.k = bounded(query, "k", p.k, 1, 10000);
    p.buckets = static_cast<int>(bounded(query, "buckets", static_cast<std::size_t>(p.buckets), 1, 100));
    p.trials = bounded(query, "trials", p.trials, 1, 1000);
    if (auto v = first_value(query, "seed"))
        p.seed = parse_unsigned(*v, "seed");
    if (auto v = first_value(query, "format"); v && *v != "json" && *v != "html")
        throw InvalidArgumentError("format must be 'json' or 'html'", "format");
    return p;
}

Response TagCloudService::render_cloud(const CloudModel& model, const QueryParams& query,
                                       const CloudParams& params) const {
    if (first_value(query, "format") == std::optional<std::string>("html"))
        return {200, "text/html; charset=utf-8", emit_html(model, {params.buckets, false})};
    return {200, "application/json", emit_document(model)};
}

Response TagCloudService::handle_cloud(const QueryParams& query) const {
    return guarded([&] {
        auto params = parse_params(query);
        return render_cloud(*cloud(params), query, params);
    });
}

Response TagCloudService::handle_subcloud(const std::string& tag, const QueryParams& query) const {
    return guarded([&] {
        auto params = parse_params(query);
        return render_cloud(*subcloud(tag, params), query, params);
    });
}

Response TagCloudService::handle_resources(const std::string& tag, const QueryParams& query) const {
    return guarded([&] {
        auto limit = bounded(query, "limit", kDefaultResourceLimit, 1, kMaxPageSize);
        auto offset = bounded(query, "offset", 0, 0, ~std::size_t{0});
        ordered_json body;
        body["tag"] = tag;
        body["total"] = corpus_.tag_resource_count(corpus_.tag_id(tag));
        body["offset"] = offset;
        body["limit"] = limit;
        body["resources"] = resources_json(resources(tag, limit, offset));
        body["meta"] = ordered_json::parse(meta_json());
        return Response{200, "application/json", body.dump(2) + "\n"};
    });
}

Response TagCloudService::handle_related(const std::string& tag, const QueryParams& query) const {
    return guarded([&] {
        auto limit = bounded(query, "limit", kDefaultRelatedLimit, 1, kMaxPageSize);
        ordered_json body;
        body["tag"] = tag;
        body["related"] = related_json(related(tag, limit));
        body["meta"] = ordered_json::parse(meta_json());
        return Response{200, "application/json", body.dump(2) + "\n"};
    });
}

Response TagCloudService::handle_tag(const std::string& tag, const QueryParams& query) const {
    return guarded([&] {
        auto stats = corpus_.tag_stats(tag);
        auto limit = bounded(query, "limit", kDefaultResourceLimit, 1, kMaxPageSize);
        ordered_json body;
        body["tag"] = tag;
        body["resource_count"] = stats.resources;
        body["total_weight"] = stats.total_weight;
        body["resources"] = resources_json(resources(tag, limit, 0));
        body["related"] = related_json(related(tag, kDefaultRelatedLimit));
        body["meta"] = ordered_json::parse(meta_json());
        return Response{200, "application/json", body.dump(2) + "\n"};
    });
}

std::string TagCloudService::meta_json() const {
    ordered_json defaults;
    defaults["method"] = std::string(method_id(defaults_.method));
    defaults["n"] = defaults_.n;
    defaults["k"] = defaults_.k;
    defaults["mode"] = std::string(mode_id(defaults_.mode));
    defaults["seed"] = defaults_.seed;
    defaults["trials"] = defaults_.trials;
    defaults["buckets"] = defaults_.buckets;
    defaults["log_smoothing"] = defaults_.log_smoothing;
    defaults["cluster_space"] = std::string(cluster_space_id(defaults_.cluster_space));
    defaults["split"] = std::string(split_criterion_id(defaults_.split));
    ordered_json meta;
    meta["corpus_digest"] = digest_;
    meta["resources"] = corpus_.resource_count();
    meta["tags"] = corpus_.tag_count();
    meta["cells"] = corpus_.cell_count();
    meta["defaults"] = std::move(defaults);
    return meta.dump();
}

Response TagCloudService::handle_meta() const {
    return {200, "application/json", ordered_json::parse(meta_json()).dump(2) + "\n"};
}

} // namespace tagcloud
