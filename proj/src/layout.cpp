#include "tagcloud/layout.hpp"

#include "tagcloud/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace tagcloud {

std::string_view mode_id(CloudMode mode) noexcept {
    return mode == CloudMode::Clustered ? "clustered" : "alphabetical";
}

CloudMode parse_mode(std::string_view id) {
    if (id == "clustered")
        return CloudMode::Clustered;
    if (id == "alphabetical")
        return CloudMode::Alphabetical;
    throw InvalidArgumentError("mode must be 'clustered' or 'alphabetical' (got '" + std::string(id) + "')", "mode");
}

std::size_t CloudModel::tag_count() const noexcept {
    std::size_t n = 0;
    for (const auto& row : rows)
        n += row.size();
    return n;
}

std::vector<std::string> CloudModel::tags() const {
    std::vector<std::string> out;
    for (const auto& row : rows)
        for (const auto& t : row)
            out.push_back(t.tag);
    return out;
}

std::vector<int> assign_buckets(std::span<const double> weights, int buckets) {
    if (weights.empty())
        throw InvalidArgumentError("weight list is empty", "weights");
    if (buckets < 1)
        throw InvalidArgumentError("bucket count must be >= 1", "buckets");
    bool positive = false;
    for (auto w : weights) {
        if (!(w >= 0.0))
            throw InvalidArgumentError("weights must be non-negative", "weights");
        positive = positive || w > 0.0;
    }
    if (!positive)
        throw InvalidArgumentError("at least one weight must be positive", "weights");

    auto [lo_it, hi_it] = std::minmax_element(weights.begin(), weights.end());
    const double lo = std::log1p(*lo_it), hi = std::log1p(*hi_it);
    std::vector<int> out;
    out.reserve(weights.size());
    if (hi == lo) {
        out.assign(weights.size(), (buckets + 1) / 2);
        return out;
    }
    for (auto w : weights) {
        const double ratio = (std::log1p(w) - lo) / (hi - lo);
        auto b = 1 + static_cast<int>(std::floor(static_cast<double>(buckets - 1) * ratio));
        out.push_back(std::clamp(b, 1, buckets));
    }
    return out;
}

CloudModel build_cloud(const SelectionResult& selection,
                       const std::optional<std::vector<std::vector<std::string>>>& clusters, CloudMode mode,
                       CloudMetadata metadata, int buckets) {
    CloudModel model;
    model.mode = mode;
    model.metadata = std::move(metadata);
    if (selection.entries.empty()) {
        if (mode == CloudMode::Clustered && clusters && !clusters->empty())
            throw InconsistentInputError("clusters given for an empty selection");
        return model;
    }

    std::vector<double> weights;
    for (const auto& e : selection.entries)
        weights.push_back(e.score);
    auto bucket_of = assign_buckets(weights, buckets);
    std::map<std::string, CloudTag, std::less<>> by_tag;
    for (std::size_t i = 0; i < selection.entries.size(); ++i) {
        const auto& e = selection.entries[i];
        by_tag.emplace(e.tag, CloudTag{e.tag, e.score, bucket_of[i]});
    }

    if (mode == CloudMode::Alphabetical) {
        auto& row = model.rows.emplace_back();
        for (const auto& [tag, cloud_tag] : by_tag)
            row.push_back(cloud_tag);
        return model;
    }

    if (!clusters)
        throw InconsistentInputError("clustered mode needs ordered clusters");
    for (const auto& cluster : *clusters) {
        if (cluster.empty())
            throw InconsistentInputError("empty cluster");
        auto& row = model.rows.emplace_back();
        for (const auto& tag : cluster) {
            auto it = by_tag.find(tag);
            if (it == by_tag.end())
                throw InconsistentInputError("cluster tag '" + tag + "' is not selected or appears twice");
            row.push_back(std::move(it->second));
            by_tag.erase(it);
        }
    }
    if (!by_tag.empty())
        throw InconsistentInputError("selected tag '" + by_tag.begin()->first + "' is missing from the clusters");
    return model;
}

std::string url_encode(std::string_view s) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xf]);
        }
    }
    return out;
}

std::string html_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        case '\'':
            out += "&#39;";
            break;
        default:
            out.push_back(c);
        }
    }
    return out;
}

std::string emit_html(const CloudModel& model, const HtmlOptions& options) {
    const int b = std::max(options.buckets, 1);
    const auto& meta = model.metadata;
    std::string out;
    out += "<!DOCTYPE html>\n";
    out += "<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Tag cloud</title>\n<style>\n";
    out += ".cloud { font-family: sans-serif; line-height: 1.6; }\n";
    out += ".cloud-row { margin: 0.25em 0; }\n";
    out += ".cloud a { margin: 0 0.3em; text-decoration: none; }\n";
    // Linear font scale from 80% to 240%.
    for (int i = 1; i <= b; ++i) {
        int pct = b == 1 ? 100 : 80 + (i - 1) * 160 / (b - 1);
        out += ".size-" + std::to_string(i) + " { font-size: " + std::to_string(pct) + "%; }\n";
    }
    out += "</style>\n</head>\n<body>\n";
    out += "<div class=\"cloud\" data-mode=\"" + std::string(mode_id(model.mode)) + "\" data-method=\"" +
           html_escape(meta.method) + "\" data-n=\"" + std::to_string(meta.n) + "\" data-k=\"" +
           std::to_string(meta.k) + "\" data-seed=\"" + std::to_string(meta.seed) + "\" data-corpus-digest=\"" +
           html_escape(meta.corpus_digest) + "\">\n";
    for (std::size_t r = 0; r < model.rows.size(); ++r) {
        if (options.separators && r > 0)
            out += "<hr class=\"cluster-separator\">\n";
        out += "<div class=\"cloud-row\">\n";
        for (const auto& t : model.rows[r]) {
            out += "<a class=\"size-" + std::to_string(t.bucket) + "\" href=\"/tags/" + url_encode(t.tag) + "\">" +
                   html_escape(t.tag) + "</a>\n";
        }
        out += "</div>\n";
    }
    out += "</div>\n</body>\n</html>\n";
    return out;
}

std::string emit_document(const CloudModel& model) {
    nlohmann::ordered_json doc;
    doc["mode"] = std::string(mode_id(model.mode));
    doc["method"] = model.metadata.method;
    doc["n"] = model.metadata.n;
    doc["k"] = model.metadata.k;
    doc["seed"] = model.metadata.seed;
    doc["corpus_digest"] = model.metadata.corpus_digest;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : model.rows) {
        auto jr = nlohmann::ordered_json::array();
        for (const auto& t : row) {
            nlohmann::ordered_json jt;
            jt["tag"] = t.tag;
            jt["weight"] = t.weight;
            jt["bucket"] = t.bucket;
            jr.push_back(std::move(jt));
        }
        rows.push_back(std::move(jr));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

CloudModel parse_document(std::string_view text) {
    try {
        auto doc = nlohmann::json::parse(text);
        CloudModel m;
        m.mode = parse_mode(doc.at("mode").get<std::string>());
        m.metadata.method = doc.at("method").get<std::string>();
        m.metadata.n = doc.at("n").get<std::size_t>();
        m.metadata.k = doc.at("k").get<std::size_t>();
        m.metadata.seed = doc.at("seed").get<std::uint64_t>();
        m.metadata.corpus_digest = doc.at("corpus_digest").get<std::string>();
        for (const auto& jr : doc.at("rows")) {
            auto& row = m.rows.emplace_back();
            for (const auto& jt : jr)
                row.push_back({jt.at("tag").get<std::string>(), jt.at("weight").get<double>(), jt.at("bucket").get<int>()});
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("invalid cloud document: ") + e.what());
    } catch (const InvalidArgumentError& e) {
        throw ParseError(1, std::string("invalid cloud document: ") + e.what());
    }
}

} // namespace tagcloud
