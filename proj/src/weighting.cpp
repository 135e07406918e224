#include "tagcloud/weighting.hpp"

#include "tagcloud/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace tagcloud {

std::string_view method_id(SelectionMethod method) noexcept {
    switch (method) {
    case SelectionMethod::Frequency:
        return "a";
    case SelectionMethod::SumWeight:
        return "b";
    case SelectionMethod::LogOverM:
        return "c";
    case SelectionMethod::LogOverMSquared:
        return "d";
    }
    return "?";
}

SelectionMethod parse_method(std::string_view id) {
    for (auto m : kAllMethods)
        if (method_id(m) == id)
            return m;
    throw InvalidArgumentError("method must be one of a, b, c, d (got '" + std::string(id) + "')", "method");
}

double score(const Corpus& corpus, TagId tag, SelectionMethod method, ScoringOptions options) {
    if (tag >= corpus.tag_count())
        throw NotFoundError("tag id out of range");
    auto resources = corpus.postings(tag);
    auto weights = corpus.posting_weights(tag);
    double total = 0.0;
    switch (method) {
    case SelectionMethod::Frequency:
        return static_cast<double>(resources.size());
    case SelectionMethod::SumWeight:
        for (auto w : weights)
            total += static_cast<double>(w);
        return total;
    case SelectionMethod::LogOverM:
    case SelectionMethod::LogOverMSquared:
        for (std::size_t k = 0; k < resources.size(); ++k) {
            const double d = static_cast<double>(weights[k]);
            const double numerator = options.log_smoothing ? std::log1p(d) : std::log(d);
            const double m = static_cast<double>(corpus.resource_tag_count(resources[k]));
            total += method == SelectionMethod::LogOverM ? numerator / m : numerator / (m * m);
        }
        return total;
    }
    return total;
}

double score(const Corpus& corpus, std::string_view tag, SelectionMethod method, ScoringOptions options) {
    return score(corpus, corpus.tag_id(tag), method, options);
}

std::vector<std::string> SelectionResult::tags() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& e : entries)
        out.push_back(e.tag);
    return out;
}

SelectionResult select_top_n(const Corpus& corpus, SelectionMethod method, std::size_t n, ScoringOptions options,
                             std::span<const std::string> excluded) {
    if (n == 0)
        throw InvalidArgumentError("n must be >= 1", "n");
    std::unordered_set<std::string_view> skip(excluded.begin(), excluded.end());

    SelectionResult result;
    result.method = method;
    result.n_requested = n;
    std::vector<SelectionEntry> all;
    for (TagId t = 0; t < corpus.tag_count(); ++t) {
        const auto& name = corpus.tag_name(t);
        if (skip.contains(name))
            continue;
        auto s = score(corpus, t, method, options);
        if (s > 0.0)
            all.push_back({name, s});
    }
    auto better = [](const SelectionEntry& x, const SelectionEntry& y) {
        if (x.score != y.score)
            return x.score > y.score;
        return x.tag < y.tag;
    };
    auto keep = std::min(n, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), better);
    all.resize(keep);
    result.entries = std::move(all);
    return result;
}

Coverage coverage(const Corpus& corpus, std::span<const std::string> tags) {
    if (tags.empty())
        throw InvalidArgumentError("tag set is empty", "tags");
    std::vector<bool> covered(corpus.resource_count(), false);
    Coverage c;
    for (const auto& tag : tags) {
        for (auto r : corpus.postings(corpus.tag_id(tag))) {
            if (!covered[r]) {
                covered[r] = true;
                ++c.count;
            }
        }
    }
    c.fraction = corpus.resource_count() ? static_cast<double>(c.count) / static_cast<double>(corpus.resource_count())
                                         : 0.0;
    return c;
}

OverlapStats overlap_stats(const SimilarityMatrix& matrix, std::span<const std::string> tags) {
    if (tags.size() < 2)
        throw InvalidArgumentError("overlap needs at least two tags", "tags");
    std::vector<std::size_t> idx;
    for (const auto& t : tags) {
        auto i = matrix.index_of(t);
        if (!i)
            throw NotFoundError("tag '" + t + "' is not in the similarity matrix");
        idx.push_back(*i);
    }
    std::vector<double> values;
    values.reserve(idx.size() * (idx.size() - 1) / 2);
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            values.push_back(matrix.value(idx[a], idx[b]));
    double sum = 0.0;
    for (auto v : values)
        sum += v;
    OverlapStats s;
    s.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (auto v : values)
        sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size()));
    return s;
}

std::vector<MethodReport> compare_methods(const Corpus& corpus, std::size_t n, ScoringOptions options) {
    std::vector<MethodReport> out;
    for (auto method : kAllMethods) {
        MethodReport row;
        row.method = method;
        auto tags = select_top_n(corpus, method, n, options).tags();
        row.selected = tags.size();
        if (!tags.empty())
            row.coverage = coverage(corpus, tags);
        if (tags.size() >= 2)
            row.overlap = overlap_stats(build_matrix(corpus, tags), tags);
        out.push_back(row);
    }
    return out;
}

} // namespace tagcloud
