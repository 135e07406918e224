#include "tagcloud/similarity.hpp"

#include "tagcloud/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tagcloud {

namespace {

std::vector<TagId> resolve_unique(const Corpus& corpus, std::span<const std::string> tags) {
    if (tags.empty())
        throw InvalidArgumentError("tag set is empty", "tags");
    std::vector<TagId> ids;
    ids.reserve(tags.size());
    for (const auto& t : tags)
        ids.push_back(corpus.tag_id(t));
    auto sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgumentError("tag set contains duplicates", "tags");
    return ids;
}

// For every resource, the positions (within `ids`) of the selected tags it carries.
std::vector<std::vector<std::uint32_t>> resource_index(const Corpus& corpus, const std::vector<TagId>& ids) {
    std::vector<std::vector<std::uint32_t>> index(corpus.resource_count());
    for (std::uint32_t i = 0; i < ids.size(); ++i)
        for (auto r : corpus.postings(ids[i]))
            index[r].push_back(i);
    return index;
}

// Visits every pair i < j of selected tags that share a resource, once.
template <typename Fn>
void for_each_candidate(const Corpus& corpus, const std::vector<TagId>& ids, Fn&& fn) {
    auto index = resource_index(corpus, ids);
    std::vector<std::size_t> mark(ids.size(), ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::vector<std::size_t> neighbours;
        for (auto r : corpus.postings(ids[i])) {
            for (auto j : index[r]) {
                if (j > i && mark[j] != i) {
                    mark[j] = i;
                    neighbours.push_back(j);
                }
            }
        }
        std::sort(neighbours.begin(), neighbours.end());
        for (auto j : neighbours)
            fn(i, j);
    }
}

double norm(std::span<const SimilarityMatrix::Entry> row) {
    double s = 0.0;
    for (const auto& e : row)
        s += e.value * e.value;
    return std::sqrt(s);
}

double dot(std::span<const SimilarityMatrix::Entry> a, std::span<const SimilarityMatrix::Entry> b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].column < b[j].column) {
            ++i;
        } else if (b[j].column < a[i].column) {
            ++j;
        } else {
            s += a[i].value * b[j].value;
            ++i;
            ++j;
        }
    }
    return s;
}

} // namespace

SimilarityMatrix SimilarityMatrix::from_pairs(std::vector<std::string> tags,
                                              std::span<const std::tuple<std::size_t, std::size_t, double>> pairs) {
    SimilarityMatrix m;
    m.rows_.resize(tags.size());
    m.tags_ = std::move(tags);
    for (const auto& [i, j, v] : pairs) {
        if (i >= m.size() || j >= m.size() || i == j)
            throw InvalidArgumentError("pair index out of range or on the diagonal");
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidArgumentError("similarity must lie in [0, 1]");
        if (v == 0.0)
            continue;
        m.rows_[i].push_back({j, v});
        m.rows_[j].push_back({i, v});
    }
    for (auto& row : m.rows_) {
        std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.column < b.column; });
        for (std::size_t k = 1; k < row.size(); ++k)
            if (row[k - 1].column == row[k].column)
                throw InvalidArgumentError("pair given twice");
    }
    return m;
}

std::optional<std::size_t> SimilarityMatrix::index_of(std::string_view tag) const {
    for (std::size_t i = 0; i < tags_.size(); ++i)
        if (tags_[i] == tag)
            return i;
    return std::nullopt;
}

double SimilarityMatrix::value(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size())
        throw InvalidArgumentError("similarity index out of range");
    if (i == j)
        return 1.0;
    const auto& r = rows_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.column < c; });
    return (it != r.end() && it->column == j) ? it->value : 0.0;
}

std::span<const SimilarityMatrix::Entry> SimilarityMatrix::row(std::size_t i) const {
    return rows_.at(i);
}

std::vector<double> SimilarityMatrix::dense_row(std::size_t i) const {
    std::vector<double> out(size(), 0.0);
    for (const auto& e : row(i))
        out[e.column] = e.value;
    out[i] = 1.0;
    return out;
}

std::size_t SimilarityMatrix::nonzero_pairs() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows_)
        n += r.size();
    return n / 2;
}

std::size_t intersection_size(const Corpus& corpus, TagId a, TagId b) {
    auto pa = corpus.postings(a), pb = corpus.postings(b);
    std::size_t n = 0, i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        if (pa[i] < pb[j]) {
            ++i;
        } else if (pb[j] < pa[i]) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

double jaccard(const Corpus& corpus, TagId a, TagId b) {
    if (a >= corpus.tag_count() || b >= corpus.tag_count())
        throw NotFoundError("tag id out of range");
    if (a == b)
        return corpus.tag_resource_count(a) > 0 ? 1.0 : 0.0;
    auto inter = intersection_size(corpus, a, b);
    auto uni = corpus.tag_resource_count(a) + corpus.tag_resource_count(b) - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard(const Corpus& corpus, std::string_view a, std::string_view b) {
    return jaccard(corpus, corpus.tag_id(a), corpus.tag_id(b));
}

SimilarityMatrix build_matrix(const Corpus& corpus, std::span<const std::string> tags, MatrixBuildStats* stats) {
    auto ids = resolve_unique(corpus, tags);
    std::vector<std::tuple<std::size_t, std::size_t, double>> pairs;
    MatrixBuildStats local;
    for_each_candidate(corpus, ids, [&](std::size_t i, std::size_t j) {
        ++local.candidate_pairs;
        ++local.intersections;
        auto inter = intersection_size(corpus, ids[i], ids[j]);
        auto uni = corpus.tag_resource_count(ids[i]) + corpus.tag_resource_count(ids[j]) - inter;
        pairs.emplace_back(i, j, static_cast<double>(inter) / static_cast<double>(uni));
    });
    if (stats)
        *stats = local;
    return SimilarityMatrix::from_pairs({tags.begin(), tags.end()}, pairs);
}

double cosine_rows(const SimilarityMatrix& m, std::size_t i, std::size_t j) {
    if (i >= m.size() || j >= m.size())
        throw InvalidArgumentError("row index out of range");
    auto with_diagonal = [&](std::size_t k) {
        std::vector<SimilarityMatrix::Entry> row(m.row(k).begin(), m.row(k).end());
        auto pos = std::lower_bound(row.begin(), row.end(), k,
                                    [](const SimilarityMatrix::Entry& e, std::size_t c) { return e.column < c; });
        row.insert(pos, {k, 1.0});
        return row;
    };
    auto a = with_diagonal(i), b = with_diagonal(j);
    auto na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return std::clamp(dot(a, b) / (na * nb), 0.0, 1.0);
}

std::vector<SynonymPair> synonym_pairs(const SimilarityMatrix& m, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw InvalidArgumentError("threshold must lie in (0, 1]", "threshold");
    std::vector<SynonymPair> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (const auto& e : m.row(i)) {
            if (e.column > i && e.value >= threshold) {
                auto a = m.tag(i), b = m.tag(e.column);
                if (b < a)
                    std::swap(a, b);
                out.push_back({std::move(a), std::move(b), e.value});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SynonymPair& x, const SynonymPair& y) {
        if (x.value != y.value)
            return x.value > y.value;
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    return out;
}

ProfileVectors profile_vectors(const SimilarityMatrix& m) {
    ProfileVectors p;
    p.tags.assign(m.tags().begin(), m.tags().end());
    p.rows.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto& row = p.rows[i];
        row.assign(m.row(i).begin(), m.row(i).end());
        auto pos = std::lower_bound(row.begin(), row.end(), i,
                                    [](const SimilarityMatrix::Entry& e, std::size_t c) { return e.column < c; });
        row.insert(pos, {i, 1.0});
    }
    return p;
}

ProfileVectors cooccurrence_profiles(const Corpus& corpus, std::span<const std::string> tags) {
    auto ids = resolve_unique(corpus, tags);
    ProfileVectors p;
    p.tags.assign(tags.begin(), tags.end());
    p.rows.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        p.rows[i].push_back({i, static_cast<double>(corpus.tag_resource_count(ids[i]))});
    for_each_candidate(corpus, ids, [&](std::size_t i, std::size_t j) {
        auto c = static_cast<double>(intersection_size(corpus, ids[i], ids[j]));
        p.rows[i].push_back({j, c});
        p.rows[j].push_back({i, c});
    });
    for (auto& row : p.rows)
        std::sort(row.begin(), row.end(),
                  [](const SimilarityMatrix::Entry& a, const SimilarityMatrix::Entry& b) { return a.column < b.column; });
    return p;
}

} // namespace tagcloud
