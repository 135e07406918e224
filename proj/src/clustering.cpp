#include "tagcloud/clustering.hpp"

#include "tagcloud/errors.hpp"
#include "tagcloud/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace tagcloud {

namespace {

using SparseRow = std::vector<SimilarityMatrix::Entry>;

std::vector<SparseRow> unit_rows(const ProfileVectors& p) {
    std::vector<SparseRow> out = p.rows;
    for (auto& row : out) {
        double s = 0.0;
        for (const auto& e : row)
            s += e.value * e.value;
        if (s > 0.0) {
            const double inv = 1.0 / std::sqrt(s);
            for (auto& e : row)
                e.value *= inv;
        }
    }
    return out;
}

double dot(const SparseRow& row, const std::vector<double>& dense) {
    double s = 0.0;
    for (const auto& e : row)
        s += e.value * dense[e.column];
    return s;
}

// Normalized mean of the member rows; all zeros when the mean vanishes.
std::vector<double> centroid(const std::vector<SparseRow>& rows, std::span<const std::size_t> members,
                             std::size_t dim) {
    std::vector<double> c(dim, 0.0);
    for (auto m : members)
        for (const auto& e : rows[m])
            c[e.column] += e.value;
    double s = 0.0;
    for (auto v : c)
        s += v * v;
    if (s > 0.0) {
        const double inv = 1.0 / std::sqrt(s);
        for (auto& v : c)
            v *= inv;
    }
    return c;
}

double cohesion(const std::vector<SparseRow>& rows, std::span<const std::size_t> members, std::size_t dim) {
    auto c = centroid(rows, members, dim);
    double s = 0.0;
    for (auto m : members)
        s += dot(rows[m], c);
    return s / static_cast<double>(members.size());
}

struct Bisection {
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
    double score = -1.0;
};

class Bisector {
  public:
    Bisector(const ProfileVectors& profiles, const ClusteringOptions& options)
        : tags_(profiles.tags), rows_(unit_rows(profiles)), options_(options) {
        for (const auto& row : rows_)
            for (const auto& e : row)
                dim_ = std::max(dim_, e.column + 1);
    }

    const std::vector<SparseRow>& rows() const { return rows_; }
    std::size_t dim() const { return dim_; }

    Bisection split(const std::vector<std::size_t>& members, std::size_t split_index) const {
        Bisection best;
        for (std::size_t trial = 0; trial < options_.trials; ++trial) {
            auto candidate = two_means(members, split_index, trial);
            if (candidate && candidate->score > best.score)
                best = std::move(*candidate);
        }
        if (best.first.empty())
            best = split_off_farthest(members);
        return best;
    }

  private:
    std::optional<Bisection> two_means(const std::vector<std::size_t>& members, std::size_t split_index,
                                       std::size_t trial) const {
        Rng rng{options_.seed, split_index, trial};
        const auto n = members.size();
        auto a = members[rng.index(n)];
        auto b_pos = rng.index(n - 1);
        auto b = members[b_pos];
        if (b == a)
            b = members[n - 1];
        // Ties in assignment fall to the half seeded by the smaller tag.
        if (tags_[b] < tags_[a])
            std::swap(a, b);

        std::vector<std::vector<double>> centroids(2, std::vector<double>(dim_, 0.0));
        for (const auto& e : rows_[a])
            centroids[0][e.column] = e.value;
        for (const auto& e : rows_[b])
            centroids[1][e.column] = e.value;

        std::vector<int> side(n, -1);
        std::vector<std::size_t> halves[2];
        for (std::size_t iter = 0; iter < options_.max_iterations; ++iter) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& row = rows_[members[i]];
                int s = dot(row, centroids[1]) > dot(row, centroids[0]) ? 1 : 0;
                if (s != side[i]) {
                    side[i] = s;
                    changed = true;
                }
            }
            halves[0].clear();
            halves[1].clear();
            for (std::size_t i = 0; i < n; ++i)
                halves[side[i]].push_back(members[i]);
            if (halves[0].empty() || halves[1].empty())
                return std::nullopt;
            if (!changed)
                break;
            centroids[0] = centroid(rows_, halves[0], dim_);
            centroids[1] = centroid(rows_, halves[1], dim_);
        }

        double total = 0.0;
        for (int h = 0; h < 2; ++h) {
            auto c = centroid(rows_, halves[h], dim_);
            for (auto m : halves[h])
                total += dot(rows_[m], c);
        }
        return Bisection{std::move(halves[0]), std::move(halves[1]), total / static_cast<double>(n)};
    }

    Bisection split_off_farthest(const std::vector<std::size_t>& members) const {
        auto c = centroid(rows_, members, dim_);
        std::size_t far = members.front();
        double far_sim = dot(rows_[far], c);
        for (auto m : members) {
            double s = dot(rows_[m], c);
            if (s < far_sim || (s == far_sim && tags_[m] < tags_[far])) {
                far = m;
                far_sim = s;
            }
        }
        Bisection out;
        for (auto m : members)
            if (m != far)
                out.first.push_back(m);
        out.second.push_back(far);
        return out;
    }

    const std::vector<std::string>& tags_;
    std::vector<SparseRow> rows_;
    ClusteringOptions options_;
    std::size_t dim_ = 0;
};

const std::string& smallest_tag(std::span<const std::size_t> members, std::span<const std::string> tags) {
    const std::string* best = &tags[members.front()];
    for (auto m : members)
        if (tags[m] < *best)
            best = &tags[m];
    return *best;
}

// Greedy seriation over n items: start at `start` or the item with the
// highest total similarity, then always append the unvisited item most
// similar to the last one. `before(i, j)` breaks ties.
std::vector<std::size_t> greedy_chain(std::size_t n, const std::function<double(std::size_t, std::size_t)>& sim,
                                      const std::function<bool(std::size_t, std::size_t)>& before,
                                      std::optional<std::size_t> start) {
    if (n == 0)
        return {};
    // Each direction is evaluated on its own so that s[a][b] is exactly
    // sim(a, b) as defined, with no floating-point reordering.
    std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                s[i][j] = sim(i, j);

    auto pick = [&](const std::vector<std::size_t>& candidates, const std::function<double(std::size_t)>& key) {
        std::size_t best = candidates.front();
        for (auto c : candidates) {
            if (key(c) > key(best) || (key(c) == key(best) && before(c, best)))
                best = c;
        }
        return best;
    };

    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i)
        remaining[i] = i;

    std::size_t first;
    if (start) {
        first = *start;
    } else {
        std::vector<double> total(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    total[i] += s[i][j];
        first = pick(remaining, [&](std::size_t i) { return total[i]; });
    }

    std::vector<std::size_t> order{first};
    remaining.erase(std::find(remaining.begin(), remaining.end(), first));
    while (!remaining.empty()) {
        auto last = order.back();
        auto next = pick(remaining, [&](std::size_t i) { return s[last][i]; });
        order.push_back(next);
        remaining.erase(std::find(remaining.begin(), remaining.end(), next));
    }
    return order;
}

} // namespace

ClusterSet bisecting_kmeans(const ProfileVectors& profiles, const ClusteringOptions& options) {
    if (options.k == 0)
        throw InvalidArgumentError("k must be >= 1", "k");
    if (options.trials == 0)
        throw InvalidArgumentError("trials must be >= 1", "trials");
    if (profiles.rows.size() != profiles.tags.size())
        throw InconsistentInputError("profile rows and tags differ in length");

    ClusterSet out;
    out.k_requested = options.k;
    out.seed = options.seed;
    const auto n = profiles.tags.size();
    if (n == 0)
        return out;

    Bisector bisector(profiles, options);
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i)
        all[i] = i;
    out.clusters.push_back(std::move(all));

    const auto target = std::min(options.k, n);
    std::size_t split_index = 0;
    while (out.clusters.size() < target) {
        std::optional<std::size_t> chosen;
        double chosen_cohesion = 0.0;
        for (std::size_t c = 0; c < out.clusters.size(); ++c) {
            const auto& members = out.clusters[c];
            if (members.size() < 2)
                continue;
            if (!chosen) {
                chosen = c;
                if (options.split == SplitCriterion::LowestCohesion)
                    chosen_cohesion = cohesion(bisector.rows(), members, bisector.dim());
                continue;
            }
            const auto& current = out.clusters[*chosen];
            const bool smaller_tag = smallest_tag(members, profiles.tags) < smallest_tag(current, profiles.tags);
            if (options.split == SplitCriterion::Largest) {
                if (members.size() > current.size() || (members.size() == current.size() && smaller_tag))
                    chosen = c;
            } else {
                double h = cohesion(bisector.rows(), members, bisector.dim());
                if (h < chosen_cohesion || (h == chosen_cohesion && smaller_tag)) {
                    chosen = c;
                    chosen_cohesion = h;
                }
            }
        }
        if (!chosen)
            break;
        auto halves = bisector.split(out.clusters[*chosen], split_index++);
        out.clusters[*chosen] = std::move(halves.first);
        out.clusters.insert(out.clusters.begin() + static_cast<std::ptrdiff_t>(*chosen) + 1, std::move(halves.second));
    }
    return out;
}

ClusterSet bisecting_kmeans(const SimilarityMatrix& matrix, const ClusteringOptions& options) {
    return bisecting_kmeans(profile_vectors(matrix), options);
}

double cluster_similarity(const SimilarityMatrix& matrix, std::span<const std::size_t> a,
                          std::span<const std::size_t> b) {
    if (a.empty() || b.empty())
        throw InvalidArgumentError("clusters must be non-empty");
    double s = 0.0;
    for (auto i : a)
        for (auto j : b)
            s += matrix.value(i, j);
    return s / static_cast<double>(a.size() * b.size());
}

ClusterSet order_clusters(const SimilarityMatrix& matrix, ClusterSet clusters, std::optional<std::size_t> start) {
    const auto n = clusters.clusters.size();
    if (start && *start >= n)
        throw InvalidArgumentError("start cluster out of range");
    for (const auto& c : clusters.clusters)
        if (c.empty())
            throw InvalidArgumentError("clusters must be non-empty");
    std::vector<std::string> keys;
    for (const auto& c : clusters.clusters)
        keys.push_back(smallest_tag(c, matrix.tags()));
    auto order = greedy_chain(
        n, [&](std::size_t i, std::size_t j) { return cluster_similarity(matrix, clusters.clusters[i], clusters.clusters[j]); },
        [&](std::size_t i, std::size_t j) { return keys[i] < keys[j]; }, start);
    std::vector<std::vector<std::size_t>> reordered;
    for (auto i : order)
        reordered.push_back(std::move(clusters.clusters[i]));
    clusters.clusters = std::move(reordered);
    return clusters;
}

std::vector<std::size_t> order_tags_within(const SimilarityMatrix& matrix, std::span<const std::size_t> cluster,
                                           std::optional<std::size_t> start) {
    if (cluster.empty())
        throw InvalidArgumentError("cluster must be non-empty");
    std::optional<std::size_t> local_start;
    if (start) {
        auto it = std::find(cluster.begin(), cluster.end(), *start);
        if (it == cluster.end())
            throw InvalidArgumentError("start tag is not a cluster member");
        local_start = static_cast<std::size_t>(it - cluster.begin());
    }
    auto order = greedy_chain(
        cluster.size(), [&](std::size_t i, std::size_t j) { return matrix.value(cluster[i], cluster[j]); },
        [&](std::size_t i, std::size_t j) { return matrix.tag(cluster[i]) < matrix.tag(cluster[j]); }, local_start);
    std::vector<std::size_t> out;
    for (auto i : order)
        out.push_back(cluster[i]);
    return out;
}

ClusterSet seriate(const SimilarityMatrix& matrix, ClusterSet clusters) {
    clusters = order_clusters(matrix, std::move(clusters));
    for (auto& c : clusters.clusters)
        c = order_tags_within(matrix, c);
    return clusters;
}

std::vector<std::vector<std::string>> cluster_tags(const ClusterSet& clusters, std::span<const std::string> tags) {
    std::vector<std::vector<std::string>> out;
    for (const auto& c : clusters.clusters) {
        auto& row = out.emplace_back();
        for (auto i : c)
            row.push_back(tags[i]);
    }
    return out;
}

ClusterQuality cluster_quality(const SimilarityMatrix& matrix, const ClusterSet& clusters) {
    std::vector<std::size_t> owner(matrix.size(), 0);
    for (std::size_t c = 0; c < clusters.clusters.size(); ++c)
        for (auto i : clusters.clusters[c])
            owner[i] = c;
    double intra = 0.0, inter = 0.0;
    std::size_t n_intra = 0, n_inter = 0;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        for (std::size_t j = i + 1; j < matrix.size(); ++j) {
            auto v = matrix.value(i, j);
            if (owner[i] == owner[j]) {
                intra += v;
                ++n_intra;
            } else {
                inter += v;
                ++n_inter;
            }
        }
    }
    ClusterQuality q;
    q.intra_mean = n_intra ? intra / static_cast<double>(n_intra) : 0.0;
    q.inter_mean = n_inter ? inter / static_cast<double>(n_inter) : 0.0;
    return q;
}

} // namespace tagcloud
