// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when
// any criterion fails. Runtime limits are enforced where one is stated.

#include "support/html_check.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

#include "tagcloud/clustering.hpp"
#include "tagcloud/corpus.hpp"
#include "tagcloud/layout.hpp"
#include "tagcloud/pipeline.hpp"
#include "tagcloud/service.hpp"
#include "tagcloud/similarity.hpp"
#include "tagcloud/synthetic.hpp"
#include "tagcloud/weighting.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace tagcloud;

namespace {

const std::string kCli = TAGCLOUD_CLI;
const std::filesystem::path kGolden = TAGCLOUD_GOLDEN_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
};

void fail(Outcome& o, const std::string& why) {
    if (o.pass)
        o.detail = why;
    o.pass = false;
}

bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

Outcome jaccard_oracle() {
    Outcome o;
    std::size_t cells = 0;
    for (std::uint64_t seed = 0; seed < 100 && o.pass; ++seed) {
        auto recs = oracle::random_records(1000 + seed, 50, 200);
        auto c = build_corpus(recs);
        auto post = oracle::postings(recs);
        std::vector<std::string> tags(c.tag_names().begin(), c.tag_names().end());
        auto m = build_matrix(c, tags);
        for (std::size_t i = 0; i < tags.size(); ++i) {
            for (std::size_t j = 0; j < tags.size(); ++j, ++cells) {
                const double want = i == j ? 1.0 : oracle::jaccard(post[tags[i]], post[tags[j]]);
                if (!same_bits(m.value(i, j), want)) {
                    fail(o, "seed " + std::to_string(seed) + " cell (" + tags[i] + ", " + tags[j] + ")");
                    break;
                }
            }
        }
    }
    if (o.pass)
        o.detail = std::to_string(cells) + " cells over 100 corpora";
    return o;
}

Outcome score_oracle() {
    Outcome o;
    std::mt19937_64 gen(2024);
    double worst = 0.0;
    for (int i = 0; i < 1000 && o.pass; ++i) {
        auto recs = oracle::random_records(5000 + static_cast<std::uint64_t>(i) / 10, 30, 60);
        const auto& tag = recs[gen() % recs.size()].tag;
        const double want = oracle::score_log(recs, tag, true);
        const double got = score(build_corpus(recs), tag, SelectionMethod::LogOverMSquared);
        const double rel = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
        worst = std::max(worst, rel);
        if (rel > 1e-12)
            fail(o, "case " + std::to_string(i) + " tag " + tag + ": " + std::to_string(got) + " vs " +
                        std::to_string(want));
    }
    if (o.pass) {
        std::ostringstream s;
        s << "1000 cases, max relative error " << worst;
        o.detail = s.str();
    }
    return o;
}

Outcome overlap_direction() {
    Outcome o;
    std::string summary;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto c = generate_synthetic(standard_fixture(seed));
        auto a = select_top_n(c, SelectionMethod::Frequency, 20).tags();
        auto d = select_top_n(c, SelectionMethod::LogOverMSquared, 20).tags();
        std::vector<std::string> both = a;
        for (const auto& t : d)
            if (std::find(both.begin(), both.end(), t) == both.end())
                both.push_back(t);
        auto m = build_matrix(c, both);
        const double oa = overlap_stats(m, a).mean, od = overlap_stats(m, d).mean;
        const double ca = coverage(c, a).fraction, cd = coverage(c, d).fraction;
        summary += " s" + std::to_string(seed) + ":" + fmt(od) + "<" + fmt(oa);
        if (!(od < oa))
            fail(o, "seed " + std::to_string(seed) + " overlap d " + fmt(od) + " >= a " + fmt(oa));
        if (!(cd >= ca - 0.05))
            fail(o, "seed " + std::to_string(seed) + " coverage d " + fmt(cd) + " < a " + fmt(ca) + " - 5pp");
    }
    if (o.pass)
        o.detail = "overlap d<a" + summary;
    return o;
}

Outcome monotonicity() {
    Outcome o;
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 100 && o.pass; ++seed) {
        auto c = build_corpus(oracle::random_records(9000 + seed));
        for (TagId t = 0; t < c.tag_count(); ++t, ++checked) {
            const double sc = score(c, t, SelectionMethod::LogOverM);
            const double sd = score(c, t, SelectionMethod::LogOverMSquared);
            if (!(sd <= sc)) {
                fail(o, "seed " + std::to_string(seed) + " tag " + c.tag_name(t));
                break;
            }
        }
    }
    if (o.pass)
        o.detail = std::to_string(checked) + " tags over 100 corpora";
    return o;
}

Outcome planted_partition() {
    Outcome o;
    int runs = 0;
    for (std::size_t topics : {2, 3, 5}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed, ++runs) {
            auto gen = generate_synthetic_records(block_fixture(topics, seed));
            auto c = build_corpus(gen.records);
            std::vector<std::string> tags(c.tag_names().begin(), c.tag_names().end());
            auto m = build_matrix(c, tags);
            auto cs = bisecting_kmeans(m, {.k = topics, .seed = seed});
            std::set<std::set<std::string>> got, planted;
            for (const auto& row : cluster_tags(cs, m.tags()))
                got.insert({row.begin(), row.end()});
            for (const auto& t : gen.topic_tags)
                planted.insert({t.begin(), t.end()});
            if (got != planted)
                fail(o, "topics " + std::to_string(topics) + " seed " + std::to_string(seed));
        }
    }
    if (o.pass)
        o.detail = std::to_string(runs) + " runs recovered exactly";
    return o;
}

Outcome clustering_determinism() {
    Outcome o;
    auto dir = proc::scratch_dir("accept_det");
    auto data = dir / "fixture.jsonl";
    auto gen = proc::run(proc::quote(kCli) + " gen --seed 3 --output " + proc::quote(data.string()));
    if (gen.exit_code != 0) {
        fail(o, "gen exited " + std::to_string(gen.exit_code));
        return o;
    }
    const auto cmd = proc::quote(kCli) + " cluster -i " + proc::quote(data.string()) + " --n 60 --k 9 --seed 17 --trials 10";
    auto first = proc::run(cmd);
    auto second = proc::run(cmd);
    if (first.exit_code != 0 || second.exit_code != 0)
        fail(o, "cluster exited nonzero");
    else if (first.out != second.out)
        fail(o, "outputs differ");
    else if (first.out.find("cluster 9 ") == std::string::npos)
        fail(o, "expected 9 clusters");
    else
        o.detail = std::to_string(first.out.size()) + " bytes identical across two processes";
    std::filesystem::remove_all(dir);
    return o;
}

Outcome seriation_oracle() {
    Outcome o;
    std::mt19937_64 gen(77);
    for (int round = 0; round < 50 && o.pass; ++round) {
        // half from real Jaccard matrices, half from coarse values that force ties
        SimilarityMatrix m;
        if (round % 2 == 0) {
            auto c = build_corpus(oracle::random_records(700 + static_cast<std::uint64_t>(round), 24, 40));
            std::vector<std::string> tags(c.tag_names().begin(), c.tag_names().end());
            m = build_matrix(c, tags);
        } else {
            const std::size_t n = 2 + gen() % 20;
            std::vector<std::string> tags;
            for (std::size_t i = 0; i < n; ++i)
                tags.push_back("t" + std::to_string(gen() % 1000) + "_" + std::to_string(i));
            std::vector<std::tuple<std::size_t, std::size_t, double>> pairs;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (gen() % 2)
                        pairs.emplace_back(i, j, static_cast<double>(gen() % 4) / 8.0);
            m = SimilarityMatrix::from_pairs(tags, pairs);
        }
        const std::size_t n = m.size();
        const std::size_t k = 1 + gen() % std::min<std::size_t>(8, n);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        ClusterSet cs;
        cs.clusters.resize(k);
        for (std::size_t i = 0; i < n; ++i)
            cs.clusters[i < k ? i : gen() % k].push_back(perm[i]);
        std::vector<std::vector<std::string>> named;
        for (const auto& cl : cs.clusters) {
            auto& row = named.emplace_back();
            for (auto i : cl)
                row.push_back(m.tag(i));
        }
        auto expected = oracle::greedy_cluster_order(
            named, [&](const std::string& x, const std::string& y) { return m.value(*m.index_of(x), *m.index_of(y)); });
        auto got = order_clusters(m, cs);
        for (std::size_t i = 0; i < expected.size(); ++i)
            if (got.clusters[i] != cs.clusters[expected[i]]) {
                fail(o, "round " + std::to_string(round) + " position " + std::to_string(i));
                break;
            }
    }
    if (o.pass)
        o.detail = "50 settings, up to 8 clusters";
    return o;
}

Outcome subcloud_contract() {
    Outcome o;
    auto corpus = generate_synthetic(standard_fixture(0));
    TagCloudService svc(corpus, CloudParams{});
    auto tags = svc.main_cloud().tags();
    std::size_t returned = 0;
    for (const auto& clicked : tags) {
        auto sub = svc.subcloud(clicked, svc.defaults());
        const auto id = corpus.tag_id(clicked);
        for (const auto& t : sub->tags()) {
            ++returned;
            if (t == clicked)
                fail(o, "sub-cloud of " + clicked + " contains it");
            else if (intersection_size(corpus, id, corpus.tag_id(t)) == 0)
                fail(o, "sub-cloud of " + clicked + " holds non-co-occurring " + t);
        }
    }
    if (o.pass)
        o.detail = std::to_string(tags.size()) + " clicked tags, " + std::to_string(returned) + " returned tags checked";
    return o;
}

struct Build {
    bool ok = false;
    std::string json, html, error;
};

Build cli_build(const std::filesystem::path& dir, const std::string& extra = {}) {
    Build b;
    auto data = dir / "standard.jsonl";
    if (!std::filesystem::exists(data)) {
        auto gen = proc::run(proc::quote(kCli) + " gen --seed 0 --output " + proc::quote(data.string()));
        if (gen.exit_code != 0) {
            b.error = "gen exited " + std::to_string(gen.exit_code);
            return b;
        }
    }
    auto out = dir / "artifact";
    auto r = proc::run(proc::quote(kCli) + " build --seed 0 -i " + proc::quote(data.string()) + " --output " +
                       proc::quote(out.string()) + extra + " 2>/dev/null");
    if (r.exit_code != 0) {
        b.error = "build exited " + std::to_string(r.exit_code);
        return b;
    }
    b.json = proc::read_file(out / "cloud.json");
    b.html = proc::read_file(out / "cloud.html");
    b.ok = true;
    return b;
}

Outcome golden_files() {
    Outcome o;
    auto first_dir = proc::scratch_dir("accept_golden_a");
    auto second_dir = proc::scratch_dir("accept_golden_b");
    auto a = cli_build(first_dir);
    auto b = cli_build(second_dir);
    if (!a.ok || !b.ok) {
        fail(o, a.ok ? b.error : a.error);
    } else if (a.json != b.json || a.html != b.html) {
        fail(o, "two builds differ");
    } else if (!std::filesystem::exists(kGolden / "cloud.json") || !std::filesystem::exists(kGolden / "cloud.html")) {
        fail(o, "golden files missing from " + kGolden.string());
    } else {
        if (a.json != proc::read_file(kGolden / "cloud.json"))
            fail(o, "cloud.json differs from golden");
        if (a.html != proc::read_file(kGolden / "cloud.html"))
            fail(o, "cloud.html differs from golden");
        if (o.pass)
            o.detail = "two builds byte-identical and equal to golden cloud.json/cloud.html";
    }
    std::filesystem::remove_all(first_dir);
    std::filesystem::remove_all(second_dir);
    return o;
}

Outcome html_validity() {
    Outcome o;
    auto dir = proc::scratch_dir("accept_html");
    std::string summary;
    // default N (saturates at the selectable tags) and an explicit N below that
    for (std::size_t n : {std::size_t{95}, std::size_t{40}}) {
        auto b = cli_build(dir, " --n " + std::to_string(n));
        if (!b.ok) {
            fail(o, b.error);
            break;
        }
        auto model = parse_document(b.json);
        auto doc = htmlcheck::parse(b.html);
        if (!doc.ok) {
            fail(o, "n=" + std::to_string(n) + ": " + doc.error);
            break;
        }
        auto corpus = generate_synthetic(standard_fixture(0));
        const auto selectable = select_top_n(corpus, SelectionMethod::LogOverMSquared, n).entries.size();
        const auto expected = std::min(n, selectable);
        auto anchors = htmlcheck::select(doc, "a");
        if (anchors.size() != expected || model.tag_count() != expected)
            fail(o, "n=" + std::to_string(n) + ": " + std::to_string(anchors.size()) + " anchors, expected " +
                        std::to_string(expected));
        for (const auto& a : anchors) {
            auto cls = a.attrs.count("class") ? a.attrs.at("class") : "";
            int bucket = 0;
            if (cls.rfind("size-", 0) == 0)
                bucket = std::atoi(cls.c_str() + 5);
            if (bucket < 1 || bucket > kDefaultBuckets)
                fail(o, "anchor '" + a.text + "' has class '" + cls + "'");
        }
        summary += " n=" + std::to_string(n) + ":" + std::to_string(anchors.size()) + " anchors";
    }
    if (o.pass)
        o.detail = "well formed," + summary + ", size classes in [1," + std::to_string(kDefaultBuckets) + "]";
    std::filesystem::remove_all(dir);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds; // 0 = none stated
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {1, "Jaccard oracle equivalence", 10, jaccard_oracle},
        {2, "method d scoring oracle", 5, score_oracle},
        {3, "method d vs a overlap and coverage", 30, overlap_direction},
        {4, "score_d <= score_c monotonicity", 0, monotonicity},
        {5, "planted partition recovery", 20, planted_partition},
        {6, "clustering determinism across processes", 0, clustering_determinism},
        {7, "greedy seriation oracle", 0, seriation_oracle},
        {8, "sub-cloud contract", 30, subcloud_contract},
        {9, "end-to-end determinism and golden files", 0, golden_files},
        {10, "HTML validity", 0, html_validity},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            fail(o, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && secs > c.limit_seconds)
            fail(o, "took " + fmt(secs) + " s, limit " + fmt(c.limit_seconds) + " s");
        failures += !o.pass;
        std::printf("%s %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
