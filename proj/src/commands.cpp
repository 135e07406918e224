#include "tagcloud/commands.hpp"

#include "tagcloud/errors.hpp"
#include "tagcloud/pipeline.hpp"
#include "tagcloud/synthetic.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tagcloud {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width)
        s.append(width - s.size(), ' ');
    return s;
}

} // namespace

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

Corpus load_inputs(const RunConfig& config, IngestReport* report) {
    std::vector<std::filesystem::path> paths(config.input.begin(), config.input.end());
    if (paths.empty())
        throw InvalidArgumentError("no input file given (use --input)", "input");
    return load_corpora(paths, input_format(config), error_policy(config), report);
}

Artifact build_artifact(const Corpus& corpus, const RunConfig& config) {
    auto params = cloud_params(config);
    Artifact a;
    a.corpus_bytes = corpus.serialize();
    a.digest = corpus.digest();
    if (config.subcloud.empty()) {
        a.model = compute_cloud(corpus, params, a.digest);
    } else {
        auto sub = corpus.restrict_to_tag(corpus.tag_id(config.subcloud));
        const std::string excluded[] = {config.subcloud};
        a.model = compute_cloud(sub, params, a.digest, excluded);
    }
    a.cloud_json = emit_document(a.model);
    a.cloud_html = emit_html(a.model, {params.buckets, config.separators});
    return a;
}

void write_artifact(const Artifact& artifact, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_file(dir / "corpus.bin", artifact.corpus_bytes);
    write_file(dir / "cloud.json", artifact.cloud_json);
    write_file(dir / "cloud.html", artifact.cloud_html);
}

std::string stats_report(const Corpus& corpus, const RunConfig& config) {
    auto params = cloud_params(config);
    if (config.format != "text" && config.format != "csv")
        throw InvalidArgumentError("stats format must be text or csv", "format");
    auto rows = compare_methods(corpus, params.n, {params.log_smoothing});

    std::ostringstream out;
    const bool csv = config.format == "csv";
    std::size_t available = 0;
    for (const auto& r : rows)
        available = std::max(available, r.selected);
    if (available < params.n) {
        out << "# n=" << params.n << " exceeds the " << available
            << " tags with a positive score; rows cover every selectable tag\n";
    }
    if (csv) {
        out << "method,selected,coverage,coverage_pct,overlap_mean,overlap_stddev\n";
        for (const auto& r : rows) {
            out << method_id(r.method) << ',' << r.selected << ',' << r.coverage.count << ','
                << fmt("%.4f", 100.0 * r.coverage.fraction) << ',' << fmt("%.6f", r.overlap.mean) << ','
                << fmt("%.6f", r.overlap.stddev) << '\n';
        }
        return out.str();
    }
    out << "Selection method comparison over top " << params.n << " tags (" << corpus.resource_count()
        << " resources, " << corpus.tag_count() << " tags)\n";
    out << pad("method", 8) << pad("selected", 10) << pad("coverage", 20) << pad("overlap_mean", 14)
        << "overlap_stddev\n";
    for (const auto& r : rows) {
        auto cov = std::to_string(r.coverage.count) + " (" + fmt("%.2f", 100.0 * r.coverage.fraction) + "%)";
        out << pad(std::string(method_id(r.method)), 8) << pad(std::to_string(r.selected), 10) << pad(cov, 20)
            << pad(fmt("%.4f", r.overlap.mean), 14) << fmt("%.4f", r.overlap.stddev) << '\n';
    }
    return out.str();
}

std::string similarity_report(const Corpus& corpus, const RunConfig& config) {
    auto params = cloud_params(config);
    auto tags = select_top_n(corpus, params.method, params.n, {params.log_smoothing}).tags();
    std::ostringstream out;
    if (tags.empty())
        return "";
    auto m = build_matrix(corpus, tags);

    if (config.synonym_threshold > 0.0) {
        out << "tag_a,tag_b,value\n";
        for (const auto& p : synonym_pairs(m, config.synonym_threshold))
            out << csv_field(p.a) << ',' << csv_field(p.b) << ',' << fmt("%.10g", p.value) << '\n';
        return out.str();
    }

    std::string layout = config.format;
    if (layout == "text" || layout == "auto")
        layout = m.size() <= 1000 ? "dense" : "sparse";
    if (layout == "dense") {
        for (const auto& t : m.tags())
            out << ',' << csv_field(t);
        out << '\n';
        for (std::size_t i = 0; i < m.size(); ++i) {
            out << csv_field(m.tag(i));
            for (auto v : m.dense_row(i))
                out << ',' << fmt("%.10g", v);
            out << '\n';
        }
    } else if (layout == "sparse") {
        out << "tag_a,tag_b,value\n";
        for (std::size_t i = 0; i < m.size(); ++i)
            for (const auto& e : m.row(i))
                if (e.column > i)
                    out << csv_field(m.tag(i)) << ',' << csv_field(m.tag(e.column)) << ','
                        << fmt("%.10g", e.value) << '\n';
    } else {
        throw InvalidArgumentError("similarity format must be auto, dense or sparse", "format");
    }
    return out.str();
}

std::string cluster_report(const Corpus& corpus, const RunConfig& config) {
    auto params = cloud_params(config);
    params.mode = CloudMode::Clustered;
    auto build = run_pipeline(corpus, params, corpus.digest());
    std::ostringstream out;
    out << "# method=" << method_id(params.method) << " n=" << params.n << " k=" << params.k
        << " seed=" << params.seed << " trials=" << params.trials << " tags=" << build.selection.entries.size()
        << " clusters=" << build.clusters.size() << '\n';
    for (std::size_t c = 0; c < build.clusters.size(); ++c) {
        const auto& members = build.clusters.clusters[c];
        double intra = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b, ++pairs)
                intra += build.matrix.value(members[a], members[b]);
        out << "cluster " << c + 1 << " size=" << members.size()
            << " intra=" << fmt("%.4f", pairs ? intra / static_cast<double>(pairs) : 0.0);
        if (c + 1 < build.clusters.size())
            out << " next="
                << fmt("%.4f", cluster_similarity(build.matrix, members, build.clusters.clusters[c + 1]));
        out << ':';
        for (auto i : members)
            out << ' ' << build.matrix.tag(i);
        out << '\n';
    }
    if (!build.clusters.clusters.empty()) {
        auto q = cluster_quality(build.matrix, build.clusters);
        out << "# intra_mean=" << fmt("%.6f", q.intra_mean) << " inter_mean=" << fmt("%.6f", q.inter_mean) << '\n';
    }
    return out.str();
}

std::string synthetic_report(const RunConfig& config) {
    auto gen = generate_synthetic_records(synthetic_spec(config));
    std::string out;
    const bool tsv = config.format == "tsv";
    for (const auto& a : gen.records) {
        if (tsv) {
            out += a.user + '\t' + a.resource + '\t' + a.tag + '\n';
        } else {
            nlohmann::ordered_json j;
            j["user"] = a.user;
            j["resource"] = a.resource;
            j["tag"] = a.tag;
            out += j.dump() + '\n';
        }
    }
    return out;
}

} // namespace tagcloud
