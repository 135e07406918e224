#include "tagcloud/commands.hpp"
#include "tagcloud/errors.hpp"
#include "tagcloud/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace tagcloud;

namespace {

enum Group : unsigned {
    kInput = 1u << 0,
    kSelect = 1u << 1,
    kCluster = 1u << 2,
    kLayout = 1u << 3,
    kOutput = 1u << 4,
    kFormat = 1u << 5,
    kSimilarity = 1u << 6,
    kSubcloud = 1u << 7,
    kServe = 1u << 8,
    kGen = 1u << 9,
};

struct Command {
    CLI::App* app = nullptr;
    RunConfig config;
    std::string config_file;
    std::map<std::string, CLI::Option*> options; // config key -> option
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string flag_name(const std::string& key) {
    std::string out = "--";
    for (char c : key)
        out += c == '_' ? '-' : c;
    return out;
}

template <typename T>
void add(Command& cmd, const std::string& key, T& target, const std::string& help) {
    cmd.options[key] = cmd.app->add_option(flag_name(key), target, help);
}

void add_flag(Command& cmd, const std::string& key, bool& target, const std::string& help) {
    cmd.options[key] = cmd.app->add_flag(flag_name(key), target, help);
}

void register_options(Command& cmd, unsigned groups) {
    auto& c = cmd.config;
    cmd.app->add_option("--config", cmd.config_file, "JSON config file; command-line flags take precedence");
    if (groups & kInput) {
        cmd.options["input"] =
            cmd.app->add_option("-i,--input", c.input, "Record files (JSON lines or TSV) or one serialized corpus");
        add(cmd, "input_format", c.input_format, "Record format: auto (by extension), jsonl or tsv");
        add(cmd, "on_error", c.on_error, "Malformed records: abort or skip");
    }
    if (groups & kSelect) {
        add(cmd, "method", c.method, "Selection method: a, b, c or d");
        add(cmd, "n", c.n, "Number of tags to select");
        add_flag(cmd, "log_smoothing", c.log_smoothing, "Use ln(1 + d) instead of ln(d) [off]");
    }
    if (groups & kCluster) {
        add(cmd, "k", c.k, "Number of clusters");
        add(cmd, "seed", c.seed, "Random seed");
        add(cmd, "trials", c.trials, "Random restarts per bisection");
        add(cmd, "cluster_space", c.cluster_space, "Clustering vectors: jaccard or counts");
        add(cmd, "split", c.split, "Cluster to bisect next: largest or cohesion");
    }
    if (groups & kLayout) {
        add(cmd, "mode", c.mode, "Cloud layout: clustered or alphabetical");
        add(cmd, "buckets", c.buckets, "Number of font-size classes");
        add_flag(cmd, "separators", c.separators, "Emit a separator between cluster rows in HTML [off]");
    }
    if (groups & kOutput)
        add(cmd, "output", c.output, "Output path (artifact directory for build, otherwise a file; empty means stdout)");
    if (groups & kFormat)
        add(cmd, "format", c.format, "Output format");
    if (groups & kSimilarity)
        add(cmd, "synonym_threshold", c.synonym_threshold, "List only pairs with Jaccard >= threshold (0 = off)");
    if (groups & kSubcloud)
        add(cmd, "subcloud", c.subcloud, "Export the sub-cloud of this tag instead of the main cloud (empty means main cloud)");
    if (groups & kServe) {
        add(cmd, "bind", c.bind, "Bind address");
        add(cmd, "port", c.port, "Port (0 picks a free one)");
        add(cmd, "ui_dir", c.ui_dir, "Directory served under /ui/ (empty disables it)");
        add(cmd, "cache_capacity", c.cache_capacity, "Cached clouds kept in memory");
    }
    if (groups & kGen) {
        add(cmd, "fixture", c.fixture, "Fixture: standard, block or custom");
        add(cmd, "topics", c.topics, "Topics (block and custom)");
        add(cmd, "tags_per_topic", c.tags_per_topic, "Tags per topic (custom)");
        add(cmd, "resources_per_topic", c.resources_per_topic, "Resources per topic (custom)");
        add(cmd, "noise", c.noise, "Cross-topic tagging probability (custom)");
        add(cmd, "dominant_tags", c.dominant_tags, "Tags in the dominant topic (custom, 0 = none)");
        add(cmd, "dominant_resources", c.dominant_resources, "Resources in the dominant topic (custom)");
    }
}

/// Applies the config file underneath the flags given on the command line.
void resolve(Command& cmd) {
    if (cmd.config_file.empty())
        return;
    std::ifstream in(cmd.config_file, std::ios::binary);
    if (!in)
        throw UsageError("cannot open config file '" + cmd.config_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::set<std::string> keep;
    for (const auto& [key, opt] : cmd.options)
        if (opt->count() > 0)
            keep.insert(key);
    apply_config_json(cmd.config, ss.str(), keep);
}

void emit(const RunConfig& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(c.output, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + c.output + "'");
    out << text;
    if (!out)
        throw Error("failed writing '" + c.output + "'");
}

Corpus load(const RunConfig& c) {
    if (c.input.empty())
        throw UsageError("no input file given (use --input)");
    for (const auto& p : c.input) {
        std::error_code ec;
        if (!std::filesystem::is_regular_file(p, ec))
            throw UsageError("input file not found: '" + p + "'");
    }
    IngestReport report;
    auto corpus = load_inputs(c, &report);
    if (report.skipped > 0) {
        std::cerr << "skipped " << report.skipped << " malformed record(s) of " << report.lines << " line(s)\n";
        for (const auto& d : report.diagnostics)
            std::cerr << "  " << d << '\n';
    }
    return corpus;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server)
        g_server->stop();
}

int serve(const RunConfig& c) {
    auto corpus = load(c);
    TagCloudService service(std::move(corpus), cloud_params(c), c.cache_capacity);
    ServerOptions opts;
    opts.bind = c.bind;
    opts.port = c.port;
    if (!c.ui_dir.empty())
        opts.ui_dir = c.ui_dir;
    HttpServer server(service, opts);
    int port = server.bind();
    std::cerr << "serving " << service.corpus().tag_count() << " tags on http://" << c.bind << ':' << port << '\n';
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.serve();
    g_server = nullptr;
    return 0;
}

int run(const std::string& name, const RunConfig& c) {
    if (name == "build") {
        auto corpus = load(c);
        auto artifact = build_artifact(corpus, c);
        std::filesystem::path dir = c.output.empty() ? "artifact" : c.output;
        write_artifact(artifact, dir);
        std::cerr << "wrote " << (dir / "corpus.bin").string() << ", cloud.json, cloud.html ("
                  << corpus.resource_count() << " resources, " << corpus.tag_count() << " tags, "
                  << artifact.model.tag_count() << " in cloud)\n";
        return 0;
    }
    if (name == "stats") {
        emit(c, stats_report(load(c), c));
        return 0;
    }
    if (name == "similarity") {
        emit(c, similarity_report(load(c), c));
        return 0;
    }
    if (name == "cluster") {
        emit(c, cluster_report(load(c), c));
        return 0;
    }
    if (name == "export") {
        if (c.format != "html" && c.format != "json")
            throw InvalidArgumentError("export format must be html or json", "format");
        auto artifact = build_artifact(load(c), c);
        emit(c, c.format == "html" ? artifact.cloud_html : artifact.cloud_json);
        return 0;
    }
    if (name == "gen") {
        if (c.format != "jsonl" && c.format != "tsv")
            throw InvalidArgumentError("gen format must be jsonl or tsv", "format");
        emit(c, synthetic_report(c));
        return 0;
    }
    if (name == "serve")
        return serve(c);
    if (name == "print-config") {
        cloud_params(c);
        std::cout << config_to_json(c);
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Folksonomy tag-cloud engine: selection, similarity, clustering and layout"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    const unsigned pipeline = kInput | kSelect | kCluster | kLayout;
    struct Spec {
        const char* name;
        const char* help;
        unsigned groups;
        const char* format;
    };
    const Spec specs[] = {
        {"build", "Ingest records and write corpus.bin, cloud.json and cloud.html", pipeline | kOutput, nullptr},
        {"stats", "Compare selection methods a-d by coverage and overlap", kInput | kSelect | kOutput | kFormat,
         "text"},
        {"similarity", "Export the Jaccard matrix of the selected tags as CSV",
         kInput | kSelect | kOutput | kFormat | kSimilarity, "auto"},
        {"cluster", "Print clusters in display order with similarity diagnostics",
         kInput | kSelect | kCluster | kOutput, nullptr},
        {"export", "Emit the cloud (or a sub-cloud) as HTML or JSON", pipeline | kOutput | kFormat | kSubcloud,
         "html"},
        {"gen", "Generate a synthetic fixture as JSON lines or TSV", kCluster | kOutput | kFormat | kGen, "jsonl"},
        {"serve", "Run the HTTP service", pipeline | kServe, nullptr},
        {"print-config", "Print the fully resolved configuration as JSON",
         pipeline | kOutput | kFormat | kSimilarity | kSubcloud | kServe | kGen, nullptr},
    };

    std::vector<std::unique_ptr<Command>> commands;
    for (const auto& s : specs) {
        auto cmd = std::make_unique<Command>();
        if (s.format)
            cmd->config.format = s.format;
        if (std::string(s.name) == "build")
            cmd->config.output = "artifact";
        cmd->app = app.add_subcommand(s.name, s.help);
        register_options(*cmd, s.groups);
        if (std::string(s.name) == "export") {
            cmd->app->add_flag_callback("--html", [c = cmd.get()] { c->config.format = "html"; }, "Same as --format html");
            cmd->app->add_flag_callback("--json", [c = cmd.get()] { c->config.format = "json"; }, "Same as --format json");
        }
        commands.push_back(std::move(cmd));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (auto& cmd : commands) {
        if (!cmd->app->parsed())
            continue;
        const std::string name = cmd->app->get_name();
        try {
            if (name == "export") {
                // --html/--json set format directly; keep it from being overridden.
                for (const char* f : {"--html", "--json"})
                    if (cmd->app->count(f))
                        cmd->options["format"] = cmd->app->get_option(f);
            }
            resolve(*cmd);
            return run(name, cmd->config);
        } catch (const UsageError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        } catch (const InvalidArgumentError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        } catch (const NotFoundError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 2;
}
