#include "support/process.hpp"

#include "tagcloud/commands.hpp"
#include "tagcloud/config.hpp"
#include "tagcloud/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <unistd.h>

using namespace tagcloud;

namespace {

const std::string kCli = TAGCLOUD_CLI;

proc::Result cli(const std::string& args) {
    return proc::run(proc::quote(kCli) + " " + args + " 2>/dev/null");
}

proc::Result cli_stderr(const std::string& args) {
    return proc::run(proc::quote(kCli) + " " + args + " 2>&1 >/dev/null");
}

void write(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

const char* kThreeRecords = "{\"user\":\"u1\",\"resource\":\"r1\",\"tag\":\"web\"}\n"
                            "{\"user\":\"u2\",\"resource\":\"r1\",\"tag\":\"web\"}\n"
                            "{\"user\":\"u1\",\"resource\":\"r1\",\"tag\":\"design\"}\n";

} // namespace

TEST_CASE("config precedence: flags over file over defaults") {
    RunConfig c;
    apply_config_json(c, R"({"n": 7, "k": 3, "method": "a"})", {"k"});
    CHECK(c.n == 7);
    CHECK(c.k == 12);
    CHECK(c.method == "a");
    CHECK_THROWS_AS(apply_config_json(c, R"({"bogus": 1})"), InvalidArgumentError);
    CHECK_THROWS_AS(apply_config_json(c, R"({"n": "many"})"), InvalidArgumentError);
    CHECK_THROWS_AS(apply_config_json(c, "[1]"), InvalidArgumentError);

    auto dumped = nlohmann::json::parse(config_to_json(RunConfig{}));
    CHECK(dumped.size() == config_keys().size());
    RunConfig round;
    apply_config_json(round, config_to_json(c));
    CHECK(config_to_json(round) == config_to_json(c));
}

TEST_CASE("build over the three-record example") {
    auto dir = proc::scratch_dir("cli_build");
    write(dir / "three.jsonl", kThreeRecords);
    auto out = dir / "artifact";
    auto r = cli("build -i " + proc::quote((dir / "three.jsonl").string()) + " --output " + proc::quote(out.string()));
    REQUIRE(r.exit_code == 0);
    auto corpus = load_corpus(out / "corpus.bin");
    CHECK(corpus.tag_count() == 2);
    auto first_json = proc::read_file(out / "cloud.json");
    auto first_html = proc::read_file(out / "cloud.html");

    auto again = cli("build -i " + proc::quote((dir / "three.jsonl").string()) + " --output " + proc::quote(out.string()));
    REQUIRE(again.exit_code == 0);
    CHECK(proc::read_file(out / "cloud.json") == first_json);
    CHECK(proc::read_file(out / "cloud.html") == first_html);
    std::filesystem::remove_all(dir);
}

TEST_CASE("missing input exits 2 and names the path") {
    auto r = cli_stderr("build -i /nonexistent/dump.jsonl");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("/nonexistent/dump.jsonl") != std::string::npos);
    CHECK(cli("build").exit_code == 2);
    CHECK(cli("stats --n notanumber -i x").exit_code == 2);
    CHECK(cli("").exit_code == 2);
}

TEST_CASE("malformed input exits 1 with the line number") {
    auto dir = proc::scratch_dir("cli_parse");
    write(dir / "bad.jsonl", std::string(kThreeRecords) + "{\"user\":\"u\"}\n");
    auto r = cli_stderr("stats -i " + proc::quote((dir / "bad.jsonl").string()));
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("line 4") != std::string::npos);
    CHECK(r.out.find("bad.jsonl") != std::string::npos);
    auto skip = cli("stats --on-error skip -i " + proc::quote((dir / "bad.jsonl").string()));
    CHECK(skip.exit_code == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("gen, stats, similarity, cluster and export") {
    auto dir = proc::scratch_dir("cli_all");
    auto data = dir / "std.jsonl";
    auto gen = cli("gen --seed 0 --output " + proc::quote(data.string()));
    REQUIRE(gen.exit_code == 0);
    const auto in = " -i " + proc::quote(data.string());

    auto csv = cli("stats --n 20 --format csv" + in);
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("method,selected,coverage,coverage_pct,overlap_mean,overlap_stddev\n", 0) == 0);
    std::istringstream lines(csv.out);
    std::string line;
    std::getline(lines, line);
    std::map<std::string, double> overlap;
    while (std::getline(lines, line)) {
        auto first = line.find(',');
        auto last = line.rfind(',');
        auto before = line.rfind(',', last - 1);
        overlap[line.substr(0, first)] = std::stod(line.substr(before + 1, last - before - 1));
    }
    CHECK(overlap.size() == 4);
    CHECK(overlap["d"] < overlap["a"]);

    auto text = cli("stats --n 1000" + in);
    REQUIRE(text.exit_code == 0);
    CHECK(text.out.rfind("# n=1000 exceeds", 0) == 0);

    auto sim = cli("similarity --n 5" + in);
    REQUIRE(sim.exit_code == 0);
    std::istringstream rows(sim.out);
    std::size_t count = 0;
    while (std::getline(rows, line))
        ++count;
    CHECK(count == 6);
    auto sparse = cli("similarity --n 5 --format sparse" + in);
    CHECK(sparse.out.rfind("tag_a,tag_b,value\n", 0) == 0);

    auto clusters = cli("cluster --n 30 --k 4" + in);
    REQUIRE(clusters.exit_code == 0);
    CHECK(clusters.out.find("cluster 4 ") != std::string::npos);
    CHECK(clusters.out.find("# intra_mean=") != std::string::npos);

    auto build = cli("build --output " + proc::quote((dir / "art").string()) + in);
    REQUIRE(build.exit_code == 0);
    auto bin = " -i " + proc::quote((dir / "art" / "corpus.bin").string());
    auto html = cli("export --html" + bin);
    CHECK(html.out == proc::read_file(dir / "art" / "cloud.html"));
    auto json = cli("export --json" + bin);
    CHECK(json.out == proc::read_file(dir / "art" / "cloud.json"));

    auto sub = cli("export --json --subcloud topic1-00" + bin);
    REQUIRE(sub.exit_code == 0);
    auto doc = nlohmann::json::parse(sub.out);
    for (const auto& row : doc["rows"])
        for (const auto& t : row)
            CHECK(t["tag"] != "topic1-00");
    CHECK(cli("export --subcloud nosuchtag" + bin).exit_code == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("print-config reflects flags over the config file") {
    auto dir = proc::scratch_dir("cli_cfg");
    write(dir / "cfg.json", R"({"n": 7, "k": 3, "method": "a"})");
    auto r = cli("print-config --config " + proc::quote((dir / "cfg.json").string()) + " --k 4");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 7);
    CHECK(j["k"] == 4);
    CHECK(j["method"] == "a");
    CHECK(j["buckets"] == 6);
    write(dir / "bad.json", R"({"nope": 1})");
    CHECK(cli("print-config --config " + proc::quote((dir / "bad.json").string())).exit_code == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("help lists every flag with its default") {
    auto r = cli("build --help");
    CHECK(r.exit_code == 0);
    for (const char* flag : {"--method TEXT [d]", "--n UINT [95]", "--k UINT [12]", "--seed UINT [0]",
                             "--buckets INT [6]", "--trials UINT [10]", "--cluster-space TEXT [jaccard]",
                             "--log-smoothing", "--output TEXT [artifact]"})
        CHECK_MESSAGE(r.out.find(flag) != std::string::npos, flag);
}

TEST_CASE("library-side report bodies") {
    RunConfig c;
    c.n = 10;
    auto corpus = generate_synthetic(block_fixture(2, 0));
    auto stats = stats_report(corpus, c);
    CHECK(stats.find("overlap_mean") != std::string::npos);
    c.format = "yaml";
    CHECK_THROWS_AS(stats_report(corpus, c), InvalidArgumentError);
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("plain") == "plain");
}
