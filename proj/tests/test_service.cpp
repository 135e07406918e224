#include "tagcloud/errors.hpp"
#include "tagcloud/layout.hpp"
#include "tagcloud/service.hpp"
#include "tagcloud/synthetic.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

using namespace tagcloud;
using nlohmann::json;

namespace {

/// `users` distinct users put `tag` on `resource`.
void add(std::vector<Assignment>& out, const std::string& resource, const std::string& tag, int users = 2) {
    for (int u = 0; u < users; ++u)
        out.push_back({"u" + std::to_string(u), resource, tag});
}

TagCloudService small_service() {
    std::vector<Assignment> recs;
    add(recs, "r1", "x");
    add(recs, "r1", "y");
    add(recs, "r2", "x");
    add(recs, "r2", "z");
    add(recs, "r3", "w");
    return TagCloudService(build_corpus(recs), CloudParams{});
}

json body(const Response& r) {
    return json::parse(r.body);
}

std::set<std::string> cloud_tags(const CloudModel& m) {
    auto t = m.tags();
    return {t.begin(), t.end()};
}

} // namespace

TEST_CASE("main cloud uses the defaults") {
    auto svc = TagCloudService(generate_synthetic(standard_fixture(0)), CloudParams{});
    auto r = svc.handle_cloud({});
    CHECK(r.status == 200);
    auto doc = body(r);
    CHECK(doc["method"] == "d");
    CHECK(doc["mode"] == "clustered");
    CHECK(parse_document(r.body) == svc.main_cloud());
    CHECK(svc.main_cloud().tag_count() <= 95);

    auto alpha = body(svc.handle_cloud({{"mode", "alphabetical"}, {"method", "a"}}));
    CHECK(alpha["rows"].size() == 1);
    CHECK(alpha["method"] == "a");
}

TEST_CASE("invalid parameters give 400 with the field") {
    auto svc = small_service();
    auto r = svc.handle_cloud({{"n", "0"}});
    CHECK(r.status == 400);
    auto b = body(r);
    CHECK(b["error"] == "invalid_argument");
    CHECK(b["field"] == "n");
    CHECK(svc.handle_cloud({{"method", "q"}}).status == 400);
    CHECK(svc.handle_cloud({{"n", "abc"}}).status == 400);
    CHECK(svc.handle_cloud({{"format", "xml"}}).status == 400);
    CHECK(svc.handle_resources("x", {{"limit", "-1"}}).status == 400);
}

TEST_CASE("sub-cloud excludes the clicked tag") {
    auto svc = small_service();
    CHECK(cloud_tags(*svc.subcloud("x", CloudParams{})) == std::set<std::string>{"y", "z"});
    auto r = svc.handle_subcloud("nope", {});
    CHECK(r.status == 404);
    CHECK(body(r)["error"] == "not_found");
    // a tag without neighbours gives an empty cloud, not an error
    auto lonely = svc.handle_subcloud("w", {});
    CHECK(lonely.status == 200);
    CHECK(body(lonely)["rows"].empty());
}

TEST_CASE("sub-cloud of a tag on every resource is the main cloud minus that tag") {
    std::vector<Assignment> recs;
    for (int r = 0; r < 6; ++r) {
        add(recs, "r" + std::to_string(r), "all", 2);
        add(recs, "r" + std::to_string(r), "t" + std::to_string(r % 3), 2 + r % 2);
    }
    CloudParams p;
    p.k = 2;
    TagCloudService svc(build_corpus(recs), p);
    auto main = cloud_tags(svc.main_cloud());
    main.erase("all");
    CHECK(cloud_tags(*svc.subcloud("all", p)) == main);
}

TEST_CASE("resources are ordered by weight and paginated") {
    std::vector<Assignment> recs;
    add(recs, "r1", "t", 3);
    add(recs, "r2", "t", 5);
    add(recs, "r0", "t", 3);
    TagCloudService svc(build_corpus(recs), CloudParams{});
    auto all = svc.resources("t", 10, 0);
    REQUIRE(all.size() == 3);
    CHECK(all[0] == ResourceEntry{"r2", 5});
    CHECK(all[1] == ResourceEntry{"r0", 3});
    CHECK(all[2] == ResourceEntry{"r1", 3});
    auto page = svc.resources("t", 1, 1);
    REQUIRE(page.size() == 1);
    CHECK(page[0].resource == "r0");
    CHECK_THROWS_AS(svc.resources("nope", 1, 0), NotFoundError);
    auto r = body(svc.handle_resources("t", {{"limit", "2"}}));
    CHECK(r["total"] == 3);
    CHECK(r["resources"].size() == 2);
    CHECK(r["meta"]["corpus_digest"] == svc.digest());
}

TEST_CASE("related tags") {
    std::vector<Assignment> recs;
    // t with a on 2 of 5 resources and b on 4 of 4
    for (int r = 0; r < 5; ++r)
        add(recs, "r" + std::to_string(r), "t", 1);
    for (int r = 0; r < 2; ++r)
        add(recs, "r" + std::to_string(r), "a", 1);
    for (int r = 0; r < 4; ++r)
        add(recs, "r" + std::to_string(r), "b", 1);
    add(recs, "lonely", "iso", 1);
    TagCloudService svc(build_corpus(recs), CloudParams{});
    auto rel = svc.related("t", 2);
    REQUIRE(rel.size() == 2);
    CHECK(rel[0] == RelatedTag{"b", 0.8});
    CHECK(rel[1] == RelatedTag{"a", 0.4});
    CHECK(svc.related("t", 1).size() == 1);
    CHECK(svc.related("iso", 5).empty());
    CHECK(svc.handle_related("nope", {}).status == 404);
    auto tag = body(svc.handle_tag("t", {}));
    CHECK(tag["resource_count"] == 5);
    CHECK(tag["related"][0]["tag"] == "b");
}

TEST_CASE("identical requests give identical bytes and hit the cache") {
    auto svc = TagCloudService(generate_synthetic(standard_fixture(1)), CloudParams{});
    QueryParams q{{"method", "b"}, {"n", "30"}};
    auto a = svc.handle_cloud(q);
    auto before = svc.cache_computations();
    auto b = svc.handle_cloud(q);
    CHECK(a.body == b.body);
    CHECK(svc.cache_computations() == before);
    auto meta = body(svc.handle_meta());
    CHECK(meta["defaults"]["n"] == 95);
}

TEST_CASE("single-flight cache computes once under concurrency") {
    SingleFlightCache<int, int> cache(4);
    std::atomic<int> calls{0};
    std::vector<std::thread> threads;
    std::vector<int> results(8, 0);
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([&, i] {
            results[i] = cache.get_or_compute(1, [&] {
                ++calls;
                std::this_thread::sleep_for(std::chrono::milliseconds(50));
                return 42;
            });
        });
    }
    for (auto& t : threads)
        t.join();
    CHECK(calls == 1);
    for (auto r : results)
        CHECK(r == 42);

    for (int k = 2; k < 10; ++k)
        cache.get_or_compute(k, [k] { return k; });
    CHECK(cache.size() == 4);

    CHECK_THROWS(cache.get_or_compute(99, []() -> int { throw std::runtime_error("boom"); }));
    CHECK(cache.get_or_compute(99, [] { return 7; }) == 7);
}

TEST_CASE("HTTP round trip") {
    auto svc = TagCloudService(generate_synthetic(standard_fixture(0)), CloudParams{});
    auto ui = std::filesystem::temp_directory_path() / "tagcloud_test_ui";
    std::filesystem::create_directories(ui);
    std::ofstream(ui / "index.html") << "<!DOCTYPE html><title>ui</title>\n";

    HttpServer server(svc, {.bind = "127.0.0.1", .port = 0, .ui_dir = ui});
    const int port = server.bind();
    std::thread worker([&] { server.serve(); });
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);

    auto cloud = client.Get("/cloud");
    REQUIRE(cloud);
    CHECK(cloud->status == 200);
    CHECK(parse_document(cloud->body) == svc.main_cloud());

    auto html = client.Get("/cloud?format=html");
    REQUIRE(html);
    CHECK(html->get_header_value("Content-Type").find("text/html") == 0);

    const auto first = svc.main_cloud().tags().front();
    auto sub = client.Get("/cloud/" + url_encode(first));
    REQUIRE(sub);
    CHECK(sub->status == 200);
    auto tags = parse_document(sub->body).tags();
    CHECK(std::find(tags.begin(), tags.end(), first) == tags.end());

    auto res = client.Get("/tags/" + url_encode(first) + "/resources?limit=3&offset=1");
    REQUIRE(res);
    CHECK(json::parse(res->body)["resources"].size() == 3);
    auto rel = client.Get("/tags/" + url_encode(first) + "/related?limit=4");
    REQUIRE(rel);
    CHECK(json::parse(rel->body)["related"].size() <= 4);
    auto tag = client.Get("/tags/" + url_encode(first));
    REQUIRE(tag);
    CHECK(json::parse(tag->body)["tag"] == first);

    auto missing = client.Get("/cloud/no%20such%20tag");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    auto bad = client.Get("/cloud?k=0");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(json::parse(bad->body)["field"] == "k");

    auto meta = client.Get("/meta");
    REQUIRE(meta);
    CHECK(json::parse(meta->body)["corpus_digest"] == svc.digest());
    auto page = client.Get("/ui/index.html");
    REQUIRE(page);
    CHECK(page->status == 200);

    server.stop();
    worker.join();
    std::filesystem::remove_all(ui);
}
