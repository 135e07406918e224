#pragma once

#include "tagcloud/corpus.hpp"
#include "tagcloud/pipeline.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace tagcloud {

/// Bounded LRU cache where concurrent requests for the same key share one
/// computation. A failed computation is not cached.
template <typename Key, typename Value>
class SingleFlightCache {
  public:
    explicit SingleFlightCache(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

    Value get_or_compute(const Key& key, const std::function<Value()>& compute) {
        std::shared_future<Value> future;
        std::promise<Value> promise;
        bool owner = false;
        std::uint64_t id = 0;
        {
            std::lock_guard lock(mutex_);
            auto it = entries_.find(key);
            if (it != entries_.end()) {
                order_.splice(order_.begin(), order_, it->second.position);
                future = it->second.future;
            } else {
                owner = true;
                future = promise.get_future().share();
                order_.push_front(key);
                id = ++next_id_;
                entries_.emplace(key, Entry{future, order_.begin(), id});
                while (entries_.size() > capacity_) {
                    entries_.erase(order_.back());
                    order_.pop_back();
                }
            }
        }
        if (owner) {
            try {
                promise.set_value(compute());
                std::lock_guard lock(mutex_);
                ++computations_;
            } catch (...) {
                promise.set_exception(std::current_exception());
                std::lock_guard lock(mutex_);
                auto it = entries_.find(key);
                if (it != entries_.end() && it->second.id == id) {
                    order_.erase(it->second.position);
                    entries_.erase(it);
                }
            }
        }
        return future.get();
    }

    std::size_t computations() const {
        std::lock_guard lock(mutex_);
        return computations_;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return entries_.size();
    }

  private:
    struct Entry {
        std::shared_future<Value> future;
        typename std::list<Key>::iterator position;
        std::uint64_t id;
    };

    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::list<Key> order_;
    std::map<Key, Entry> entries_;
    std::size_t computations_ = 0;
    std::uint64_t next_id_ = 0;
};

/// A status code plus body, independent of the HTTP library.
struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

using QueryParams = std::multimap<std::string, std::string>;

struct ResourceEntry {
    std::string resource;
    std::uint32_t weight;

    friend bool operator==(const ResourceEntry&, const ResourceEntry&) = default;
};

struct RelatedTag {
    std::string tag;
    double value;

    friend bool operator==(const RelatedTag&, const RelatedTag&) = default;
};

/// Read-only browsing service over one corpus.
///
/// The main cloud for the default parameters is computed at construction.
/// Other clouds and sub-clouds are computed on demand and kept in a
/// bounded single-flight LRU cache; everything else is immutable.
class TagCloudService {
  public:
    TagCloudService(Corpus corpus, CloudParams defaults, std::size_t cache_capacity = 256);

    const Corpus& corpus() const noexcept { return corpus_; }
    const std::string& digest() const noexcept { return digest_; }
    const CloudParams& defaults() const noexcept { return defaults_; }
    const CloudModel& main_cloud() const noexcept { return main_cloud_; }

    /// Cloud over the full corpus.
    std::shared_ptr<const CloudModel> cloud(const CloudParams& params) const;
    /// Cloud over the resources carrying `tag`, with `tag` itself excluded.
    /// Throws NotFoundError for an unknown tag.
    std::shared_ptr<const CloudModel> subcloud(const std::string& tag, const CloudParams& params) const;
    /// Resources carrying `tag` by d_ij descending, then resource name.
    std::vector<ResourceEntry> resources(const std::string& tag, std::size_t limit, std::size_t offset) const;
    /// Co-occurring tags by Jaccard value descending, then name.
    std::vector<RelatedTag> related(const std::string& tag, std::size_t limit) const;

    /// Defaults overridden by method, n, k, mode, seed (and friends) from
    /// the query. Throws InvalidArgumentError naming the bad field.
    CloudParams parse_params(const QueryParams& query) const;

    // HTTP-shaped handlers: JSON bodies, error bodies {error, message, field?}.
    Response handle_cloud(const QueryParams& query) const;
    Response handle_subcloud(const std::string& tag, const QueryParams& query) const;
    Response handle_resources(const std::string& tag, const QueryParams& query) const;
    Response handle_related(const std::string& tag, const QueryParams& query) const;
    Response handle_tag(const std::string& tag, const QueryParams& query) const;
    Response handle_meta() const;

    std::size_t cache_computations() const { return cache_.computations(); }

  private:
    Response render_cloud(const CloudModel& model, const QueryParams& query, const CloudParams& params) const;
    std::string meta_json() const;

    Corpus corpus_;
    std::string digest_;
    CloudParams defaults_;
    CloudModel main_cloud_;
    mutable SingleFlightCache<std::string, std::shared_ptr<const CloudModel>> cache_;
};

struct ServerOptions {
    std::string bind = "127.0.0.1";
    int port = 8080; // 0 picks a free port
    std::optional<std::filesystem::path> ui_dir;
};

/// HTTP front end for a TagCloudService.
class HttpServer {
  public:
    HttpServer(const TagCloudService& service, ServerOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; returns the bound port. Throws Error on failure.
    int bind();
    /// Serves until stop() is called. Call bind() first.
    void serve();
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace tagcloud
