#include "tagcloud/errors.hpp"
#include "tagcloud/service.hpp"

#include <httplib.h>

namespace tagcloud {

struct HttpServer::Impl {
    const TagCloudService& service;
    ServerOptions options;
    httplib::Server server;
    int port = -1;

    Impl(const TagCloudService& s, ServerOptions o) : service(s), options(std::move(o)) {
        auto reply = [](httplib::Response& res, const Response& r) {
            res.status = r.status;
            res.set_content(r.body, r.content_type);
        };
        // More specific tag routes first; httplib matches in registration order.
        server.Get("/cloud", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.handle_cloud(req.params));
        });
        server.Get(R"(/cloud/(.+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.handle_subcloud(req.matches[1], req.params));
        });
        server.Get(R"(/tags/(.+)/resources)", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.handle_resources(req.matches[1], req.params));
        });
        server.Get(R"(/tags/(.+)/related)", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.handle_related(req.matches[1], req.params));
        });
        server.Get(R"(/tags/(.+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.handle_tag(req.matches[1], req.params));
        });
        server.Get("/meta", [this, reply](const httplib::Request&, httplib::Response& res) {
            reply(res, service.handle_meta());
        });
        if (options.ui_dir && !server.set_mount_point("/ui", options.ui_dir->string()))
            throw Error("cannot serve UI directory '" + options.ui_dir->string() + "'");
    }
};

HttpServer::HttpServer(const TagCloudService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind() {
    auto& o = impl_->options;
    if (o.port == 0) {
        impl_->port = impl_->server.bind_to_any_port(o.bind);
    } else {
        impl_->port = impl_->server.bind_to_port(o.bind, o.port) ? o.port : -1;
    }
    if (impl_->port < 0)
        throw Error("cannot bind " + o.bind + ":" + std::to_string(o.port));
    return impl_->port;
}

void HttpServer::serve() {
    impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running())
        impl_->server.stop();
}

} // namespace tagcloud
