#include <httplib.h>

#include "dbeval/service.hpp"

namespace dbeval {

struct HttpServer::Impl {
    const Service& service;
    httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(new Impl{service, {}}) {
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest r;
        r.method = req.method;
        r.path = req.path;
        for (const auto& [k, v] : req.params) r.query.emplace(k, v);
        r.body = req.body;
        const HttpResponse out = impl_->service.handle(r);
        res.status = out.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(out.body, out.content_type);
    };
    impl_->server.Get(".*", route);
    impl_->server.Post(".*", route);
    impl_->server.Put(".*", route);
    impl_->server.Delete(".*", route);
    impl_->server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace dbeval
