#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbeval/bound.hpp"
#include "dbeval/catalog.hpp"
#include "dbeval/config.hpp"
#include "dbeval/report.hpp"

namespace dbeval {

// Thrown by request handling; carries the HTTP status to report.
class ApiError : public std::runtime_error {
public:
    ApiError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

// Pareto result document shared by the CLI and the HTTP API:
//   {y, rule, protocols, rows, totals, member_ids}
nlohmann::json pareto_document(const Catalog& catalog, const std::vector<Instance>& instances, const Bound& y,
                               const std::vector<std::string>& protocols, const ReportOptions& options);

// Compact, key-sorted serialization used for parity comparisons.
std::string canonical_json(const nlohmann::json& doc);

struct HttpRequest {
    std::string method;
    std::string path;  // already percent-decoded
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

class Service {
public:
    Service(Catalog catalog, RunConfig config);

    HttpResponse handle(const HttpRequest& request) const;

    const Catalog& catalog() const { return catalog_; }
    const std::vector<Instance>& instances() const { return instances_; }

private:
    Catalog catalog_;
    RunConfig config_;
    std::vector<Instance> instances_;

    nlohmann::json protocols_doc() const;
    nlohmann::json instances_page(const HttpRequest& request) const;
    nlohmann::json instance_doc(const std::string& id) const;
    nlohmann::json pareto(const nlohmann::json& body) const;
    std::string spider(const nlohmann::json& body) const;
};

// HTTP front end for a Service.
class HttpServer {
public:
    explicit HttpServer(const Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds host:port (port 0 picks a free port) and returns the bound port.
    int bind(const std::string& host, int port);
    void listen();  // blocks until stop()
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace dbeval
