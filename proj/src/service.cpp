#include "dbeval/service.hpp"

#include <algorithm>
#include <charconv>

namespace dbeval {

nlohmann::json pareto_document(const Catalog& catalog, const std::vector<Instance>& instances, const Bound& y,
                               const std::vector<std::string>& protocols, const ReportOptions& options) {
    std::vector<std::string> names;
    for (const auto& p : protocols) names.push_back(catalog.at(p).name);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    std::vector<Instance> pool;
    for (const Instance& i : instances)
        if (names.empty() || std::binary_search(names.begin(), names.end(), i.protocol)) pool.push_back(i);

    const SolutionSet set = nondominated(filter_mafia_bound(pool, y.log2_value), options.engine);
    nlohmann::json rows = nlohmann::json::array();
    for (const Representative& r : representatives(set, options.rule))
        rows.push_back(scaled_row_json(scale_row(r.instance, r.total)));

    nlohmann::json totals = nlohmann::json::object();
    for (const auto& [name, count] : set.totals()) totals[name] = count;

    nlohmann::json selected = nlohmann::json::array();
    if (names.empty())
        for (const auto& d : catalog.protocols()) selected.push_back(d.name);
    else
        for (const auto& n : names) selected.push_back(n);

    return nlohmann::json{{"y", y.text()},
                          {"rule", representative_rule_name(options.rule)},
                          {"protocols", selected},
                          {"rows", rows},
                          {"totals", totals},
                          {"member_ids", set.member_ids()}};
}

std::string canonical_json(const nlohmann::json& doc) { return doc.dump(); }

Service::Service(Catalog catalog, RunConfig config)
    : catalog_(std::move(catalog)), config_(std::move(config)), instances_(catalog_.generate(config_.protocols)) {}

namespace {

HttpResponse json_response(int status, const nlohmann::json& doc) {
    return HttpResponse{status, "application/json", canonical_json(doc)};
}

HttpResponse error_response(int status, const std::string& message) {
    return json_response(status, nlohmann::json{{"error", message}, {"status", status}});
}

nlohmann::json parse_body(const std::string& body) {
    nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw ApiError(400, "request body is not valid JSON");
    if (!doc.is_object()) throw ApiError(400, "request body must be a JSON object");
    return doc;
}

Bound bound_field(const nlohmann::json& v, const char* name) {
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_number()) text = format_decimal(v.get<double>());
    else throw ApiError(400, std::string("'") + name + "' must be a bound string such as \"2^-16\"");
    try {
        return parse_bound(text);
    } catch (const BoundError& e) {
        throw ApiError(e.kind() == BoundError::Kind::Range ? 422 : 400, e.what());
    }
}

std::size_t positive_query(const HttpRequest& r, const std::string& key, std::size_t fallback) {
    auto it = r.query.find(key);
    if (it == r.query.end()) return fallback;
    std::size_t v = 0;
    const std::string& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0)
        throw ApiError(400, "query parameter '" + key + "' must be a positive integer");
    return v;
}

std::vector<std::string> string_list(const nlohmann::json& v, const char* name) {
    if (!v.is_array()) throw ApiError(400, std::string("'") + name + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) throw ApiError(400, std::string("'") + name + "' must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

}  // namespace

nlohmann::json Service::protocols_doc() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : catalog_.protocols()) {
        nlohmann::json params = nlohmann::json::array();
        std::size_t count = 1;
        for (const auto& g : d.params) {
            params.push_back({{"name", param_key(g.name)}, {"values", g.values.size()}});
            count *= g.values.size();
        }
        nlohmann::json formulas = nlohmann::json::object();
        for (Attribute a : {Attribute::MafiaFraud, Attribute::DistanceFraud, Attribute::TerroristFraud}) {
            const FormulaBinding& b = d.binding(a);
            nlohmann::json e{{"evaluator", b.evaluator}, {"provenance", provenance_name(b.provenance)}};
            if (!b.reference.empty()) e["reference"] = b.reference;
            formulas[std::string(attribute_key(a))] = e;
        }
        arr.push_back({{"id", d.name},
                       {"aliases", d.aliases},
                       {"params", params},
                       {"instances", count},
                       {"formulas", formulas},
                       {"rounds", {{"terms", d.rounds.text()}, {"provenance", provenance_name(d.rounds_provenance)}}},
                       {"memory", d.memory.text()},
                       {"crypto_ops", d.crypto_ops},
                       {"slow_phase", d.slow_phase},
                       {"multi_bit", d.multi_bit}});
    }
    return nlohmann::json{{"protocols", arr}};
}

nlohmann::json Service::instances_page(const HttpRequest& r) const {
    auto it = r.query.find("protocol");
    if (it == r.query.end() || it->second.empty()) throw ApiError(400, "query parameter 'protocol' is required");
    const ProtocolDescriptor* d = catalog_.find(it->second);
    if (!d) throw ApiError(404, "unknown protocol '" + it->second + "'");
    const std::size_t page = positive_query(r, "page", 1);
    const std::size_t page_size = std::min<std::size_t>(positive_query(r, "page_size", 100), 1000);

    std::vector<const Instance*> matching;
    for (const Instance& i : instances_)
        if (i.protocol == d->name) matching.push_back(&i);
    nlohmann::json items = nlohmann::json::array();
    const std::size_t begin = (page - 1) * page_size;
    for (std::size_t k = begin; k < matching.size() && k < begin + page_size; ++k)
        items.push_back(instance_json(*matching[k], &catalog_));
    return nlohmann::json{{"protocol", d->name},
                          {"page", page},
                          {"page_size", page_size},
                          {"total", matching.size()},
                          {"items", items}};
}

nlohmann::json Service::instance_doc(const std::string& id) const {
    try {
        return instance_json(catalog_.instance(id), &catalog_);
    } catch (const UnknownInstance& e) {
        throw ApiError(404, e.what());
    }
}

nlohmann::json Service::pareto(const nlohmann::json& body) const {
    if (!body.contains("y")) throw ApiError(400, "missing 'y'");
    for (const auto& [key, value] : body.items())
        if (key != "y" && key != "protocols" && key != "constants" && key != "rule")
            throw ApiError(400, "unknown field '" + key + "'");
    const Bound y = bound_field(body["y"], "y");

    std::vector<std::string> protocols = config_.protocols;
    if (body.contains("protocols")) protocols = string_list(body["protocols"], "protocols");
    for (const auto& p : protocols)
        if (!catalog_.find(p)) throw ApiError(404, "unknown protocol '" + p + "'");

    ReportOptions options{config_.engine(), config_.rule};
    if (body.contains("rule")) {
        if (!body["rule"].is_string()) throw ApiError(400, "'rule' must be a string");
        auto r = parse_representative_rule(body["rule"].get<std::string>());
        if (!r) throw ApiError(400, "'rule' must be largest-mafia or fewest-bits");
        options.rule = *r;
    }

    if (!body.contains("constants")) return pareto_document(catalog_, instances_, y, protocols, options);

    const nlohmann::json& k = body["constants"];
    if (!k.is_object()) throw ApiError(400, "'constants' must be an object");
    Catalog custom = catalog_;
    Constants c = custom.constants();
    for (const auto& [key, value] : k.items()) {
        if (key == "memory_tolerance" || key == "probability_window") {
            if (!value.is_number() || value.get<double>() < 0)
                throw ApiError(400, "'" + key + "' must be a non-negative number");
            (key == "memory_tolerance" ? options.engine.approx.memory_tolerance
                                       : options.engine.approx.probability_log2_window) = value.get<double>();
            continue;
        }
        if (!value.is_number_unsigned()) throw ApiError(400, "constant '" + key + "' must be a non-negative integer");
        const auto v = value.get<std::uint64_t>();
        if (key == "delta") c.delta = v;
        else if (key == "sigma") c.sigma = v;
        else if (key == "kappa") c.kappa = v;
        else throw ApiError(400, "unknown constant '" + key + "'");
    }
    custom.set_constants(c);
    return pareto_document(custom, c == catalog_.constants() ? instances_ : custom.generate(config_.protocols), y,
                           protocols, options);
}

std::string Service::spider(const nlohmann::json& body) const {
    if (!body.contains("instance_ids")) throw ApiError(400, "missing 'instance_ids'");
    const auto ids = string_list(body["instance_ids"], "instance_ids");
    if (ids.empty() || ids.size() > kMaxSpiderInstances)
        throw ApiError(422, "spider charts take 1 to " + std::to_string(kMaxSpiderInstances) + " instances");
    std::vector<Instance> chosen;
    for (const auto& id : ids) {
        try {
            chosen.push_back(catalog_.instance(id));
        } catch (const UnknownInstance& e) {
            throw ApiError(404, e.what());
        }
    }
    SpiderOptions options;
    if (body.contains("normalization")) {
        if (!body["normalization"].is_string()) throw ApiError(400, "'normalization' must be a string");
        try {
            apply_spider_normalization(options, body["normalization"].get<std::string>(), catalog_);
        } catch (const UnknownInstance& e) {
            throw ApiError(404, e.what());
        } catch (const std::invalid_argument& e) {
            throw ApiError(400, e.what());
        }
    }
    if (body.contains("hide_equal_axes")) {
        if (!body["hide_equal_axes"].is_boolean()) throw ApiError(400, "'hide_equal_axes' must be a boolean");
        options.hide_equal_axes = body["hide_equal_axes"].get<bool>();
    }
    if (body.contains("axes")) {
        options.axes.clear();
        for (const auto& key : string_list(body["axes"], "axes")) {
            auto a = parse_attribute(key);
            if (!a) throw ApiError(400, "unknown axis '" + key + "'");
            options.axes.push_back(*a);
        }
    }
    try {
        return render_spider_svg(chosen, options);
    } catch (const std::invalid_argument& e) {
        throw ApiError(422, e.what());
    }
}

HttpResponse Service::handle(const HttpRequest& r) const {
    try {
        const std::string& p = r.path;
        const std::string instance_prefix = "/api/instance/";
        if (p == "/api/protocols") {
            if (r.method != "GET") throw ApiError(405, "use GET");
            return json_response(200, protocols_doc());
        }
        if (p == "/api/instances") {
            if (r.method != "GET") throw ApiError(405, "use GET");
            return json_response(200, instances_page(r));
        }
        if (p.rfind(instance_prefix, 0) == 0 && p.size() > instance_prefix.size()) {
            if (r.method != "GET") throw ApiError(405, "use GET");
            return json_response(200, instance_doc(p.substr(instance_prefix.size())));
        }
        if (p == "/api/pareto") {
            if (r.method != "POST") throw ApiError(405, "use POST");
            return json_response(200, pareto(parse_body(r.body)));
        }
        if (p == "/api/chart/spider") {
            if (r.method != "POST") throw ApiError(405, "use POST");
            return HttpResponse{200, "image/svg+xml", spider(parse_body(r.body))};
        }
        throw ApiError(404, "no route for " + r.method + " " + p);
    } catch (const ApiError& e) {
        return error_response(e.status(), e.what());
    } catch (const FormulaUnavailable& e) {
        return error_response(503, e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

}  // namespace dbeval
