// Command-line front end: generate, pareto, report, chart, curves, verify, serve.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <set>

#include "dbeval/config.hpp"
#include "dbeval/oracles.hpp"
#include "dbeval/report.hpp"
#include "dbeval/service.hpp"

namespace {

using namespace dbeval;

std::vector<std::string> split_top_level(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '{') ++depth;
        if (c == '}') --depth;
        if (c == ',' && depth == 0) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
            continue;
        }
        if (c != ' ' || depth > 0) cur += c;
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

Attribute parse_fraud(const std::string& s) {
    if (s == "mafia" || s == "p_m") return Attribute::MafiaFraud;
    if (s == "distance" || s == "p_d") return Attribute::DistanceFraud;
    if (s == "terrorist" || s == "p_t") return Attribute::TerroristFraud;
    throw std::invalid_argument("--fraud must be mafia, distance or terrorist");
}

struct Output {
    std::filesystem::path dir;
    std::string file;

    void write(const std::string& text) const {
        if (file.empty()) {
            std::cout << text;
            return;
        }
        std::filesystem::path p(file);
        if (p.is_relative()) p = dir / p;
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
        out << text;
        std::cerr << "wrote " << p.string() << '\n';
    }
};

std::vector<std::string> protocol_list(const std::string& arg, const RunConfig& cfg) {
    if (arg.empty()) return cfg.protocols;
    return split_top_level(arg);
}

HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distance-bounding protocol explorer"};
    app.require_subcommand(1);

    std::string config_path, catalog_path, out_file;
    unsigned threads = 0;
    app.add_option("--config", config_path, "run configuration file (key = value)");
    app.add_option("--catalog", catalog_path, "protocol catalog file (default: built-in)");
    app.add_option("--threads", threads, "worker threads (0: hardware concurrency)");
    app.add_option("--out", out_file, "write output to this file instead of stdout");

    std::string protocols_arg, format = "csv";
    auto* generate = app.add_subcommand("generate", "evaluate every protocol instance");
    generate->add_option("--protocols", protocols_arg, "comma-separated protocol ids");
    generate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::string y_text, pareto_format = "text", rule_text;
    auto* pareto = app.add_subcommand("pareto", "nondominated instances meeting a mafia-fraud bound");
    pareto->add_option("--y", y_text, "bound on p_m, e.g. 2^-16 or 0.001")->required();
    pareto->add_option("--protocols", protocols_arg, "comma-separated protocol ids");
    pareto->add_option("--format", pareto_format, "text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    pareto->add_option("--rule", rule_text, "representative rule: largest-mafia or fewest-bits");

    std::string y_list = "2^-1,2^-16,2^-32,2^-64,2^-96,2^-128", style = "table3", report_format = "text";
    auto* report = app.add_subcommand("report", "summary table over several bounds");
    report->add_option("--y-list", y_list, "comma-separated bounds");
    report->add_option("--style", style, "table style")->check(CLI::IsMember({"table3"}));
    report->add_option("--format", report_format, "text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    report->add_option("--protocols", protocols_arg, "comma-separated protocol ids");
    report->add_option("--rule", rule_text, "representative rule: largest-mafia or fewest-bits");

    auto* chart = app.add_subcommand("chart", "render charts");
    chart->require_subcommand(1);
    std::string instances_arg, normalization;
    bool hide_equal = false;
    auto* spider = chart->add_subcommand("spider", "spider chart of 1 to 6 instances (SVG)");
    spider->add_option("--instances", instances_arg, "comma-separated instance ids")->required();
    spider->add_option("--normalization", normalization, "ideal-N or an instance id");
    spider->add_flag("--hide-equal-axes", hide_equal, "drop non-security axes on which all instances agree");

    std::string fraud = "mafia", points_arg, curves_format = "csv";
    auto* curves = app.add_subcommand("curves", "best fraud resistance per protocol as n grows");
    curves->add_option("--fraud", fraud, "mafia, distance or terrorist");
    curves->add_option("--points", points_arg, "comma-separated n values (default 32,64,...,256)");
    curves->add_option("--format", curves_format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));

    std::uint64_t trials = 0, seed = 0;
    unsigned max_rounds = 8;
    auto* verify = app.add_subcommand("verify", "run the oracle suite; exits 1 on any failure");
    verify->add_option("--trials", trials, "Monte Carlo trials per estimate");
    verify->add_option("--seed", seed, "Monte Carlo seed");
    verify->add_option("--max-rounds", max_rounds, "largest n simulated");

    int port = -1;
    std::string host;
    auto* serve = app.add_subcommand("serve", "serve the HTTP JSON API");
    serve->add_option("--port", port, "TCP port (0 picks a free one)");
    serve->add_option("--host", host, "bind address");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
        if (!catalog_path.empty()) cfg.catalog_path = catalog_path;
        if (threads) cfg.threads = threads;
        if (!rule_text.empty()) {
            auto r = parse_representative_rule(rule_text);
            if (!r) throw std::invalid_argument("--rule must be largest-mafia or fewest-bits");
            cfg.rule = *r;
        }
        const Catalog catalog = cfg.make_catalog();
        const Output out{cfg.output_dir, out_file};
        const ReportOptions options{cfg.engine(), cfg.rule};

        if (*generate) {
            const auto instances = catalog.generate(protocol_list(protocols_arg, cfg));
            out.write(format == "csv" ? instances_csv(instances) : instances_json(instances).dump(2) + "\n");
        } else if (*pareto) {
            const Bound y = parse_bound(y_text);
            const auto protocols = protocol_list(protocols_arg, cfg);
            const auto instances = catalog.generate(protocols);
            if (pareto_format == "json") {
                out.write(canonical_json(pareto_document(catalog, instances, y, protocols, options)) + "\n");
            } else {
                const auto filtered = filter_mafia_bound(instances, y.log2_value);
                const SolutionSet set = nondominated(filtered, options.engine);
                if (pareto_format == "csv") {
                    const auto ids = set.member_ids();
                    const std::set<std::string> members(ids.begin(), ids.end());
                    out.write(instances_csv(filtered, &members));
                } else {
                    const auto totals = set.totals();
                    ReportBlock block{y, {}};
                    for (const auto& m : set.members) block.rows.push_back(scale_row(m, totals.at(m.protocol)));
                    std::string text = render_report({block}, TableFormat::Text);
                    text += std::to_string(set.members.size()) + " nondominated of " +
                            std::to_string(filtered.size()) + " instances meeting " + y.text() + "\n";
                    out.write(text);
                }
            }
        } else if (*report) {
            const auto instances = catalog.generate(protocol_list(protocols_arg, cfg));
            std::vector<ReportBlock> blocks;
            for (const auto& y : split_top_level(y_list)) blocks.push_back(report_block(instances, parse_bound(y), options));
            out.write(render_report(blocks, *parse_table_format(report_format)));
        } else if (*chart) {
            std::vector<Instance> chosen;
            for (const auto& id : split_top_level(instances_arg)) chosen.push_back(catalog.instance(id));
            SpiderOptions so;
            so.hide_equal_axes = hide_equal;
            apply_spider_normalization(so, normalization, catalog);
            out.write(render_spider_svg(chosen, so));
        } else if (*curves) {
            std::vector<std::uint32_t> points = default_curve_points();
            if (!points_arg.empty()) {
                points.clear();
                for (const auto& p : split_top_level(points_arg)) points.push_back(static_cast<std::uint32_t>(std::stoul(p)));
            }
            const Attribute a = parse_fraud(fraud);
            const auto c = resistance_curves(catalog.generate(cfg.protocols), a, points);
            out.write(curves_format == "csv" ? curves_csv(c, a) : curves_svg(c, a));
        } else if (*verify) {
            VerifyOptions vo;
            vo.mc.trials = trials ? trials : cfg.trials;
            vo.mc.seed = seed ? seed : cfg.seed;
            vo.mc.threads = cfg.threads;
            vo.max_rounds = max_rounds;
            vo.approx = cfg.approx();
            std::size_t failed = 0;
            std::string text;
            for (const auto& c : run_oracle_suite(catalog, vo)) {
                text += (c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
                failed += c.passed ? 0 : 1;
            }
            text += failed ? std::to_string(failed) + " check(s) failed\n" : "all checks passed\n";
            out.write(text);
            return failed ? 1 : 0;
        } else if (*serve) {
            if (port >= 0) cfg.port = static_cast<std::uint16_t>(port);
            if (!host.empty()) cfg.host = host;
            Service service(catalog, cfg);
            HttpServer server(service);
            const int bound = server.bind(cfg.host, cfg.port);
            if (bound < 0) throw std::runtime_error("cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on http://" << cfg.host << ':' << bound << '\n';
            server.listen();
            g_server = nullptr;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
