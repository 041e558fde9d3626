#include "dbeval/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dbeval {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view v, const std::string& where) {
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(where + ": bad number '" + std::string(v) + "'");
    return out;
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text, std::string_view origin) {
    RunConfig cfg;
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = std::string(origin) + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "catalog") {
            cfg.catalog_path = std::filesystem::path(std::string(value));
        } else if (key == "delta") {
            cfg.delta = parse_number<std::uint64_t>(value, where);
        } else if (key == "sigma") {
            cfg.sigma = parse_number<std::uint64_t>(value, where);
        } else if (key == "kappa") {
            cfg.kappa = parse_number<std::uint64_t>(value, where);
        } else if (key == "memory_tolerance") {
            cfg.memory_tolerance = parse_number<double>(value, where);
            if (!(cfg.memory_tolerance >= 0)) throw ConfigError(where + ": memory_tolerance must be >= 0");
        } else if (key == "probability_window") {
            cfg.probability_window = parse_number<double>(value, where);
            if (!(cfg.probability_window >= 0)) throw ConfigError(where + ": probability_window must be >= 0");
        } else if (key == "protocols") {
            cfg.protocols.clear();
            std::size_t start = 0;
            while (start <= value.size()) {
                auto comma = value.find(',', start);
                if (comma == std::string_view::npos) comma = value.size();
                const auto name = trim(value.substr(start, comma - start));
                if (!name.empty()) cfg.protocols.emplace_back(name);
                start = comma + 1;
            }
        } else if (key == "output_dir") {
            cfg.output_dir = std::filesystem::path(std::string(value));
        } else if (key == "port") {
            cfg.port = parse_number<std::uint16_t>(value, where);
        } else if (key == "host") {
            cfg.host = std::string(value);
        } else if (key == "threads") {
            cfg.threads = parse_number<unsigned>(value, where);
        } else if (key == "representative") {
            auto r = parse_representative_rule(value);
            if (!r) throw ConfigError(where + ": representative must be largest-mafia or fewest-bits");
            cfg.rule = *r;
        } else if (key == "trials") {
            cfg.trials = parse_number<std::uint64_t>(value, where);
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(value, where);
        } else {
            throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
        }
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

Catalog RunConfig::make_catalog() const {
    Catalog c = catalog_path ? Catalog::load(*catalog_path) : Catalog::builtin();
    Constants k = c.constants();
    if (delta) k.delta = *delta;
    if (sigma) k.sigma = *sigma;
    if (kappa) k.kappa = *kappa;
    c.set_constants(k);
    for (const auto& p : protocols) c.at(p);
    return c;
}

}  // namespace dbeval
