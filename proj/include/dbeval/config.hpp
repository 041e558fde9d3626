#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dbeval/attributes.hpp"
#include "dbeval/catalog.hpp"
#include "dbeval/pareto.hpp"

namespace dbeval {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Key-value run configuration ("key = value", '#' comments). Unknown keys are errors.
struct RunConfig {
    std::optional<std::filesystem::path> catalog_path;
    std::optional<std::uint64_t> delta, sigma, kappa;
    double memory_tolerance = 1024.0;
    double probability_window = 1.0;
    std::vector<std::string> protocols;  // empty means all
    std::filesystem::path output_dir = ".";
    std::uint16_t port = 8080;
    std::string host = "127.0.0.1";
    unsigned threads = 0;
    RepresentativeRule rule = RepresentativeRule::LargestMafia;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0x5eed'0001;

    static RunConfig parse(std::string_view text, std::string_view origin = "<config>");
    static RunConfig load(const std::filesystem::path& path);

    // Loads the configured catalog (or the built-in one) and applies constant overrides.
    Catalog make_catalog() const;
    ApproxSpec approx() const { return ApproxSpec{probability_window, memory_tolerance}; }
    EngineOptions engine() const { return EngineOptions{approx(), threads}; }
};

}  // namespace dbeval
