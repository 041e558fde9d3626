#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbeval/attributes.hpp"
#include "dbeval/bound.hpp"
#include "dbeval/catalog.hpp"
#include "dbeval/pareto.hpp"

namespace dbeval {

// Smallest power of two at or above p, as an exponent. Empty for p = 0.
std::optional<int> scale_security(double log2_p);
// Whole kilobits, rounded down.
std::uint64_t scale_memory(std::uint64_t bits);

struct ScaledRow {
    std::string id;
    std::string protocol;
    std::uint32_t n = 0;
    std::optional<int> p_m, p_d, p_t;
    bool multi_bit = false;
    std::uint64_t crypto_ops = 0;
    std::uint64_t memory_kb = 0;
    bool slow_phase = false;
    std::size_t total = 0;

    bool operator==(const ScaledRow&) const = default;
};

ScaledRow scale_row(const Instance& instance, std::size_t total = 0);

struct ReportBlock {
    Bound y;
    std::vector<ScaledRow> rows;  // one representative per nondominated protocol
};

struct ReportOptions {
    EngineOptions engine;
    RepresentativeRule rule = RepresentativeRule::LargestMafia;
};

ReportBlock report_block(const std::vector<Instance>& instances, const Bound& y, const ReportOptions& options = {});

enum class TableFormat { Text, Csv, Json };
std::optional<TableFormat> parse_table_format(std::string_view s);

std::string render_report(const std::vector<ReportBlock>& blocks, TableFormat format);
nlohmann::json scaled_row_json(const ScaledRow& row);

// Instance exports with raw and scaled values. `nondominated`, when given,
// adds a column marking members.
std::string instances_csv(const std::vector<Instance>& instances, const std::set<std::string>* nondominated = nullptr);
nlohmann::json instance_json(const Instance& instance, const Catalog* catalog = nullptr);
nlohmann::json instances_json(const std::vector<Instance>& instances, const std::set<std::string>* nondominated = nullptr);

// Spider chart. Every axis runs 0 (center) to 10 (outer); outer is better.
//   fraud axes:            10 * log2(p) / -reference_rounds
//   booleans:              true at the center, false outside
//   rounds, ops, memory:   10 * (1 - value / reference)
// All scores are clamped to [0, 10].
struct SpiderOptions {
    std::vector<Attribute> axes = {Attribute::MafiaFraud, Attribute::DistanceFraud, Attribute::TerroristFraud,
                                   Attribute::Memory,     Attribute::CryptoOps,     Attribute::SlowPhase};
    std::uint32_t reference_rounds = 0;  // 0 uses the largest n among the charted instances
    double rounds_reference = 0.0;       // 0 uses 4 * reference_rounds
    double crypto_reference = 10.0;
    double memory_reference_kb = 5.0;
    bool hide_equal_axes = false;  // drop non-security axes on which all instances agree
    int size = 520;
};

inline constexpr std::size_t kMaxSpiderInstances = 6;

// Parses "ideal-128" (reference rounds) or an instance id (its n).
void apply_spider_normalization(SpiderOptions& options, const std::string& normalization, const Catalog& catalog);

double spider_score(Attribute axis, const Instance& instance, const SpiderOptions& options);
// Throws std::invalid_argument unless 1..6 instances are given.
std::string render_spider_svg(const std::vector<Instance>& instances, const SpiderOptions& options = {});

struct CurvePoint {
    std::uint32_t n = 0;
    std::string instance_id;
    double log2_value = 0.0;
};

struct Curve {
    std::string protocol;
    std::vector<CurvePoint> points;
};

std::vector<std::uint32_t> default_curve_points();  // 32, 64, ..., 256

// For each protocol and each point n, the instance with the smallest value of
// `fraud` among instances with that n (ties by parameters).
std::vector<Curve> resistance_curves(const std::vector<Instance>& instances, Attribute fraud,
                                     const std::vector<std::uint32_t>& points = default_curve_points());
std::string curves_csv(const std::vector<Curve>& curves, Attribute fraud);
std::string curves_svg(const std::vector<Curve>& curves, Attribute fraud);

}  // namespace dbeval
