#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dbeval/attributes.hpp"

namespace dbeval {

enum class Provenance { ClosedForm, CitedReference, BoundOnly, Estimated };

std::string_view provenance_name(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view s);

enum class ParamName { N, PF, PD, Ell, T };

std::string_view param_key(ParamName p);
std::optional<ParamName> parse_param(std::string_view s);
bool param_is_probability(ParamName p);

// Union of every protocol parameter. A protocol's schema lists the ones it uses.
struct Params {
    std::uint32_t n = 0;
    double p_f = 0.0;        // MP: probability of a fault-signalling challenge
    double p_d = 0.0;        // KA: probability that a challenge is predefined
    std::uint32_t ell = 0;   // Tree: depth of each tree
    std::uint32_t t = 0;     // SKI: alphabet size

    double get(ParamName p) const;
    void set(ParamName p, double v);

    auto operator<=>(const Params&) const = default;
    bool operator==(const Params&) const = default;
};

struct Constants {
    std::uint64_t delta = 128;  // nonce length
    std::uint64_t sigma = 128;  // signature / MAC length
    std::uint64_t kappa = 128;  // key length

    bool operator==(const Constants&) const = default;
};

// Non-negative linear combination of named terms, e.g. "2*n + 3*sigma".
class TermSum {
public:
    enum class Term { One, N, T, NT, Delta, Sigma, Kappa, Tree };

    static TermSum parse(std::string_view text);

    std::uint64_t evaluate(const Params& p, const Constants& k) const;
    std::string text() const;

private:
    std::vector<std::pair<std::uint64_t, Term>> terms_;
};

struct FormulaBinding {
    std::string evaluator;
    Provenance provenance = Provenance::ClosedForm;
    std::string reference;  // empty for closed-form formulas
};

struct ParamGrid {
    ParamName name = ParamName::N;
    std::vector<double> values;
};

struct ProtocolDescriptor {
    std::string name;
    std::vector<std::string> aliases;
    std::vector<ParamGrid> params;  // id order; n first
    FormulaBinding p_m, p_d, p_t;
    TermSum rounds;
    Provenance rounds_provenance = Provenance::ClosedForm;
    std::uint64_t crypto_ops = 0;
    TermSum memory;
    bool slow_phase = false;
    bool multi_bit = false;
    std::optional<std::uint64_t> delta_override, sigma_override;

    const FormulaBinding& binding(Attribute probability_attribute) const;
};

struct Instance {
    std::string id;
    std::string protocol;
    Params params;
    AttributeVector attrs;
};

class CatalogError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class UnknownProtocol : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class UnknownInstance : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a protocol refers to an evaluator that is not installed.
class FormulaUnavailable : public std::runtime_error {
public:
    FormulaUnavailable(std::string protocol, Attribute attribute, std::string evaluator,
                       std::string reference);
    const std::string& protocol() const { return protocol_; }
    Attribute attribute() const { return attribute_; }
    const std::string& reference() const { return reference_; }

private:
    std::string protocol_;
    Attribute attribute_;
    std::string reference_;
};

// Returns log2 of a probability for the given parameters.
using Formula = double (*)(const Params&);

const std::map<std::string, Formula, std::less<>>& builtin_formulas();

std::string_view builtin_catalog_text();

class Catalog {
public:
    static Catalog builtin();
    static Catalog parse(std::string_view text, std::string_view origin = "<catalog>");
    static Catalog load(const std::filesystem::path& path);

    const std::vector<ProtocolDescriptor>& protocols() const { return protocols_; }
    const ProtocolDescriptor* find(std::string_view name) const;  // names and aliases
    const ProtocolDescriptor& at(std::string_view name) const;    // throws UnknownProtocol

    const Constants& constants() const { return constants_; }
    void set_constants(const Constants& k) { constants_ = k; }
    Constants constants_for(const ProtocolDescriptor& d) const;

    void install_formula(const std::string& name, Formula f);
    void remove_formula(std::string_view name);

    AttributeVector evaluate(const ProtocolDescriptor& d, const Params& p) const;
    std::vector<Params> parameter_grid(const ProtocolDescriptor& d) const;
    Instance make_instance(const ProtocolDescriptor& d, const Params& p) const;

    // All instances of the given protocols (all when empty), roster order then grid order.
    std::vector<Instance> generate(const std::vector<std::string>& only = {}) const;

    std::string format_id(const ProtocolDescriptor& d, const Params& p) const;
    // Parses "Name-{a,b}" and evaluates it; throws UnknownInstance off the grid.
    Instance instance(std::string_view id) const;

private:
    std::vector<ProtocolDescriptor> protocols_;
    Constants constants_;
    std::map<std::string, Formula, std::less<>> formulas_;

    double evaluate_probability(const ProtocolDescriptor& d, Attribute a, const Params& p) const;
};

// Orders instances by protocol name, then by parameters.
bool instance_less(const Instance& a, const Instance& b);

}  // namespace dbeval
