#include "dbeval/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dbeval/bound.hpp"
#include "dbeval/formulas.hpp"

namespace dbeval {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_real(std::string_view s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_bool(std::string_view s, bool& out) {
    if (s == "true" || s == "yes") { out = true; return true; }
    if (s == "false" || s == "no") { out = false; return true; }
    return false;
}

std::uint64_t tree_nodes(const Params& p) {
    if (p.ell == 0 || p.ell >= 63) return 0;
    return ((std::uint64_t{1} << (p.ell + 1)) - 1) * (p.n / p.ell);
}

}  // namespace

std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::ClosedForm: return "closed-form";
        case Provenance::CitedReference: return "cited-reference";
        case Provenance::BoundOnly: return "bound-only";
        case Provenance::Estimated: return "estimated";
    }
    return "?";
}

std::optional<Provenance> parse_provenance(std::string_view s) {
    for (Provenance p : {Provenance::ClosedForm, Provenance::CitedReference, Provenance::BoundOnly,
                         Provenance::Estimated})
        if (provenance_name(p) == s) return p;
    return std::nullopt;
}

std::string_view param_key(ParamName p) {
    switch (p) {
        case ParamName::N: return "n";
        case ParamName::PF: return "p_f";
        case ParamName::PD: return "p_d";
        case ParamName::Ell: return "ell";
        case ParamName::T: return "t";
    }
    return "?";
}

std::optional<ParamName> parse_param(std::string_view s) {
    for (ParamName p : {ParamName::N, ParamName::PF, ParamName::PD, ParamName::Ell, ParamName::T})
        if (param_key(p) == s) return p;
    return std::nullopt;
}

bool param_is_probability(ParamName p) { return p == ParamName::PF || p == ParamName::PD; }

double Params::get(ParamName p) const {
    switch (p) {
        case ParamName::N: return n;
        case ParamName::PF: return p_f;
        case ParamName::PD: return p_d;
        case ParamName::Ell: return ell;
        case ParamName::T: return t;
    }
    return 0.0;
}

void Params::set(ParamName p, double v) {
    switch (p) {
        case ParamName::N: n = static_cast<std::uint32_t>(v); break;
        case ParamName::PF: p_f = v; break;
        case ParamName::PD: p_d = v; break;
        case ParamName::Ell: ell = static_cast<std::uint32_t>(v); break;
        case ParamName::T: t = static_cast<std::uint32_t>(v); break;
    }
}

TermSum TermSum::parse(std::string_view text) {
    static const std::pair<std::string_view, Term> kNames[] = {
        {"n", Term::N},         {"t", Term::T},         {"nt", Term::NT},       {"delta", Term::Delta},
        {"sigma", Term::Sigma}, {"kappa", Term::Kappa}, {"tree", Term::Tree},
    };
    TermSum sum;
    for (std::string_view part : split(text, '+')) {
        if (part.empty()) throw CatalogError("empty term in '" + std::string(text) + "'");
        std::uint64_t coef = 1;
        std::string_view sym = part;
        if (auto star = part.find('*'); star != std::string_view::npos) {
            if (!parse_u64(trim(part.substr(0, star)), coef))
                throw CatalogError("bad coefficient in '" + std::string(part) + "'");
            sym = trim(part.substr(star + 1));
        } else if (std::uint64_t k = 0; parse_u64(part, k)) {
            sum.terms_.emplace_back(k, Term::One);
            continue;
        }
        auto it = std::find_if(std::begin(kNames), std::end(kNames),
                               [&](const auto& e) { return e.first == sym; });
        if (it == std::end(kNames)) throw CatalogError("unknown term '" + std::string(sym) + "'");
        sum.terms_.emplace_back(coef, it->second);
    }
    return sum;
}

std::uint64_t TermSum::evaluate(const Params& p, const Constants& k) const {
    std::uint64_t total = 0;
    for (const auto& [coef, term] : terms_) {
        std::uint64_t v = 0;
        switch (term) {
            case Term::One: v = 1; break;
            case Term::N: v = p.n; break;
            case Term::T: v = p.t; break;
            case Term::NT: v = std::uint64_t{p.n} * p.t; break;
            case Term::Delta: v = k.delta; break;
            case Term::Sigma: v = k.sigma; break;
            case Term::Kappa: v = k.kappa; break;
            case Term::Tree: v = tree_nodes(p); break;
        }
        total += coef * v;
    }
    return total;
}

std::string TermSum::text() const {
    std::string out;
    for (const auto& [coef, term] : terms_) {
        if (!out.empty()) out += " + ";
        std::string_view sym;
        switch (term) {
            case Term::One: out += std::to_string(coef); continue;
            case Term::N: sym = "n"; break;
            case Term::T: sym = "t"; break;
            case Term::NT: sym = "nt"; break;
            case Term::Delta: sym = "delta"; break;
            case Term::Sigma: sym = "sigma"; break;
            case Term::Kappa: sym = "kappa"; break;
            case Term::Tree: sym = "tree"; break;
        }
        if (coef != 1) out += std::to_string(coef) + "*";
        out += sym;
    }
    return out;
}

const FormulaBinding& ProtocolDescriptor::binding(Attribute a) const {
    switch (a) {
        case Attribute::MafiaFraud: return p_m;
        case Attribute::DistanceFraud: return p_d;
        case Attribute::TerroristFraud: return p_t;
        default: throw std::invalid_argument("not a probability attribute");
    }
}

FormulaUnavailable::FormulaUnavailable(std::string protocol, Attribute attribute, std::string evaluator,
                                       std::string reference)
    : std::runtime_error(protocol + " " + std::string(attribute_key(attribute)) + ": formula '" +
                         evaluator + "' unavailable" +
                         (reference.empty() ? std::string() : " (cited reference: " + reference + ")")),
      protocol_(std::move(protocol)),
      attribute_(attribute),
      reference_(std::move(reference)) {}

const std::map<std::string, Formula, std::less<>>& builtin_formulas() {
    using namespace formulas;
    static const std::map<std::string, Formula, std::less<>> kFormulas = {
        {"one", &one},
        {"half_pow_n", &half_pow_n},
        {"three_quarters_pow_n", &three_quarters_pow_n},
        {"seven_eighths_pow_n", &seven_eighths_pow_n},
        {"mp_mafia", &mp_mafia},
        {"mp_distance", &mp_distance},
        {"tree_mafia", &tree_mafia},
        {"tree_distance", &tree_distance},
        {"poulidor_mafia", &poulidor_mafia},
        {"poulidor_distance", &poulidor_distance},
        {"ykhl_mafia", &ykhl_mafia},
        {"ka_mafia", &ka_mafia},
        {"ka_distance", &ka_distance},
        {"ski_mafia", &ski_mafia},
        {"ski_terrorist", &ski_terrorist},
        {"tma_fraud", &tma_fraud},
    };
    return kFormulas;
}

namespace {

std::vector<double> parse_grid(std::string_view spec, ParamName name, const std::string& where) {
    const auto dots = spec.find("..");
    if (dots == std::string_view::npos) throw CatalogError(where + ": grid needs 'lo..hi'");
    const std::string_view lo_s = trim(spec.substr(0, dots));
    std::string_view hi_s = trim(spec.substr(dots + 2));
    std::vector<double> values;
    if (param_is_probability(name)) {
        const auto slash = hi_s.find('/');
        std::uint64_t steps = 0;
        double lo = 0, hi = 0;
        if (slash == std::string_view::npos || !parse_real(lo_s, lo) ||
            !parse_real(trim(hi_s.substr(0, slash)), hi) || !parse_u64(trim(hi_s.substr(slash + 1)), steps) ||
            steps == 0 || lo < 0 || hi > 1 || lo > hi)
            throw CatalogError(where + ": probability grid must be 'lo..hi/steps' within [0, 1]");
        for (std::uint64_t i = 0; i <= steps; ++i)
            values.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps));
    } else {
        std::uint64_t lo = 0, hi = 0;
        if (!parse_u64(lo_s, lo) || !parse_u64(hi_s, hi) || lo > hi || (name == ParamName::Ell && lo == 0) ||
            (name == ParamName::T && lo < 2) || hi > 100000)
            throw CatalogError(where + ": integer grid must be 'lo..hi' with valid bounds");
        for (std::uint64_t v = lo; v <= hi; ++v) values.push_back(static_cast<double>(v));
    }
    return values;
}

struct Section {
    std::string name;
    std::size_t line = 0;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<std::size_t> lines;
};

ProtocolDescriptor build_descriptor(const Section& sec, const std::string& origin) {
    ProtocolDescriptor d;
    d.name = sec.name;
    std::map<std::string, std::string, std::less<>> kv;
    for (std::size_t i = 0; i < sec.entries.size(); ++i) {
        const auto& [k, v] = sec.entries[i];
        if (!kv.emplace(k, v).second)
            throw CatalogError(origin + ":" + std::to_string(sec.lines[i]) + ": duplicate key '" + k + "'");
    }
    const std::string where = origin + ": [" + sec.name + "]";
    auto take = [&](std::string_view key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto require = [&](std::string_view key) {
        auto v = take(key);
        if (!v) throw CatalogError(where + ": missing '" + std::string(key) + "'");
        return *v;
    };

    if (auto a = take("aliases"))
        for (auto s : split(*a, ',')) d.aliases.emplace_back(s);

    const auto param_list = split(require("params"), ',');
    for (std::string_view pn : param_list) {
        auto name = parse_param(pn);
        if (!name) throw CatalogError(where + ": unknown parameter '" + std::string(pn) + "'");
        if (d.params.empty() && *name != ParamName::N) throw CatalogError(where + ": first parameter must be n");
        ParamGrid g{*name, {}};
        g.values = parse_grid(require("grid." + std::string(pn)), *name, where + " grid." + std::string(pn));
        d.params.push_back(std::move(g));
    }

    auto binding = [&](std::string_view attr) {
        FormulaBinding b;
        b.evaluator = require(attr);
        if (auto r = take(std::string(attr) + ".reference")) {
            b.reference = *r;
            b.provenance = Provenance::CitedReference;
        }
        if (auto p = take(std::string(attr) + ".provenance")) {
            auto pv = parse_provenance(*p);
            if (!pv) throw CatalogError(where + ": unknown provenance '" + *p + "'");
            b.provenance = *pv;
        }
        return b;
    };
    d.p_m = binding("p_m");
    d.p_d = binding("p_d");
    d.p_t = binding("p_t");

    try {
        d.rounds = TermSum::parse(require("rounds"));
        d.memory = TermSum::parse(require("memory"));
    } catch (const CatalogError& e) {
        throw CatalogError(where + ": " + e.what());
    }
    if (auto p = take("rounds.provenance")) {
        auto pv = parse_provenance(*p);
        if (!pv) throw CatalogError(where + ": unknown provenance '" + *p + "'");
        d.rounds_provenance = *pv;
    }
    if (!parse_u64(require("crypto_ops"), d.crypto_ops)) throw CatalogError(where + ": bad crypto_ops");
    if (!parse_bool(require("slow_phase"), d.slow_phase)) throw CatalogError(where + ": bad slow_phase");
    if (!parse_bool(require("multi_bit"), d.multi_bit)) throw CatalogError(where + ": bad multi_bit");
    for (auto [key, slot] : {std::pair{"delta", &d.delta_override}, std::pair{"sigma", &d.sigma_override}}) {
        if (auto v = take(key)) {
            std::uint64_t x = 0;
            if (!parse_u64(*v, x)) throw CatalogError(where + ": bad " + key);
            *slot = x;
        }
    }
    if (!kv.empty()) throw CatalogError(where + ": unknown key '" + kv.begin()->first + "'");
    return d;
}

}  // namespace

Catalog Catalog::builtin() { return parse(builtin_catalog_text(), "<builtin catalog>"); }

Catalog Catalog::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open catalog '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

Catalog Catalog::parse(std::string_view text, std::string_view origin_view) {
    const std::string origin(origin_view);
    std::vector<Section> sections;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string at = origin + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) throw CatalogError(at + ": malformed section header");
            sections.push_back({std::string(trim(line.substr(1, line.size() - 2))), line_no, {}, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw CatalogError(at + ": expected 'key = value'");
        if (sections.empty()) throw CatalogError(at + ": entry outside a section");
        sections.back().entries.emplace_back(std::string(trim(line.substr(0, eq))),
                                             std::string(trim(line.substr(eq + 1))));
        sections.back().lines.push_back(line_no);
    }

    Catalog c;
    c.formulas_ = builtin_formulas();
    for (const Section& sec : sections) {
        if (sec.name == "constants") {
            for (const auto& [k, v] : sec.entries) {
                std::uint64_t x = 0;
                if (!parse_u64(v, x)) throw CatalogError(origin + ": [constants]: bad value for '" + k + "'");
                if (k == "delta") c.constants_.delta = x;
                else if (k == "sigma") c.constants_.sigma = x;
                else if (k == "kappa") c.constants_.kappa = x;
                else throw CatalogError(origin + ": [constants]: unknown key '" + k + "'");
            }
            continue;
        }
        ProtocolDescriptor d = build_descriptor(sec, origin);
        if (c.find(d.name)) throw CatalogError(origin + ": duplicate protocol '" + d.name + "'");
        for (const auto& a : d.aliases)
            if (c.find(a)) throw CatalogError(origin + ": duplicate protocol alias '" + a + "'");
        c.protocols_.push_back(std::move(d));
    }
    if (c.protocols_.empty()) throw CatalogError(origin + ": no protocols defined");
    return c;
}

const ProtocolDescriptor* Catalog::find(std::string_view name) const {
    for (const auto& d : protocols_) {
        if (d.name == name) return &d;
        for (const auto& a : d.aliases)
            if (a == name) return &d;
    }
    return nullptr;
}

const ProtocolDescriptor& Catalog::at(std::string_view name) const {
    if (const auto* d = find(name)) return *d;
    throw UnknownProtocol("unknown protocol '" + std::string(name) + "'");
}

Constants Catalog::constants_for(const ProtocolDescriptor& d) const {
    Constants k = constants_;
    if (d.delta_override) k.delta = *d.delta_override;
    if (d.sigma_override) k.sigma = *d.sigma_override;
    return k;
}

void Catalog::install_formula(const std::string& name, Formula f) { formulas_[name] = f; }

void Catalog::remove_formula(std::string_view name) {
    if (auto it = formulas_.find(name); it != formulas_.end()) formulas_.erase(it);
}

double Catalog::evaluate_probability(const ProtocolDescriptor& d, Attribute a, const Params& p) const {
    const FormulaBinding& b = d.binding(a);
    auto it = formulas_.find(b.evaluator);
    if (it == formulas_.end()) throw FormulaUnavailable(d.name, a, b.evaluator, b.reference);
    return it->second(p);
}

AttributeVector Catalog::evaluate(const ProtocolDescriptor& d, const Params& p) const {
    const Constants k = constants_for(d);
    AttributeVector v;
    v.log2_p_m = evaluate_probability(d, Attribute::MafiaFraud, p);
    v.log2_p_d = evaluate_probability(d, Attribute::DistanceFraud, p);
    v.log2_p_t = evaluate_probability(d, Attribute::TerroristFraud, p);
    v.rounds = d.rounds.evaluate(p, k);
    v.crypto_ops = d.crypto_ops;
    v.memory_bits = d.memory.evaluate(p, k);
    v.slow_phase = d.slow_phase;
    v.multi_bit = d.multi_bit;
    return v;
}

std::vector<Params> Catalog::parameter_grid(const ProtocolDescriptor& d) const {
    std::vector<Params> out{Params{}};
    for (const ParamGrid& g : d.params) {
        std::vector<Params> next;
        next.reserve(out.size() * g.values.size());
        for (const Params& base : out)
            for (double v : g.values) {
                Params p = base;
                p.set(g.name, v);
                next.push_back(p);
            }
        out = std::move(next);
    }
    return out;
}

Instance Catalog::make_instance(const ProtocolDescriptor& d, const Params& p) const {
    return Instance{format_id(d, p), d.name, p, evaluate(d, p)};
}

std::vector<Instance> Catalog::generate(const std::vector<std::string>& only) const {
    for (const auto& name : only) at(name);
    std::vector<Instance> out;
    for (const auto& d : protocols_) {
        if (!only.empty() && std::none_of(only.begin(), only.end(),
                                          [&](const std::string& s) { return find(s) == &d; }))
            continue;
        for (const Params& p : parameter_grid(d)) out.push_back(make_instance(d, p));
    }
    return out;
}

std::string Catalog::format_id(const ProtocolDescriptor& d, const Params& p) const {
    std::string id = d.name + "-{";
    for (std::size_t i = 0; i < d.params.size(); ++i) {
        if (i) id += ',';
        const ParamName name = d.params[i].name;
        if (param_is_probability(name)) id += format_decimal(p.get(name));
        else id += std::to_string(static_cast<std::uint64_t>(p.get(name)));
    }
    return id + "}";
}

Instance Catalog::instance(std::string_view id) const {
    const auto open = id.rfind("-{");
    if (open == std::string_view::npos || id.empty() || id.back() != '}')
        throw UnknownInstance("malformed instance id '" + std::string(id) + "'");
    const ProtocolDescriptor* d = find(id.substr(0, open));
    if (!d) throw UnknownInstance("unknown protocol in instance id '" + std::string(id) + "'");
    const auto fields = split(id.substr(open + 2, id.size() - open - 3), ',');
    if (fields.size() != d->params.size())
        throw UnknownInstance("instance id '" + std::string(id) + "' has the wrong number of parameters");
    Params p;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        double v = 0;
        if (!parse_real(fields[i], v))
            throw UnknownInstance("bad parameter '" + std::string(fields[i]) + "' in '" + std::string(id) + "'");
        const auto& grid = d->params[i].values;
        auto hit = std::find_if(grid.begin(), grid.end(), [&](double g) { return std::fabs(g - v) < 1e-9; });
        if (hit == grid.end())
            throw UnknownInstance("instance '" + std::string(id) + "' is not on the parameter grid");
        p.set(d->params[i].name, *hit);
    }
    return make_instance(*d, p);
}

bool instance_less(const Instance& a, const Instance& b) {
    if (a.protocol != b.protocol) return a.protocol < b.protocol;
    return a.params < b.params;
}

}  // namespace dbeval
