#include "dbeval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace dbeval {

std::optional<int> scale_security(double log2_p) {
    if (std::isinf(log2_p) && log2_p < 0) return std::nullopt;
    // Absorb floating noise so that exact powers of two keep their exponent.
    const double k = std::ceil(log2_p - 1e-9);
    return static_cast<int>(k) + 0;
}

std::uint64_t scale_memory(std::uint64_t bits) { return bits / 1024; }

ScaledRow scale_row(const Instance& instance, std::size_t total) {
    const AttributeVector& a = instance.attrs;
    return ScaledRow{instance.id,
                     instance.protocol,
                     instance.params.n,
                     scale_security(a.log2_p_m),
                     scale_security(a.log2_p_d),
                     scale_security(a.log2_p_t),
                     a.multi_bit,
                     a.crypto_ops,
                     scale_memory(a.memory_bits),
                     a.slow_phase,
                     total};
}

ReportBlock report_block(const std::vector<Instance>& instances, const Bound& y, const ReportOptions& options) {
    const SolutionSet set = nondominated(filter_mafia_bound(instances, y.log2_value), options.engine);
    ReportBlock block{y, {}};
    for (const Representative& r : representatives(set, options.rule))
        block.rows.push_back(scale_row(r.instance, r.total));
    return block;
}

std::optional<TableFormat> parse_table_format(std::string_view s) {
    if (s == "text" || s == "table") return TableFormat::Text;
    if (s == "csv") return TableFormat::Csv;
    if (s == "json") return TableFormat::Json;
    return std::nullopt;
}

namespace {

std::string exponent_text(const std::optional<int>& e) { return e ? "2^" + std::to_string(*e) : "0"; }

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

nlohmann::json log2_json(double v) {
    if (std::isinf(v)) return nullptr;
    return v;
}

std::string params_text(const std::string& id) {
    const auto open = id.rfind("-{");
    return open == std::string::npos ? std::string() : id.substr(open + 1);
}

}  // namespace

nlohmann::json scaled_row_json(const ScaledRow& r) {
    return nlohmann::json{{"id", r.id},
                          {"protocol", r.protocol},
                          {"n", r.n},
                          {"p_m", exponent_text(r.p_m)},
                          {"p_d", exponent_text(r.p_d)},
                          {"p_t", exponent_text(r.p_t)},
                          {"multi_bit", r.multi_bit},
                          {"crypto_ops", r.crypto_ops},
                          {"memory_kb", r.memory_kb},
                          {"slow_phase", r.slow_phase},
                          {"total", r.total}};
}

std::string render_report(const std::vector<ReportBlock>& blocks, TableFormat format) {
    std::ostringstream out;
    switch (format) {
        case TableFormat::Text: {
            char line[256];
            std::snprintf(line, sizeof line, "%-8s %-20s %5s %8s %8s %8s %-6s %2s %8s %-6s %6s\n", "y",
                          "instance", "n", "p_m", "p_d", "p_t", "b", "c", "s", "f", "total");
            out << line;
            for (const auto& b : blocks) {
                bool first = true;
                for (const auto& r : b.rows) {
                    std::snprintf(line, sizeof line, "%-8s %-20s %5u %8s %8s %8s %-6s %2llu %6lluKb %-6s %6zu\n",
                                  first ? b.y.text().c_str() : "", r.id.c_str(), r.n, exponent_text(r.p_m).c_str(),
                                  exponent_text(r.p_d).c_str(), exponent_text(r.p_t).c_str(),
                                  bool_text(r.multi_bit), static_cast<unsigned long long>(r.crypto_ops),
                                  static_cast<unsigned long long>(r.memory_kb), bool_text(r.slow_phase), r.total);
                    out << line;
                    first = false;
                }
                if (b.rows.empty()) out << b.y.text() << " (no instance meets the bound)\n";
            }
            out << "b: multi-bit, c: crypto ops, s: memory, f: final slow phase\n";
            break;
        }
        case TableFormat::Csv:
            out << "y,instance,n,p_m,p_d,p_t,b,c,s_kb,f,total\n";
            for (const auto& b : blocks)
                for (const auto& r : b.rows)
                    out << b.y.text() << ',' << csv_field(r.id) << ',' << r.n << ',' << exponent_text(r.p_m) << ','
                        << exponent_text(r.p_d) << ',' << exponent_text(r.p_t) << ',' << bool_text(r.multi_bit)
                        << ',' << r.crypto_ops << ',' << r.memory_kb << ',' << bool_text(r.slow_phase) << ','
                        << r.total << '\n';
            break;
        case TableFormat::Json: {
            nlohmann::json doc = nlohmann::json::array();
            for (const auto& b : blocks) {
                nlohmann::json rows = nlohmann::json::array();
                for (const auto& r : b.rows) rows.push_back(scaled_row_json(r));
                doc.push_back({{"y", b.y.text()}, {"rows", rows}});
            }
            out << doc.dump(2) << '\n';
            break;
        }
    }
    return out.str();
}

std::string instances_csv(const std::vector<Instance>& instances, const std::set<std::string>* nondominated) {
    std::ostringstream out;
    out.precision(17);
    out << "id,protocol,params,log2_p_m,log2_p_d,log2_p_t,e,c,m_bits,s,b,scaled_p_m,scaled_p_d,scaled_p_t,m_kb";
    if (nondominated) out << ",nondominated";
    out << '\n';
    for (const Instance& i : instances) {
        const AttributeVector& a = i.attrs;
        const ScaledRow r = scale_row(i);
        out << csv_field(i.id) << ',' << i.protocol << ',' << csv_field(params_text(i.id)) << ',' << a.log2_p_m
            << ',' << a.log2_p_d << ',' << a.log2_p_t << ',' << a.rounds << ',' << a.crypto_ops << ','
            << a.memory_bits << ',' << bool_text(a.slow_phase) << ',' << bool_text(a.multi_bit) << ','
            << exponent_text(r.p_m) << ',' << exponent_text(r.p_d) << ',' << exponent_text(r.p_t) << ','
            << r.memory_kb;
        if (nondominated) out << ',' << bool_text(nondominated->count(i.id) > 0);
        out << '\n';
    }
    return out.str();
}

nlohmann::json instance_json(const Instance& i, const Catalog* catalog) {
    const AttributeVector& a = i.attrs;
    const ScaledRow r = scale_row(i);
    nlohmann::json params = nlohmann::json::object();
    if (catalog) {
        if (const auto* d = catalog->find(i.protocol))
            for (const auto& g : d->params) {
                if (param_is_probability(g.name)) params[std::string(param_key(g.name))] = i.params.get(g.name);
                else params[std::string(param_key(g.name))] = static_cast<std::uint64_t>(i.params.get(g.name));
            }
    } else {
        params["n"] = i.params.n;
    }
    nlohmann::json doc{
        {"id", i.id},
        {"protocol", i.protocol},
        {"params", params},
        {"raw",
         {{"log2_p_m", log2_json(a.log2_p_m)},
          {"log2_p_d", log2_json(a.log2_p_d)},
          {"log2_p_t", log2_json(a.log2_p_t)},
          {"rounds", a.rounds},
          {"crypto_ops", a.crypto_ops},
          {"memory_bits", a.memory_bits},
          {"slow_phase", a.slow_phase},
          {"multi_bit", a.multi_bit}}},
        {"scaled",
         {{"p_m", exponent_text(r.p_m)},
          {"p_d", exponent_text(r.p_d)},
          {"p_t", exponent_text(r.p_t)},
          {"memory_kb", r.memory_kb}}},
    };
    if (catalog) {
        if (const auto* d = catalog->find(i.protocol)) {
            nlohmann::json prov = nlohmann::json::object();
            for (Attribute at : {Attribute::MafiaFraud, Attribute::DistanceFraud, Attribute::TerroristFraud}) {
                const FormulaBinding& b = d->binding(at);
                nlohmann::json e{{"kind", provenance_name(b.provenance)}};
                if (!b.reference.empty()) e["reference"] = b.reference;
                prov[std::string(attribute_key(at))] = e;
            }
            prov["e"] = {{"kind", provenance_name(d->rounds_provenance)}};
            doc["provenance"] = prov;
        }
    }
    return doc;
}

nlohmann::json instances_json(const std::vector<Instance>& instances, const std::set<std::string>* nondominated) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Instance& i : instances) {
        nlohmann::json doc = instance_json(i);
        if (nondominated) doc["nondominated"] = nondominated->count(i.id) > 0;
        arr.push_back(std::move(doc));
    }
    return arr;
}

void apply_spider_normalization(SpiderOptions& options, const std::string& normalization, const Catalog& catalog) {
    if (normalization.empty()) return;
    const std::string prefix = "ideal-";
    if (normalization.rfind(prefix, 0) == 0) {
        const std::string digits = normalization.substr(prefix.size());
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6)
            throw std::invalid_argument("bad normalization '" + normalization + "'");
        options.reference_rounds = static_cast<std::uint32_t>(std::stoul(digits));
        if (options.reference_rounds == 0) throw std::invalid_argument("normalization needs at least one round");
        return;
    }
    options.reference_rounds = catalog.instance(normalization).params.n;
}

namespace {

std::uint32_t reference_rounds(const std::vector<Instance>& instances, const SpiderOptions& o) {
    if (o.reference_rounds) return o.reference_rounds;
    std::uint32_t n = 1;
    for (const auto& i : instances) n = std::max(n, i.params.n);
    return n;
}

double clamp10(double v) { return std::clamp(v, 0.0, 10.0); }

double score_with(Attribute axis, const Instance& i, const SpiderOptions& o, std::uint32_t ref_rounds) {
    const AttributeVector& a = i.attrs;
    switch (attribute_kind(axis)) {
        case AttributeKind::Probability: {
            const double v = a.value(axis);
            if (std::isinf(v)) return 10.0;
            return clamp10(10.0 * v / -static_cast<double>(ref_rounds));
        }
        case AttributeKind::Boolean:
            return a.value(axis) != 0.0 ? 0.0 : 10.0;
        case AttributeKind::Memory:
            return clamp10(10.0 * (1.0 - static_cast<double>(scale_memory(a.memory_bits)) / o.memory_reference_kb));
        case AttributeKind::Count: {
            if (axis == Attribute::CryptoOps)
                return clamp10(10.0 * (1.0 - static_cast<double>(a.crypto_ops) / o.crypto_reference));
            const double ref = o.rounds_reference > 0 ? o.rounds_reference : 4.0 * ref_rounds;
            return clamp10(10.0 * (1.0 - static_cast<double>(a.rounds) / ref));
        }
    }
    return 0.0;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
                                "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#843c39"};
constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

}  // namespace

double spider_score(Attribute axis, const Instance& instance, const SpiderOptions& options) {
    return score_with(axis, instance, options, reference_rounds({instance}, options));
}

std::string render_spider_svg(const std::vector<Instance>& instances, const SpiderOptions& options) {
    if (instances.empty() || instances.size() > kMaxSpiderInstances)
        throw std::invalid_argument("spider charts take 1 to " + std::to_string(kMaxSpiderInstances) +
                                    " instances, got " + std::to_string(instances.size()));
    const std::uint32_t ref = reference_rounds(instances, options);

    std::vector<Attribute> axes;
    for (Attribute a : options.axes) {
        if (options.hide_equal_axes && attribute_kind(a) != AttributeKind::Probability) {
            const double first = score_with(a, instances.front(), options, ref);
            if (std::all_of(instances.begin(), instances.end(),
                            [&](const Instance& i) { return score_with(a, i, options, ref) == first; }))
                continue;
        }
        axes.push_back(a);
    }
    if (axes.size() < 3) throw std::invalid_argument("spider charts need at least three axes");

    const double size = options.size;
    const double cx = size / 2.0, cy = size / 2.0 + 20.0;
    const double radius = size * 0.32;
    const double pi = std::acos(-1.0);
    auto point = [&](std::size_t k, double score) {
        const double angle = -pi / 2.0 + 2.0 * pi * static_cast<double>(k) / static_cast<double>(axes.size());
        const double r = radius * score / 10.0;
        return std::pair{cx + r * std::cos(angle), cy + r * std::sin(angle)};
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.size << "\" height=\""
        << options.size + 40 << "\" viewBox=\"0 0 " << options.size << ' ' << options.size + 40
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int ring = 2; ring <= 10; ring += 2) {
        svg << "<polygon fill=\"none\" stroke=\"#cccccc\" points=\"";
        for (std::size_t k = 0; k < axes.size(); ++k) {
            auto [x, y] = point(k, ring);
            svg << (k ? " " : "") << fmt(x) << ',' << fmt(y);
        }
        svg << "\"/>\n";
    }
    for (std::size_t k = 0; k < axes.size(); ++k) {
        auto [x, y] = point(k, 10.0);
        auto [lx, ly] = point(k, 11.5);
        svg << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(cy) << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#999999\"/>\n";
        svg << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\" text-anchor=\"middle\">"
            << xml_escape(std::string(attribute_label(axes[k]))) << "</text>\n";
    }
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < axes.size(); ++k) {
            auto [x, y] = point(k, score_with(axes[k], instances[i], options, ref));
            svg << (k ? " " : "") << fmt(x) << ',' << fmt(y);
        }
        svg << "\"/>\n";
        svg << "<rect x=\"10\" y=\"" << 10 + 16 * i << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"28\" y=\"" << 21 + 16 * i << "\">" << xml_escape(instances[i].id) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(size - 10) << "\" y=\"21\" text-anchor=\"end\">reference: " << ref
        << " rounds</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::uint32_t> default_curve_points() {
    std::vector<std::uint32_t> pts;
    for (std::uint32_t n = 32; n <= 256; n += 32) pts.push_back(n);
    return pts;
}

std::vector<Curve> resistance_curves(const std::vector<Instance>& instances, Attribute fraud,
                                     const std::vector<std::uint32_t>& points) {
    if (attribute_kind(fraud) != AttributeKind::Probability)
        throw std::invalid_argument("curves need a fraud attribute (p_m, p_d or p_t)");
    std::map<std::string, std::map<std::uint32_t, const Instance*>> best;
    const std::set<std::uint32_t> wanted(points.begin(), points.end());
    for (const Instance& i : instances) {
        if (!wanted.count(i.params.n)) continue;
        const Instance*& slot = best[i.protocol][i.params.n];
        if (!slot) {
            slot = &i;
            continue;
        }
        const double v = i.attrs.value(fraud), w = slot->attrs.value(fraud);
        if (v < w || (v == w && i.params < slot->params)) slot = &i;
    }
    std::vector<Curve> curves;
    for (const auto& [protocol, by_n] : best) {
        Curve c{protocol, {}};
        for (const auto& [n, inst] : by_n) c.points.push_back({n, inst->id, inst->attrs.value(fraud)});
        curves.push_back(std::move(c));
    }
    return curves;
}

std::string curves_csv(const std::vector<Curve>& curves, Attribute fraud) {
    std::ostringstream out;
    out.precision(17);
    out << "protocol,n,instance,log2_" << attribute_key(fraud) << ",scaled\n";
    for (const auto& c : curves)
        for (const auto& p : c.points)
            out << c.protocol << ',' << p.n << ',' << csv_field(p.instance_id) << ',' << p.log2_value << ','
                << exponent_text(scale_security(p.log2_value)) << '\n';
    return out.str();
}

std::string curves_svg(const std::vector<Curve>& curves, Attribute fraud) {
    const double width = 720, height = 480, left = 70, right = 150, top = 30, bottom = 50;
    double lo = 0.0;
    std::uint32_t nmin = 0, nmax = 1;
    bool any = false;
    for (const auto& c : curves)
        for (const auto& p : c.points) {
            if (!std::isinf(p.log2_value)) lo = std::min(lo, p.log2_value);
            nmin = any ? std::min(nmin, p.n) : p.n;
            nmax = any ? std::max(nmax, p.n) : p.n;
            any = true;
        }
    if (nmax == nmin) nmax = nmin + 1;
    lo = std::floor(lo / 32.0) * 32.0;
    if (lo == 0.0) lo = -32.0;
    auto px = [&](double n) { return left + (width - left - right) * (n - nmin) / double(nmax - nmin); };
    auto py = [&](double v) { return top + (height - top - bottom) * (std::max(v, lo) / lo); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << fmt(py(lo)) << "\" x2=\"" << width - right << "\" y2=\""
        << fmt(py(lo)) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << fmt(py(lo))
        << "\" stroke=\"black\"/>\n";
    for (double v = 0.0; v >= lo; v -= 32.0)
        svg << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(v) + 4) << "\" text-anchor=\"end\">2^"
            << static_cast<long long>(v) << "</text>\n";
    std::set<std::uint32_t> ticks;
    for (const auto& c : curves)
        for (const auto& p : c.points) ticks.insert(p.n);
    for (auto n : ticks)
        svg << "<text x=\"" << fmt(px(n)) << "\" y=\"" << fmt(py(lo) + 18) << "\" text-anchor=\"middle\">" << n
            << "</text>\n";
    svg << "<text x=\"" << fmt((left + width - right) / 2) << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\">n</text>\n";
    svg << "<text x=\"14\" y=\"" << fmt(top - 10) << "\">" << xml_escape(std::string(attribute_label(fraud)))
        << "</text>\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (const auto& p : curves[i].points) {
            svg << (first ? "" : " ") << fmt(px(p.n)) << ',' << fmt(py(p.log2_value));
            first = false;
        }
        svg << "\"/>\n";
        svg << "<rect x=\"" << width - right + 12 << "\" y=\"" << top + 16 * i << "\" width=\"12\" height=\"12\" fill=\""
            << color << "\"/>\n";
        svg << "<text x=\"" << width - right + 30 << "\" y=\"" << top + 11 + 16 * i << "\">"
            << xml_escape(curves[i].protocol) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace dbeval
