#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "dbeval/report.hpp"

using namespace dbeval;

TEST_CASE("security scaling rounds up to a power of two") {
    CHECK(scale_security(-16.0) == -16);
    CHECK(scale_security(-16.0000000001) == -16);
    CHECK(scale_security(-15.2) == -15);
    CHECK(scale_security(-16.99) == -16);
    CHECK(scale_security(0.0) == 0);
    CHECK(scale_security(-0.3) == 0);
    CHECK_FALSE(scale_security(-std::numeric_limits<double>::infinity()).has_value());
}

TEST_CASE("memory scaling truncates to kilobits") {
    CHECK(scale_memory(0) == 0);
    CHECK(scale_memory(1023) == 0);
    CHECK(scale_memory(1024) == 1);
    CHECK(scale_memory(1311126) == 1280);
}

TEST_CASE("scaled rows") {
    const Catalog c = Catalog::builtin();
    const ScaledRow r = scale_row(c.instance("Tree-{24,6}"), 7);
    CHECK(r.id == "Tree-{24,6}");
    CHECK(r.n == 24);
    CHECK(r.p_m == -16);
    CHECK(r.p_d == -10);
    CHECK(r.p_t == 0);
    CHECK(r.memory_kb == 0);
    CHECK(r.crypto_ops == 1);
    CHECK_FALSE(r.slow_phase);
    CHECK(r.total == 7);
}

TEST_CASE("report rendering") {
    const auto all = Catalog::builtin().generate({"BC"});
    const ReportBlock b = report_block(all, parse_bound("2^-16"));
    REQUIRE(b.rows.size() == 1);
    CHECK(b.rows[0].id == "BC-{16}");

    const std::string text = render_report({b}, TableFormat::Text);
    CHECK(text.find("2^-16") != std::string::npos);
    CHECK(text.find("BC-{16}") != std::string::npos);

    const std::string csv = render_report({b}, TableFormat::Csv);
    CHECK(csv == "y,instance,n,p_m,p_d,p_t,b,c,s_kb,f,total\n2^-16,BC-{16},16,2^-16,2^-16,2^0,false,2,0,true,241\n");

    const auto json = nlohmann::json::parse(render_report({b}, TableFormat::Json));
    CHECK(json[0]["y"] == "2^-16");
    CHECK(json[0]["rows"][0]["total"] == 241);
    CHECK(json[0]["rows"][0]["p_m"] == "2^-16");
}

TEST_CASE("instance exports carry raw and scaled values") {
    const Catalog c = Catalog::builtin();
    const std::vector<Instance> xs = {c.instance("Tree-{16,8}"), c.instance("BC-{16}")};
    const std::set<std::string> nd = {"BC-{16}"};
    const std::string csv = instances_csv(xs, &nd);
    CHECK(csv.rfind("id,protocol,params,log2_p_m,", 0) == 0);
    CHECK(csv.find(",nondominated\n") != std::string::npos);
    CHECK(csv.find("\"Tree-{16,8}\",Tree,\"{16,8}\",") != std::string::npos);
    CHECK(csv.find("BC-{16},BC,{16},-16,-16,0,32,2,416,true,false,2^-16,2^-16,2^0,0,true\n") != std::string::npos);

    const auto j = instance_json(c.instance("KA-{22,0.55}"), &c);
    CHECK(j["params"]["n"] == 22);
    CHECK(j["params"]["p_d"] == 0.55);
    CHECK(j["scaled"]["p_m"] == "2^-16");
    CHECK(j["raw"]["rounds"] == 44);
    CHECK(j["provenance"]["p_m"]["reference"] == "KA2011");
    CHECK(j["provenance"]["e"]["kind"] == "closed-form");
    const auto arr = instances_json(xs, &nd);
    CHECK(arr[1]["nondominated"] == true);
    CHECK(arr[0]["nondominated"] == false);
}

TEST_CASE("spider scores") {
    const Catalog c = Catalog::builtin();
    SpiderOptions o;
    o.reference_rounds = 16;
    const Instance bc = c.instance("BC-{16}");
    const Instance tree = c.instance("Tree-{16,8}");
    CHECK(spider_score(Attribute::MafiaFraud, bc, o) == 10.0);
    CHECK(spider_score(Attribute::TerroristFraud, bc, o) == 0.0);
    CHECK(spider_score(Attribute::SlowPhase, bc, o) == 0.0);
    CHECK(spider_score(Attribute::SlowPhase, tree, o) == 10.0);
    CHECK(spider_score(Attribute::CryptoOps, bc, o) == doctest::Approx(8.0));
    CHECK(spider_score(Attribute::CryptoOps, tree, o) == doctest::Approx(9.0));
    CHECK(spider_score(Attribute::Memory, bc, o) == doctest::Approx(10.0));
    CHECK(spider_score(Attribute::Memory, tree, o) == doctest::Approx(8.0));
    CHECK(spider_score(Attribute::MafiaFraud, tree, o) < spider_score(Attribute::MafiaFraud, bc, o));
    o.reference_rounds = 128;
    CHECK(spider_score(Attribute::MafiaFraud, bc, o) == doctest::Approx(1.25));
}

TEST_CASE("spider charts are deterministic SVG") {
    const Catalog c = Catalog::builtin();
    const std::vector<Instance> xs = {c.instance("BC-{16}"), c.instance("Tree-{16,8}")};
    const std::string a = render_spider_svg(xs);
    CHECK(a == render_spider_svg(xs));
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("BC-{16}") != std::string::npos);
    CHECK(a.find("mafia fraud") != std::string::npos);
    CHECK(a.find(">rounds</text>") == std::string::npos);
}

TEST_CASE("spider charts take one to six instances") {
    const Catalog c = Catalog::builtin();
    std::vector<Instance> xs;
    CHECK_THROWS_AS(render_spider_svg(xs), std::invalid_argument);
    for (int n = 1; n <= 7; ++n) xs.push_back(c.instance("BC-{" + std::to_string(n) + "}"));
    CHECK_THROWS_AS(render_spider_svg(xs), std::invalid_argument);
    xs.pop_back();
    CHECK_NOTHROW(render_spider_svg(xs));
}

TEST_CASE("hiding equal axes keeps the security axes") {
    const Catalog c = Catalog::builtin();
    SpiderOptions o;
    o.hide_equal_axes = true;
    const std::string svg = render_spider_svg({c.instance("BC-{16}"), c.instance("BC-{32}")}, o);
    CHECK(svg.find("terrorist fraud") != std::string::npos);
    CHECK(svg.find("final slow phase") == std::string::npos);
    CHECK(svg.find("crypto ops") == std::string::npos);
}

TEST_CASE("spider normalization") {
    const Catalog c = Catalog::builtin();
    SpiderOptions o;
    apply_spider_normalization(o, "ideal-128", c);
    CHECK(o.reference_rounds == 128);
    apply_spider_normalization(o, "SKI-{64,2}", c);
    CHECK(o.reference_rounds == 64);
    CHECK_THROWS_AS(apply_spider_normalization(o, "ideal-x", c), std::invalid_argument);
    CHECK_THROWS_AS(apply_spider_normalization(o, "Nope-{1}", c), UnknownInstance);
}

TEST_CASE("resistance curves pick the most resistant instance per n") {
    const auto all = Catalog::builtin().generate();
    const auto mafia = resistance_curves(all, Attribute::MafiaFraud);
    const auto distance = resistance_curves(all, Attribute::DistanceFraud);
    auto find = [](const std::vector<Curve>& cs, const std::string& p) {
        for (const auto& c : cs)
            if (c.protocol == p) return c;
        FAIL("missing curve " << p);
        return Curve{};
    };
    const Curve ka_m = find(mafia, "KA");
    REQUIRE(ka_m.points.size() == 8);
    CHECK(ka_m.points[0].n == 32);
    CHECK(ka_m.points[0].instance_id == "KA-{32,1}");
    CHECK(find(distance, "KA").points[0].instance_id == "KA-{32,0}");
    CHECK(find(mafia, "BC").points.back().log2_value == -256.0);
    CHECK(find(mafia, "SKI").points[0].instance_id == "SKI-{32,32}");
    CHECK_THROWS_AS(resistance_curves(all, Attribute::Memory), std::invalid_argument);

    const std::string csv = curves_csv(mafia, Attribute::MafiaFraud);
    CHECK(csv.rfind("protocol,n,instance,log2_p_m,scaled\n", 0) == 0);
    const std::string svg = curves_svg(mafia, Attribute::MafiaFraud);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg == curves_svg(mafia, Attribute::MafiaFraud));
}
