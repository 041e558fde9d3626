#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dbeval/catalog.hpp"
#include "dbeval/formulas.hpp"

using namespace dbeval;

namespace {

double log2_of(const Catalog& c, const std::string& id, Attribute a) { return c.instance(id).attrs.value(a); }

// Reference values from exact rational / 40-digit arithmetic, frozen.
struct Frozen {
    const char* id;
    Attribute attr;
    double log2_value;
};

const Frozen kFrozen[] = {
    {"KA-{22,0.55}", Attribute::MafiaFraud, -16.007570554881345},
    {"KA-{22,0.55}", Attribute::DistanceFraud, -4.1503749927884382},
    {"KA-{32,1}", Attribute::MafiaFraud, -27.912537158749661},
    {"Tree-{24,6}", Attribute::MafiaFraud, -16.0},
    {"Tree-{24,6}", Attribute::DistanceFraud, -10.830074998557688},
    {"Tree-{160,16}", Attribute::MafiaFraud, -128.30074998557688},
    {"Tree-{160,16}", Attribute::DistanceFraud, -77.075187496394219},
    {"Tree-{50,8}", Attribute::DistanceFraud, -23.075187496394219},
    {"Poulidor-{23}", Attribute::MafiaFraud, -16.067294834202741},
    {"Poulidor-{23}", Attribute::DistanceFraud, -8.3031263575154603},
    {"TMA-{27}", Attribute::MafiaFraud, -16.283416884129112},
    {"TMA-{256}", Attribute::MafiaFraud, -156.32062044130639},
    {"TMA-{256}", Attribute::DistanceFraud, -156.32062044130639},
    {"YKHL-{10}", Attribute::MafiaFraud, -5.8603298405354295},
    {"MP-{10,0.5}", Attribute::MafiaFraud, -4.1503749927884382},
    {"MP-{10,0.5}", Attribute::DistanceFraud, -1.9264507794239589},
    {"MP-{10,0.1}", Attribute::MafiaFraud, -5.670405927238938},
    {"SKI-{39,2}", Attribute::MafiaFraud, -16.186462471874909},
    {"SKI-{219,3}", Attribute::MafiaFraud, -128.1067876579332},
    {"SKI-{219,3}", Attribute::TerroristFraud, -128.1067876579332},
    {"HK-{40}", Attribute::MafiaFraud, -16.601499971153753},
};

}  // namespace

TEST_CASE("builtin catalog lists thirteen protocols in roster order") {
    const Catalog c = Catalog::builtin();
    std::vector<std::string> names;
    for (const auto& d : c.protocols()) names.push_back(d.name);
    CHECK(names == std::vector<std::string>{"BC", "MAD", "BB", "HK", "MP", "SwissKnife", "Tree", "Poulidor", "RC",
                                            "YKHL", "KA", "SKI", "TMA"});
    CHECK(c.constants() == Constants{128, 128, 128});
}

TEST_CASE("grid sizes add up to 29184 instances") {
    const Catalog c = Catalog::builtin();
    std::map<std::string, std::size_t> sizes;
    for (const auto& d : c.protocols()) sizes[d.name] = c.parameter_grid(d).size();
    CHECK(sizes["BC"] == 256);
    CHECK(sizes["MP"] == 256 * 21);
    CHECK(sizes["KA"] == 256 * 21);
    CHECK(sizes["Tree"] == 256 * 32);
    CHECK(sizes["SKI"] == 256 * 31);
    CHECK(c.generate().size() == 29184);
}

TEST_CASE("probability grids are exactly i/20") {
    const Catalog c = Catalog::builtin();
    const auto& grid = c.at("MP").params.at(1).values;
    REQUIRE(grid.size() == 21);
    for (int i = 0; i <= 20; ++i) CHECK(grid[i] == i / 20.0);
}

TEST_CASE("data/catalog.conf matches the embedded catalog") {
    std::ifstream in(DBEVAL_SOURCE_DIR "/data/catalog.conf");
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == builtin_catalog_text());
}

TEST_CASE("evaluated probabilities match frozen reference values") {
    const Catalog c = Catalog::builtin();
    for (const auto& f : kFrozen) {
        CAPTURE(f.id);
        CAPTURE(attribute_key(f.attr));
        CHECK(log2_of(c, f.id, f.attr) == doctest::Approx(f.log2_value).epsilon(1e-12));
    }
}

TEST_CASE("closed-form probabilities") {
    const Catalog c = Catalog::builtin();
    CHECK(log2_of(c, "BC-{16}", Attribute::MafiaFraud) == -16.0);
    CHECK(log2_of(c, "BC-{16}", Attribute::DistanceFraud) == -16.0);
    CHECK(log2_of(c, "BC-{16}", Attribute::TerroristFraud) == 0.0);
    CHECK(log2_of(c, "SwissKnife-{16}", Attribute::DistanceFraud) == doctest::Approx(16 * std::log2(0.75)));
    CHECK(log2_of(c, "SwissKnife-{16}", Attribute::TerroristFraud) == doctest::Approx(16 * std::log2(0.75)));
    CHECK(log2_of(c, "SKI-{39,2}", Attribute::TerroristFraud) == -39.0);
    CHECK(log2_of(c, "YKHL-{10}", Attribute::DistanceFraud) == doctest::Approx(10 * std::log2(7.0 / 8.0)));
    CHECK(log2_of(c, "RC-{5}", Attribute::MafiaFraud) == -5.0);
}

TEST_CASE("probabilities never exceed one") {
    const Catalog c = Catalog::builtin();
    for (const auto& i : c.generate()) {
        CAPTURE(i.id);
        REQUIRE(i.attrs.log2_p_m <= 0.0);
        REQUIRE(i.attrs.log2_p_d <= 0.0);
        REQUIRE(i.attrs.log2_p_t <= 0.0);
    }
}

TEST_CASE("Tree depth larger than n gives no mafia protection") {
    const Catalog c = Catalog::builtin();
    CHECK(log2_of(c, "Tree-{3,5}", Attribute::MafiaFraud) == 0.0);
}

TEST_CASE("KA predefined-round count uses exact decimal arithmetic") {
    Params p;
    p.n = 180;
    p.p_d = 0.35;
    CHECK(formulas::ka_alpha(p) == 63);  // 0.35 * 180 is 62.999... in binary floating point
    p.n = 22;
    p.p_d = 0.55;
    CHECK(formulas::ka_alpha(p) == 12);
    p.p_d = 1.0;
    CHECK(formulas::ka_alpha(p) == 22);
    p.p_d = 0.0;
    CHECK(formulas::ka_alpha(p) == 0);
}

TEST_CASE("KA with no predefined rounds reduces to (3/4)^n") {
    const Catalog c = Catalog::builtin();
    CHECK(log2_of(c, "KA-{40,0}", Attribute::MafiaFraud) == doctest::Approx(40 * std::log2(0.75)));
}

TEST_CASE("rounds, crypto ops and flags") {
    const Catalog c = Catalog::builtin();
    const auto ski = c.instance("SKI-{39,2}").attrs;
    CHECK(ski.rounds == 2 * 39 * 2);
    CHECK(ski.crypto_ops == 1);
    CHECK(ski.multi_bit);
    CHECK_FALSE(ski.slow_phase);
    const auto bc = c.instance("BC-{16}").attrs;
    CHECK(bc.rounds == 32);
    CHECK(bc.crypto_ops == 2);
    CHECK(bc.slow_phase);
    CHECK_FALSE(bc.multi_bit);
    CHECK(c.instance("RC-{7}").attrs.multi_bit);
    CHECK(c.instance("MP-{7,0.5}").attrs.multi_bit);
    CHECK(c.at("RC").rounds_provenance == Provenance::Estimated);
}

TEST_CASE("memory formulas") {
    const Catalog c = Catalog::builtin();
    CHECK(c.instance("BC-{16}").attrs.memory_bits == 2 * 16 + 3 * 128);
    CHECK(c.instance("MAD-{16}").attrs.memory_bits == 2 * 16 + 2 * 128 + 5 * 128);
    CHECK(c.instance("BB-{16}").attrs.memory_bits == 3 * 16 + 128);
    CHECK(c.instance("HK-{16}").attrs.memory_bits == 3 * 16 + 2 * 128);
    CHECK(c.instance("MP-{16,0.5}").attrs.memory_bits == 4 * 16 + 2 * 128 + 128);
    CHECK(c.instance("SwissKnife-{16}").attrs.memory_bits == 3 * 16 + 3 * 128 + 2 * 128);
    CHECK(c.instance("Tree-{160,16}").attrs.memory_bits == ((1u << 17) - 1) * 10 + 2 * 128 + 160);
    CHECK(c.instance("Tree-{3,5}").attrs.memory_bits == 2 * 128 + 3);
    CHECK(c.instance("Poulidor-{23}").attrs.memory_bits == 5 * 23 + 2 * 128);
    CHECK(c.instance("RC-{23}").attrs.memory_bits == 4 * 128);
    CHECK(c.instance("SKI-{219,3}").attrs.memory_bits == 219 * 4 + 4 * 128);
    CHECK(c.instance("TMA-{210}").attrs.memory_bits == 4 * 210 + 2 * 128);
    CHECK(c.instance("Tree-{32,32}").attrs.memory_bits == ((std::uint64_t{1} << 33) - 1) + 2 * 128 + 32);
}

TEST_CASE("constants feed the memory formulas") {
    Catalog c = Catalog::builtin();
    c.set_constants(Constants{64, 32, 128});
    CHECK(c.instance("BC-{16}").attrs.memory_bits == 2 * 16 + 3 * 32);
    CHECK(c.instance("HK-{16}").attrs.memory_bits == 3 * 16 + 2 * 64);
}

TEST_CASE("per-protocol constant overrides") {
    std::string text(builtin_catalog_text());
    const auto pos = text.find("[HK]\n");
    REQUIRE(pos != std::string::npos);
    text.insert(pos + 5, "delta = 10\n");
    const Catalog c = Catalog::parse(text);
    CHECK(c.instance("HK-{16}").attrs.memory_bits == 3 * 16 + 2 * 10);
    CHECK(c.instance("BB-{16}").attrs.memory_bits == 3 * 16 + 128);
}

TEST_CASE("instance ids") {
    const Catalog c = Catalog::builtin();
    const auto& ka = c.at("KA");
    Params p;
    p.n = 22;
    p.p_d = 0.55;
    CHECK(c.format_id(ka, p) == "KA-{22,0.55}");
    p.p_d = 1.0;
    CHECK(c.format_id(ka, p) == "KA-{22,1}");
    p.p_d = 0.0;
    CHECK(c.format_id(ka, p) == "KA-{22,0}");
    CHECK(c.instance("KA-{2, 0.5}").id == "KA-{2,0.5}");
    CHECK(c.instance("Swiss-Knife-{16}").id == "SwissKnife-{16}");
    for (const auto& i : c.generate()) REQUIRE(c.instance(i.id).attrs == i.attrs);
}

TEST_CASE("unknown and off-grid ids are rejected") {
    const Catalog c = Catalog::builtin();
    CHECK_THROWS_AS(c.instance("BC-{0}"), UnknownInstance);
    CHECK_THROWS_AS(c.instance("BC-{257}"), UnknownInstance);
    CHECK_THROWS_AS(c.instance("KA-{22,0.56}"), UnknownInstance);
    CHECK_THROWS_AS(c.instance("Nope-{1}"), UnknownInstance);
    CHECK_THROWS_AS(c.instance("BC-16"), UnknownInstance);
    CHECK_THROWS_AS(c.instance("Tree-{16}"), UnknownInstance);
    CHECK_THROWS_AS(c.at("Nope"), UnknownProtocol);
}

TEST_CASE("provenance tags") {
    const Catalog c = Catalog::builtin();
    CHECK(c.at("BC").p_m.provenance == Provenance::ClosedForm);
    CHECK(c.at("KA").p_m.provenance == Provenance::CitedReference);
    CHECK(c.at("KA").p_m.reference == "KA2011");
    CHECK(c.at("SKI").p_d.provenance == Provenance::BoundOnly);
    CHECK(c.at("Tree").p_d.provenance == Provenance::CitedReference);
    CHECK(c.at("Poulidor").p_m.reference == "TMA2010");
}

TEST_CASE("a missing evaluator raises an error naming the reference") {
    Catalog c = Catalog::builtin();
    c.remove_formula("ka_mafia");
    try {
        (void)c.instance("KA-{22,0.55}");
        FAIL("expected FormulaUnavailable");
    } catch (const FormulaUnavailable& e) {
        CHECK(e.protocol() == "KA");
        CHECK(e.attribute() == Attribute::MafiaFraud);
        CHECK(e.reference() == "KA2011");
        CHECK(std::string(e.what()).find("KA2011") != std::string::npos);
    }
    CHECK_THROWS_AS(c.generate(), FormulaUnavailable);
    CHECK(c.generate({"BC", "Tree"}).size() == 256 + 8192);
    c.install_formula("ka_mafia", &formulas::ka_mafia);
    CHECK(c.generate().size() == 29184);
}

TEST_CASE("catalog parse errors") {
    const std::string base = "[X]\nparams = n\ngrid.n = 1..4\np_m = half_pow_n\np_d = half_pow_n\np_t = one\n"
                             "rounds = 2*n\ncrypto_ops = 1\nmemory = n\nslow_phase = false\nmulti_bit = false\n";
    CHECK(Catalog::parse(base).generate().size() == 4);
    CHECK_THROWS_AS(Catalog::parse(base + "colour = red\n"), CatalogError);
    CHECK_THROWS_AS(Catalog::parse(base + "crypto_ops = 2\n"), CatalogError);
    CHECK_THROWS_AS(Catalog::parse("[X]\nparams = n\n"), CatalogError);
    CHECK_THROWS_AS(Catalog::parse(base + "[constants]\nlambda = 3\n"), CatalogError);
    CHECK_THROWS_AS(Catalog::parse("[X]\nparams = q\n"), CatalogError);
    CHECK_THROWS_AS(Catalog::parse("orphan = 1\n"), CatalogError);
    CHECK_THROWS_AS(Catalog::parse(""), CatalogError);
    std::string bad_memory = base;
    bad_memory.replace(bad_memory.find("memory = n"), 10, "memory = n + zeta");
    CHECK_THROWS_AS(Catalog::parse(bad_memory), CatalogError);
    std::string bad_grid = base;
    bad_grid.replace(bad_grid.find("1..4"), 4, "4..1");
    CHECK_THROWS_AS(Catalog::parse(bad_grid), CatalogError);
}

TEST_CASE("an unknown evaluator is reported at evaluation time") {
    const std::string text = "[X]\nparams = n\ngrid.n = 1..4\np_m = secret_formula\np_m.reference = ZZ1999\n"
                             "p_d = half_pow_n\np_t = one\nrounds = 2*n\ncrypto_ops = 1\nmemory = n\n"
                             "slow_phase = false\nmulti_bit = false\n";
    const Catalog c = Catalog::parse(text);
    CHECK_THROWS_WITH_AS(c.generate(), doctest::Contains("ZZ1999"), FormulaUnavailable);
}

TEST_CASE("term sums round-trip") {
    CHECK(TermSum::parse("2*n + 3*sigma").text() == "2*n + 3*sigma");
    CHECK(TermSum::parse("nt + n + 2*delta + 2*sigma").text() == "nt + n + 2*delta + 2*sigma");
    CHECK(TermSum::parse("7").evaluate(Params{}, Constants{}) == 7);
}
