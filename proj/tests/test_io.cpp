#include <doctest.h>

#include "opseq/generators.hpp"
#include "opseq/io.hpp"
#include "opseq/spectral.hpp"
#include "support.hpp"

#include <json.hpp>

using namespace opseq;
using namespace opseq::testing;

namespace {

std::vector<AlgebraTower> sample_towers()
{
    std::vector<AlgebraTower> ts;
    ts.push_back(filtered_tower(dg_ideal_example()));
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        ts.push_back(filtered_tower(random_filtered_algebra(seed, Ring::prime_field(5))));
        ts.push_back(filtered_tower(random_bicomplex_algebra(seed, Ring::integers())));
    }
    BocksteinSpec spec;
    spec.q = 2;
    spec.free = {{0, 1}};
    spec.torsion = {{0, 4}};
    ts.push_back(bockstein_tower(spec));
    return ts;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to)
{
    auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

} // namespace

TEST_CASE("round trip: parse(serialize(t)) serializes to the same bytes")
{
    for (const auto& t : sample_towers()) {
        std::string a = serialize_tower(t);
        AlgebraTower u = parse_tower(a);
        CHECK(serialize_tower(u) == a);
        CHECK(check_tower(u).ok());
        SpectralOptions opt;
        opt.r_max = 3;
        auto s1 = compute_spectral_sequence(t, opt);
        auto s2 = compute_spectral_sequence(u, opt);
        REQUIRE(s1.pages.size() == s2.pages.size());
        for (std::size_t k = 0; k < s1.pages.size(); ++k)
            CHECK(cross_check(s1.pages[k], s2.pages[k]).ok());
    }
}

TEST_CASE("explicit operad descriptors round trip")
{
    AlgebraTower t = filtered_tower(dg_ideal_example());
    t.A.operad.name = "custom";
    t.C.operad.name = "custom";
    std::string a = serialize_tower(t);
    CHECK(a.find("\"builtin\"") == std::string::npos);
    AlgebraTower u = parse_tower(a);
    CHECK(serialize_tower(u) == a);
    CHECK(check_operad(u.A.operad).ok());
}

TEST_CASE("syntax errors carry line and column")
{
    std::string text = "{\n  \"format\": \"opseq-tower\",\n  \"version\": 1,,\n}";
    try {
        parse_tower(text);
        FAIL("expected a parse error");
    } catch (const DocumentError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }
}

TEST_CASE("structural errors name the offending field")
{
    std::string good = serialize_tower(filtered_tower(dg_ideal_example()));
    auto path_of = [](const std::string& text) {
        try {
            parse_tower(text);
        } catch (const DocumentError& e) {
            CHECK(e.line() == 0);
            return e.path();
        }
        return std::string("<no error>");
    };
    CHECK(path_of(replace_once(good, "\"policy\": \"constant_above\"", "\"policy\": \"sometimes\"")) == "policy");
    CHECK(path_of(replace_once(good, "\"ring\": \"F2\"", "\"ring\": \"F4\"")) == "ring");
    CHECK(path_of(replace_once(good, "\"version\": 1", "\"version\": 7")) == "version");

    // drop one row of the first i block: shape mismatch names that block
    nlohmann::json doc = nlohmann::json::parse(good);
    REQUIRE(!doc["i"].empty());
    doc["i"][0]["matrix"].erase(0);
    std::string p = path_of(doc.dump());
    CHECK(p == "i[0].matrix");

    doc = nlohmann::json::parse(good);
    doc["A"]["d"].push_back({{"source", {42, 0}}, {"matrix", nlohmann::json::array()}});
    CHECK(path_of(doc.dump()).rfind("A.d[", 0) == 0);
}

TEST_CASE("minimal document")
{
    std::string text = R"({
  "format": "opseq-tower", "version": 1, "ring": "Q",
  "window": {"p_min": 0, "p_max": 0}, "policy": "constant_above",
  "operad": {"builtin": "comm", "arity_cap": 2},
  "A": {"components": [{"p": 0, "q": 0, "labels": ["1"]}], "d": [],
        "gamma": [{"op": "id", "inputs": [["1", 0, 0]], "value": "1"},
                  {"op": "mu2", "inputs": [["1", 0, 0], ["1", 0, 0]], "value": "1"}]},
  "C": {"components": [{"p": 0, "q": 0, "labels": ["1"]}], "d": [],
        "gamma": [{"op": "id", "inputs": [["1", 0, 0]], "value": "1"},
                  {"op": "mu2", "inputs": [["1", 0, 0], ["1", 0, 0]], "value": "1"}]},
  "i": [], "j": [{"source": [0, 0], "matrix": ["1"]}]
})";
    AlgebraTower t = parse_tower(text);
    CHECK(t.p_max == 0);
    CHECK(check_tower(t).ok());
    auto ss = compute_spectral_sequence(t);
    CHECK(ss.e_infinity.size({0, 0}) == 1);
}
