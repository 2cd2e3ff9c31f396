#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "mcb/state_io.hpp"
#include "test_support.hpp"

using namespace mcb;

TEST_CASE("state files round-trip", "[state_io]") {
    SECTION("pure state") {
        const auto phi = random_pure(DimensionVector({2, 3}), 17);
        const std::string text = serialize_state(phi);
        const auto loaded = parse_state(text);
        REQUIRE(std::holds_alternative<PureState>(loaded));
        const auto& back = std::get<PureState>(loaded);
        REQUIRE(back.dims() == phi.dims());
        REQUIRE((back.amplitudes() - phi.amplitudes()).norm() == 0.0);
        // deterministic serialization: re-serialization is byte-identical
        REQUIRE(serialize_state(back) == text);
    }
    SECTION("density state") {
        const auto rho = random_density(DimensionVector({2, 2}), 18);
        const std::string text = serialize_state(rho);
        const auto loaded = parse_state(text);
        REQUIRE(std::holds_alternative<DensityMatrix>(loaded));
        const auto& back = std::get<DensityMatrix>(loaded);
        REQUIRE((back.matrix() - rho.matrix()).norm() == 0.0);
        REQUIRE(serialize_state(back) == text);
    }
}

TEST_CASE("strict parsing rejects malformed files", "[state_io]") {
    const std::string good =
        R"({"format":"mcb-state/1","dims":[2],"kind":"pure","data":[[1,0],[0,0]]})";
    REQUIRE_NOTHROW(parse_state(good));

    SECTION("json syntax error carries a byte position") {
        try {
            parse_state("{\"format\": ");
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            REQUIRE(std::string(e.what()).find("byte") != std::string::npos);
        }
    }
    SECTION("unknown field") {
        const std::string text =
            R"({"format":"mcb-state/1","dims":[2],"kind":"pure","data":[[1,0],[0,0]],"extra":1})";
        REQUIRE_THROWS_AS(parse_state(text), parse_error);
    }
    SECTION("wrong format tag") {
        const std::string text =
            R"({"format":"mcb-state/2","dims":[2],"kind":"pure","data":[[1,0],[0,0]]})";
        REQUIRE_THROWS_AS(parse_state(text), parse_error);
    }
    SECTION("wrong amplitude count") {
        const std::string text =
            R"({"format":"mcb-state/1","dims":[2],"kind":"pure","data":[[1,0]]})";
        try {
            parse_state(text);
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            REQUIRE(std::string(e.what()).find("$.data") != std::string::npos);
        }
    }
    SECTION("non-finite number") {
        const std::string text =
            R"({"format":"mcb-state/1","dims":[2],"kind":"pure","data":[[1e999,0],[0,0]]})";
        REQUIRE_THROWS_AS(parse_state(text), parse_error);
    }
    SECTION("pair with wrong arity") {
        const std::string text =
            R"({"format":"mcb-state/1","dims":[2],"kind":"pure","data":[[1,0,0],[0,0]]})";
        REQUIRE_THROWS_AS(parse_state(text), parse_error);
    }
    SECTION("ragged density row") {
        const std::string text =
            R"({"format":"mcb-state/1","dims":[2],"kind":"density","data":[[[1,0]],[[0,0],[0,0]]]})";
        REQUIRE_THROWS_AS(parse_state(text), parse_error);
    }
    SECTION("unknown kind") {
        const std::string text =
            R"({"format":"mcb-state/1","dims":[2],"kind":"mixed","data":[]})";
        REQUIRE_THROWS_AS(parse_state(text), parse_error);
    }
    SECTION("invalid state content is still a load error") {
        // valid JSON, but the matrix is not PSD
        const std::string text =
            R"({"format":"mcb-state/1","dims":[2],"kind":"density",)"
            R"("data":[[[0.5,0],[0.9,0]],[[0.9,0],[0.5,0]]]})";
        REQUIRE_THROWS_AS(parse_state(text), parse_error);
    }
}

TEST_CASE("save and load through the filesystem", "[state_io]") {
    const auto rho = ggz_family(0.5);
    const std::string path = "test_io_ggz.json";
    save_state(rho, path);
    const auto loaded = load_state(path);
    const auto& back = std::get<DensityMatrix>(loaded);
    REQUIRE((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    std::remove(path.c_str());
}
