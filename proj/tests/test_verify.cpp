#include <doctest.h>

#include <json.hpp>

#include "core.hpp"
#include "verify.hpp"

using namespace stickperc;

TEST_CASE("every property suite passes") {
    for (const auto& suite : verify::suite_names()) {
        CAPTURE(suite);
        auto results = verify::run_suite(suite, 1);
        CHECK_FALSE(results.empty());
        for (const auto& r : results) {
            CAPTURE(r.name);
            CAPTURE(r.detail);
            CHECK(r.suite == suite);
            CHECK(r.passed);
        }
    }
}

TEST_CASE("suite results are reproducible") {
    auto a = verify::results_json(verify::run_suite("oriented", 5), 5);
    auto b = verify::results_json(verify::run_suite("oriented", 5, 3), 5);
    CHECK(a == b);
    auto j = nlohmann::json::parse(a);
    CHECK(j.at("seed") == 5);
    CHECK_THROWS_AS(verify::run_suite("nonsense", 1), Error);
}
