#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "core.hpp"
#include "oriented.hpp"

using namespace stickperc;
using namespace stickperc::oriented;

namespace {

// Reference step written from the occupation rules: a child is open through an occupied
// parent whose arrow towards it fires (bond), or through the single site uniform (site).
Frontier reference_step(const Frontier& f, double alpha, Variant v, std::uint64_t key) {
    std::set<std::int64_t> occ(f.occupied.begin(), f.occupied.end()), out;
    for (std::int64_t x : f.occupied)
        for (std::int64_t y : {x - 1, x + 1}) {
            bool left = occ.count(y - 1), right = occ.count(y + 1);
            bool open;
            if (v == Variant::Bond)
                open = (left && arrow_uniform(key, f.level, y - 1, true) < alpha) ||
                       (right && arrow_uniform(key, f.level, y + 1, false) < alpha);
            else
                open = arrow_uniform(key, f.level, y - 1, true) < alpha;
            if (open) out.insert(y);
        }
    return Frontier{f.level + 1, {out.begin(), out.end()}};
}

Frontier random_frontier(RngStream& s, std::uint64_t level) {
    Frontier f{level, {}};
    for (std::int64_t x = -static_cast<std::int64_t>(level); x <= static_cast<std::int64_t>(level); x += 2)
        if (s.uniform() < 0.6) f.occupied.push_back(x);
    return f;
}

}  // namespace

TEST_CASE("variant basics") {
    CHECK(beta(0.5, Variant::Bond) == doctest::Approx(0.75));
    CHECK(beta(0.5, Variant::Site) == doctest::Approx(0.5));
    CHECK(parse_variant("site") == Variant::Site);
    CHECK(variant_name(Variant::Bond) == "bond");
    CHECK_THROWS_AS(parse_variant("hex"), Error);
    CHECK(Frontier::origin().valid());
    CHECK_FALSE((Frontier{2, {-1, 1}}).valid());
    CHECK_FALSE((Frontier{2, {2, 0}}).valid());
    CHECK_FALSE((Frontier{2, {0, 4}}).valid());
}

TEST_CASE("step agrees with the reference rules") {
    RngStream s(81);
    for (int rep = 0; rep < 3000; ++rep) {
        std::uint64_t level = 1 + rep % 40;
        Frontier f = random_frontier(s, level);
        double alpha = s.uniform(0.05, 0.99);
        std::uint64_t key = mix64(rep + 1);
        for (Variant v : {Variant::Bond, Variant::Site}) {
            Frontier a = op_step(f, alpha, v, key);
            Frontier b = reference_step(f, alpha, v, key);
            CHECK(a.level == b.level);
            CHECK(a.occupied == b.occupied);
            CHECK(a.valid());
        }
        // Where both predecessors are occupied the site event implies the bond event.
        Frontier site = op_step(f, alpha, Variant::Site, key), bond = op_step(f, alpha, Variant::Bond, key);
        std::set<std::int64_t> occ(f.occupied.begin(), f.occupied.end());
        for (std::int64_t y : site.occupied)
            if (occ.count(y - 1) && occ.count(y + 1))
                CHECK(std::binary_search(bond.occupied.begin(), bond.occupied.end(), y));
    }
}

TEST_CASE("absorbing extinction and full occupation") {
    Frontier empty{5, {}};
    CHECK(op_step(empty, 0.9, Variant::Bond, 3).empty());
    CHECK(op_step(empty, 0.9, Variant::Bond, 3).level == 6);
    Frontier f = Frontier::origin();
    for (int n = 1; n <= 50; ++n) {
        f = op_step(f, 1.0, Variant::Bond, 7);
        REQUIRE(f.occupied.size() == static_cast<std::size_t>(n + 1));
        CHECK(f.occupied.front() == -n);
        CHECK(f.occupied.back() == n);
    }
    CHECK(survival_probability(1.0, Variant::Site, 100, 20, 1).fraction == 1.0);
    RngStream s(82);
    Frontier g = Frontier::origin();
    for (int n = 0; n < 300 && !g.empty(); ++n) {
        g = op_step(g, 0.8, Variant::Bond, s);
        CHECK(g.valid());
    }
}

TEST_CASE("occupation frequencies") {
    const int steps = 100000;
    const double alpha = 0.63;
    int left = 0, right = 0, site_left = 0;
    int both_bond = 0, both_site = 0;
    Frontier one{4, {0}}, two{5, {-1, 1}};
    for (int k = 0; k < steps; ++k) {
        std::uint64_t key = derive_seed(9, "freq", k);
        auto b = op_step(one, alpha, Variant::Bond, key);
        left += std::count(b.occupied.begin(), b.occupied.end(), -1);
        right += std::count(b.occupied.begin(), b.occupied.end(), 1);
        auto st = op_step(one, alpha, Variant::Site, key);
        site_left += std::count(st.occupied.begin(), st.occupied.end(), -1);
        auto bb = op_step(two, alpha, Variant::Bond, key);
        both_bond += std::count(bb.occupied.begin(), bb.occupied.end(), 0);
        auto ss = op_step(two, alpha, Variant::Site, key);
        both_site += std::count(ss.occupied.begin(), ss.occupied.end(), 0);
    }
    auto within = [&](int count, double p) { return std::abs(double(count) / steps - p) <= 3 * std::sqrt(p * (1 - p) / steps); };
    CHECK(within(left, alpha));
    CHECK(within(right, alpha));
    CHECK(within(site_left, alpha));
    CHECK(within(both_bond, beta(alpha, Variant::Bond)));
    CHECK(within(both_site, beta(alpha, Variant::Site)));
}

TEST_CASE("survival") {
    auto sup = survival_probability(0.81, Variant::Bond, 500, 500, 11);
    CHECK(sup.fraction > 0.2);
    CHECK(sup.ci_low <= sup.fraction);
    CHECK(sup.ci_high >= sup.fraction);
    auto sub = survival_probability(0.5, Variant::Bond, 500, 500, 11);
    CHECK(sub.survived == 0);
    for (std::uint32_t t = 0; t < 20; ++t) CHECK(sup.extinction_level[t] == run_trial(0.81, Variant::Bond, 500, trial_key(11, t)));
    auto threaded = survival_probability(0.81, Variant::Bond, 500, 500, 11, 3);
    CHECK(threaded.extinction_level == sup.extinction_level);
    CHECK_THROWS_AS(survival_probability(0.5, Variant::Bond, 0, 10, 1), Error);
    CHECK_THROWS_AS(survival_probability(0.5, Variant::Bond, 10, 0, 1), Error);
    CHECK_THROWS_AS(survival_probability(0.0, Variant::Bond, 10, 10, 1), Error);
}

TEST_CASE("coupled monotonicity") {
    std::vector<double> a{0.5, 0.7, 0.81, 0.95};
    auto m = coupled_survival_monotonicity(a, Variant::Bond, 300, 200, 12);
    CHECK(m.monotone);
    CHECK(m.violations == 0);
    REQUIRE(m.survived.size() == 4);
    CHECK(std::is_sorted(m.survived.begin(), m.survived.end()));
    auto direct = survival_probability(0.81, Variant::Bond, 300, 200, 12);
    CHECK(m.survived[2] == direct.survived);
    std::vector<double> pair{0.2, 0.9};
    CHECK(coupled_survival_monotonicity(pair, Variant::Site, 100, 100, 13).monotone);
    std::vector<double> single{0.7};
    CHECK(coupled_survival_monotonicity(single, Variant::Bond, 100, 50, 13).monotone);
    std::vector<double> unsorted{0.9, 0.2};
    CHECK_THROWS_AS(coupled_survival_monotonicity(unsorted, Variant::Bond, 10, 10, 1), Error);
}

TEST_CASE("survival csv") {
    std::vector<double> a{0.7, 0.9};
    std::vector<SurvivalEstimate> e{survival_probability(0.7, Variant::Site, 50, 5, 1),
                                    survival_probability(0.9, Variant::Site, 50, 5, 1)};
    auto csv = survival_csv(a, e);
    CHECK(csv.find("alpha,trial,extinction_level,survived\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 11);
}
