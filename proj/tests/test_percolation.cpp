#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "measures.hpp"
#include "oracles.hpp"
#include "percolation.hpp"

using namespace stickperc;
using namespace stickperc::percolation;
using sampling::BoxRegion;
using sampling::Configuration;
using sampling::OrientationLaw;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

Configuration manual(std::size_t d, double length, const BoxRegion& window) {
    Configuration c;
    c.d = d;
    c.length = length;
    c.box = window;
    c.window = window;
    return c;
}

}  // namespace

TEST_CASE("union find") {
    UnionFind uf(6);
    CHECK(uf.components() == 6);
    CHECK(uf.unite(0, 1));
    CHECK_FALSE(uf.unite(1, 0));
    CHECK(uf.unite(2, 3));
    CHECK(uf.unite(3, 1));
    CHECK(uf.components() == 3);
    CHECK(uf.find(0) == uf.find(2));
    CHECK(uf.find(uf.find(2)) == uf.find(2));
    CHECK(uf.find(4) != uf.find(5));
}

TEST_CASE("index completeness against all pairs") {
    std::uint64_t missed = 0, duplicated = 0;
    for (int seed = 0; seed < 100; ++seed) {
        std::size_t d = seed % 10 == 9 ? 3 : 2;
        double len = 4 + seed % 7;
        double lam = d == 2 ? 1.2 / (len * len) : 0.4 / (len * len * len);
        auto box = BoxRegion::cube(d, 0, d == 2 ? 12 * len : 4 * len);
        auto c = sampling::sample_configuration(d, len, lam, OrientationLaw::uniform(), box, 1000 + seed);
        REQUIRE(c.size() <= 2000);
        double cell = seed % 3 == 0 ? len + 5 : len + 2;
        SpatialIndex index(c, cell);
        auto pairs = index.candidate_pairs();
        std::set<std::pair<std::uint32_t, std::uint32_t>> found(pairs.begin(), pairs.end());
        duplicated += pairs.size() - found.size();
        for (std::uint32_t i = 0; i < c.size(); ++i)
            for (std::uint32_t j = i + 1; j < c.size(); ++j)
                if (geometry::sticks_intersect(c.segment(i), c.segment(j)) && !found.count({i, j})) ++missed;
    }
    CHECK(missed == 0);
    CHECK(duplicated == 0);

    Configuration empty = manual(2, 3, BoxRegion::cube(2, 0, 10));
    CHECK(SpatialIndex(empty, 5).entry_count() == 0);
    CHECK(SpatialIndex(empty, 5).candidate_pairs().empty());

    Configuration two = manual(2, 10, BoxRegion::cube(2, -20, 20));
    two.push(std::vector<double>{0, 0}, std::vector<double>{1, 0});
    two.push(std::vector<double>{3, 1}, std::vector<double>{0, 1});
    SpatialIndex idx(two, 12);
    CHECK(idx.candidate_pairs().size() == 1);
}

TEST_CASE("cluster labels match the breadth-first oracle") {
    for (int seed = 0; seed < 30; ++seed) {
        std::size_t d = seed % 5 == 4 ? 3 : 2;
        double len = 6 + seed % 5;
        double side = d == 2 ? 10 * len : 3 * len;
        double lam = d == 2 ? (1.5 + 0.2 * (seed % 10)) / (len * len) : 0.5 / std::pow(len, 3);
        auto law = seed % 2 ? OrientationLaw::uniform() : OrientationLaw::rigid_e2(d);
        auto c = sampling::sample_windowed(d, len, lam, law, side, 2000 + seed);
        REQUIRE(c.size() <= 2000);
        auto out = cluster(c);
        std::vector<bool> active(c.size());
        std::vector<int> lib(c.size(), -1);
        for (std::size_t i = 0; i < c.size(); ++i) {
            active[i] = geometry::segment_box_distance(c.segment(i), c.window.low, c.window.high) <= 1.0;
            CHECK(static_cast<bool>(out.active[i]) == active[i]);
            if (active[i]) lib[i] = static_cast<int>(out.components.find(i));
        }
        auto ref = oracle::components_all_pairs(c, active);
        CHECK(oracle::same_partition(ref, lib));

        // Crossing oracle: some BFS component touches both faces of axis 0.
        bool crossed = false;
        std::size_t largest = 0;
        int comps = 0;
        for (int lab : std::set<int>(ref.begin(), ref.end())) {
            if (lab < 0) continue;
            ++comps;
            bool lo = false, hi = false;
            std::size_t size = 0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (ref[i] != lab) continue;
                ++size;
                auto low_face_hi = c.window.high, high_face_lo = c.window.low;
                low_face_hi[0] = c.window.low[0];
                high_face_lo[0] = c.window.high[0];
                lo |= geometry::segment_box_distance(c.segment(i), c.window.low, low_face_hi) <= 1.0;
                hi |= geometry::segment_box_distance(c.segment(i), high_face_lo, c.window.high) <= 1.0;
            }
            largest = std::max(largest, size);
            crossed |= lo && hi;
        }
        CHECK(out.result.crossed == crossed);
        CHECK(out.result.largest_cluster == largest);
        CHECK(out.result.cluster_count == static_cast<std::size_t>(comps));
        CHECK(crossing_event(c, 0) == crossed);
    }
}

TEST_CASE("cluster fixtures") {
    auto window = BoxRegion::cube(2, 0, 10);
    Configuration one = manual(2, 3, window);
    one.push(std::vector<double>{5, 5}, std::vector<double>{1, 0});
    auto r = cluster(one).result;
    CHECK(r.cluster_count == 1);
    CHECK_FALSE(r.crossed);

    Configuration span = manual(2, 20, window);
    span.push(std::vector<double>{5, 5}, std::vector<double>{1, 0});
    CHECK(crossing_event(span, 0));
    CHECK_FALSE(crossing_event(span, 1));

    CHECK_FALSE(crossing_event(manual(2, 3, window), 0));

    const int k = 25;
    Configuration chain = manual(2, 4, BoxRegion{{-5, -1}, {5, 2.0 * (k - 1) + 1}});
    for (int i = 0; i < k; ++i) chain.push(std::vector<double>{0, 2.0 * i}, std::vector<double>{1, 0});
    auto cr = cluster(chain).result;
    CHECK(cr.cluster_count == 1);
    CHECK(cr.largest_cluster == static_cast<std::size_t>(k));
    CHECK(crossing_event(chain, 1));
}

TEST_CASE("crossing probability limits") {
    CrossingParams p;
    p.d = 2;
    p.length = 16;
    p.side = 160;
    p.replicates = 100;
    p.seed = 41;
    auto low = crossing_probability(1e-6, OrientationLaw::uniform(), p);
    CHECK(low.frequency == 0.0);
    auto high = crossing_probability(0.2, OrientationLaw::uniform(), p);
    CHECK(high.frequency == 1.0);
    // Roughly twice the measured threshold at L = 16.
    auto super = crossing_probability(0.03, OrientationLaw::uniform(), p);
    CHECK(super.frequency > 0.9);
    CHECK(super.ci.low <= super.frequency);
    CHECK(super.ci.high >= super.frequency);

    auto again = crossing_probability(0.03, OrientationLaw::uniform(), p);
    CHECK(again.crossed == super.crossed);
    p.workers = 3;
    auto threaded = crossing_probability(0.03, OrientationLaw::uniform(), p);
    CHECK(threaded.crossed == super.crossed);
    CHECK(threaded.seeds == super.seeds);
}

TEST_CASE("wilson interval") {
    for (auto [k, n] : {std::pair<int, int>{0, 10}, {5, 10}, {10, 10}, {37, 200}}) {
        double z = 1.959963984540054, ph = double(k) / n;
        double centre = (ph + z * z / (2 * n)) / (1 + z * z / n);
        double half = z / (1 + z * z / n) * std::sqrt(ph * (1 - ph) / n + z * z / (4.0 * n * n));
        auto ci = wilson_interval(k, n);
        CHECK(ci.low == doctest::Approx(std::max(0.0, centre - half)).epsilon(1e-12));
        CHECK(ci.high == doctest::Approx(std::min(1.0, centre + half)).epsilon(1e-12));
    }
}

TEST_CASE("thinning") {
    auto c = sampling::sample_configuration(2, 3, 0.5, OrientationLaw::uniform(), BoxRegion::cube(2, 0, 100), 8);
    auto a = thin(c, 0.3, 5), b = thin(c, 0.6, 5);
    double n = static_cast<double>(c.size());
    CHECK(std::abs(a.size() - 0.3 * n) <= 4 * std::sqrt(0.21 * n));
    CHECK(std::abs(b.size() - 0.6 * n) <= 4 * std::sqrt(0.24 * n));
    std::set<std::vector<double>> kept_b;
    for (std::size_t i = 0; i < b.size(); ++i) kept_b.insert({b.center(i).begin(), b.center(i).end()});
    std::size_t nested = 0;
    for (std::size_t i = 0; i < a.size(); ++i) nested += kept_b.count({a.center(i).begin(), a.center(i).end()});
    CHECK(nested == a.size());
    CHECK(thin(c, 1.0, 5).size() == c.size());
}

TEST_CASE("coupled crossing is monotone per replicate") {
    std::vector<double> lams{0.004, 0.008, 0.012, 0.016, 0.02, 0.03, 0.05};
    for (int seed = 0; seed < 5; ++seed) {
        CrossingParams p;
        p.d = 2;
        p.length = 16;
        p.side = 128;
        p.replicates = 40;
        p.seed = 300 + seed;
        auto curve = coupled_crossing_curve(lams, seed % 2 ? OrientationLaw::uniform() : OrientationLaw::rigid_e2(2), p);
        REQUIRE(curve.size() == lams.size());
        int violations = 0;
        for (std::size_t k = 1; k < curve.size(); ++k) {
            CHECK(curve[k].frequency >= curve[k - 1].frequency);
            for (std::size_t r = 0; r < p.replicates; ++r)
                if (curve[k - 1].crossed[r] && !curve[k].crossed[r]) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("threshold estimates sit inside the theorem brackets") {
    ThresholdParams p;
    p.d = 2;
    p.length = 32;
    p.side = 320;
    p.replicates = 100;
    p.seed = 9;
    auto rigid = estimate_threshold(OrientationLaw::rigid_e2(2), p);
    double sp = std::sqrt(std::numbers::pi);
    CHECK(rigid.lambda_hat > 1 / (8 * sp) / 32);
    CHECK(rigid.lambda_hat < 8 * sp / 32);
    CHECK(rigid.ci.low <= rigid.lambda_hat);
    CHECK(rigid.ci.high >= rigid.lambda_hat);
    CHECK(rigid.axis == 0);

    auto uni = estimate_threshold(OrientationLaw::uniform(), p);
    CHECK(uni.lambda_hat > 0.125 / (32.0 * 32));
    CHECK(uni.lambda_hat < 3.95e7 / (32.0 * 32));
    CHECK(uni.trace.size() == static_cast<std::size_t>(uni.bracketing_probes + uni.bisection_probes));
    CHECK(uni.bisection_probes <= 12);
    for (const auto& probe : uni.trace) CHECK(probe.replicates == 100);

    ThresholdParams narrow = p;
    narrow.side = 100;
    CHECK(code_of([&] { estimate_threshold(OrientationLaw::uniform(), narrow); }) != ErrorCode::Ok);
}

TEST_CASE("doubling replicates narrows the interval by about sqrt 2") {
    double ratio_sum = 0;
    const int seeds = 4;
    for (int s = 0; s < seeds; ++s) {
        ThresholdParams p;
        p.d = 2;
        p.length = 8;
        p.side = 64;
        p.seed = 50 + s;
        p.replicates = 100;
        auto a = estimate_threshold(OrientationLaw::uniform(), p);
        p.replicates = 200;
        auto b = estimate_threshold(OrientationLaw::uniform(), p);
        ratio_sum += std::log(a.ci.high / a.ci.low) / std::log(b.ci.high / b.ci.low);
    }
    double ratio = ratio_sum / seeds;
    CHECK(ratio > 1.1);
    CHECK(ratio < 1.8);

    CrossingParams c;
    c.d = 2;
    c.length = 8;
    c.side = 64;
    c.seed = 3;
    c.replicates = 400;
    auto x = crossing_probability(0.05, OrientationLaw::uniform(), c);
    c.replicates = 800;
    auto y = crossing_probability(0.05, OrientationLaw::uniform(), c);
    double r = (x.ci.high - x.ci.low) / (y.ci.high - y.ci.low);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(0.15));
}

TEST_CASE("logistic fit recovers a known midpoint") {
    std::vector<CrossingEstimate> trace;
    const double mid = std::log(0.01), slope = 6;
    for (double x = mid - 0.6; x <= mid + 0.61; x += 0.1) {
        CrossingEstimate e;
        e.lambda = std::exp(x);
        e.replicates = 10000;
        double p = 1 / (1 + std::exp(-slope * (x - mid)));
        e.crossings = static_cast<std::uint32_t>(std::lround(p * e.replicates));
        e.frequency = double(e.crossings) / e.replicates;
        trace.push_back(e);
    }
    auto fit = fit_logistic(trace);
    REQUIRE(fit.ok);
    CHECK(std::abs(fit.midpoint - mid) <= 1e-3);
    CHECK(fit.slope == doctest::Approx(slope).epsilon(0.01));
    CHECK(fit.midpoint_se > 0);
    CHECK(fit.midpoint_se < 0.01);

    std::vector<CrossingEstimate> flat(3);
    for (int i = 0; i < 3; ++i) {
        flat[i].lambda = 0.01 * (i + 1);
        flat[i].replicates = 10;
        flat[i].crossings = 0;
    }
    CHECK_FALSE(fit_logistic(flat).ok);
}

TEST_CASE("scaling fit") {
    std::vector<ScalingPoint> exact, seven;
    for (double len : {8.0, 16.0, 32.0, 64.0}) {
        exact.push_back({len, 1 / (len * len), 1.0});
        seven.push_back({len, 7 / len, 1.0});
    }
    auto f = scaling_fit(exact);
    CHECK(f.slope == doctest::Approx(-2).epsilon(1e-12));
    CHECK(f.slope_stderr <= 1e-10);
    auto g = scaling_fit(seven);
    CHECK(g.slope == doctest::Approx(-1).epsilon(1e-12));
    CHECK(g.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-12));

    // Noisy synthetic points: slope -2 within 0.1 and the spread of slopes matches OLS theory.
    RngStream s(61);
    std::vector<double> ls{8, 16, 32, 64};
    double sxx = 0, mean = 0;
    for (double l : ls) mean += std::log(l) / 4;
    for (double l : ls) sxx += std::pow(std::log(l) - mean, 2);
    const int fits = 2000;
    int outside = 0;
    double ss = 0;
    for (int k = 0; k < fits; ++k) {
        std::vector<ScalingPoint> pts;
        for (double l : ls) pts.push_back({l, std::exp(-2 * std::log(l) + 0.05 * s.normal()), 1.0});
        double slope = scaling_fit(pts).slope;
        outside += std::abs(slope + 2) > 0.1;
        ss += (slope + 2) * (slope + 2);
    }
    CHECK(outside <= fits / 100);
    CHECK(std::sqrt(ss / fits) == doctest::Approx(0.05 / std::sqrt(sxx)).epsilon(0.1));

    std::vector<ScalingPoint> degenerate{{8, 1, 1}, {8, 2, 1}, {16, 3, 1}};
    CHECK(code_of([&] { scaling_fit(degenerate); }) == ErrorCode::DegenerateDesign);
    CHECK(code_of([&] { scaling_fit(std::vector<ScalingPoint>{{8, 1, 1}, {16, 1, 1}}); }) ==
          ErrorCode::DegenerateDesign);

    ThresholdEstimate e;
    e.ci = {std::exp(-1.0), std::exp(1.0)};
    double se = 2 / (2 * 1.959963984540054);
    CHECK(scaling_weight(e) == doctest::Approx(1 / (se * se)).epsilon(1e-6));
}

TEST_CASE("threshold serialisation") {
    ThresholdParams p;
    p.d = 2;
    p.length = 8;
    p.side = 64;
    p.replicates = 20;
    p.seed = 4;
    auto est = estimate_threshold(OrientationLaw::uniform(), p);
    auto csv = probe_trace_csv(est, 8);
    CHECK(csv.rfind("# stickperc probe-trace v1\nL,lambda,crossed,replicate,seed\n", 0) == 0);
    std::size_t rows = std::count(csv.begin(), csv.end(), '\n') - 2;
    CHECK(rows == est.trace.size() * 20);
    auto j = nlohmann::json::parse(threshold_json(est, 2, 8, "uniform", 64));
    CHECK(j.at("schema_version") == kThresholdJsonSchemaVersion);
    CHECK(j.at("lambda_hat").get<double>() == est.lambda_hat);
}
