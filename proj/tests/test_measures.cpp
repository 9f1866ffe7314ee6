#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "core.hpp"
#include "measures.hpp"
#include "oracles.hpp"

using namespace stickperc;
using namespace stickperc::measures;
using sampling::OrientationLaw;
constexpr double kPi = std::numbers::pi;

namespace {

double ref_ball_volume(int d, double rho) { return std::pow(kPi, d / 2.0) * std::pow(rho, d) / std::tgamma(d / 2.0 + 1); }

double ref_c_d(int d) {
    return std::pow(2.0, 5.0 * (d - 2)) * std::pow(kPi, d / 2.0 - 2) / std::sqrt(d) * std::pow(std::tgamma(d / 2.0), 3) /
           std::tgamma(2.0 * d - 1);
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("log gamma") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-13));
    CHECK(log_gamma(6.0) == doctest::Approx(4.787491742782046).epsilon(1e-13));
    for (double x = 0.05; x < 200; x *= 1.37) {
        double ref = std::lgamma(x);
        CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)) + 1e-15);
    }
    CHECK(code_of([] { log_gamma(0.0); }) == ErrorCode::DomainError);
    CHECK(code_of([] { log_gamma(-2.5); }) == ErrorCode::DomainError);
}

TEST_CASE("incomplete beta") {
    CHECK(regularized_incomplete_beta(1.0, 2.5, 0.7) == 1.0);
    CHECK(regularized_incomplete_beta(0.0, 2.5, 0.7) == 0.0);
    CHECK(regularized_incomplete_beta(0.5, 1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(regularized_incomplete_beta(0.25, 0.5, 0.5) - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(oracle::incomplete_beta_by_quadrature(0.25, 0.5, 0.5) - 1.0 / 3.0) <= 1e-10);
    RngStream s(21);
    for (int rep = 0; rep < 40; ++rep) {
        double z = s.uniform(), a = s.uniform(0.5, 6), b = s.uniform(0.5, 6);
        double j = regularized_incomplete_beta(z, a, b);
        CHECK(std::abs(j + regularized_incomplete_beta(1 - z, b, a) - 1) <= 1e-11);
        CHECK(std::abs(j - oracle::incomplete_beta_by_quadrature(z, a, b)) <= 1e-9);
    }
    CHECK(code_of([] { regularized_incomplete_beta(1.5, 1, 1); }) == ErrorCode::DomainError);
    CHECK(code_of([] { regularized_incomplete_beta(0.5, 0, 1); }) == ErrorCode::DomainError);
}

TEST_CASE("stick hit volume") {
    CHECK(stick_hit_volume(3, 0, 1) == doctest::Approx(4 * kPi / 3).epsilon(1e-13));
    CHECK(stick_hit_volume(2, 10, 2) == doctest::Approx(40 + 4 * kPi).epsilon(1e-13));
    CHECK(stick_hit_volume(2, 10, 4) == doctest::Approx(80 + 16 * kPi).epsilon(1e-13));
    for (int d = 2; d <= 8; ++d) {
        CHECK(std::abs(stick_hit_volume(d, 0, 1.7) - ref_ball_volume(d, 1.7)) <= 1e-12 * ref_ball_volume(d, 1.7));
        CHECK(stick_hit_volume(d, 5, 1.3) ==
              doctest::Approx(5 * ref_ball_volume(d - 1, 1.3) + ref_ball_volume(d, 1.3)).epsilon(1e-12));
    }
    CHECK(code_of([] { stick_hit_volume(1, 1, 1); }) == ErrorCode::DomainError);
    CHECK(code_of([] { stick_hit_volume(2, 1, 0); }) == ErrorCode::DomainError);
}

TEST_CASE("stick hit volume by Monte Carlo") {
    auto est = mc_stick_hit_volume(2, 10, 2, OrientationLaw::uniform(), 200000, 5);
    CHECK(std::abs(est.estimate - (40 + 4 * kPi)) <= 3 * est.stderr_);
    auto rigid = mc_stick_hit_volume(3, 6, 2, OrientationLaw::rigid_e2(3), 200000, 6);
    CHECK(std::abs(rigid.estimate - stick_hit_volume(3, 6, 2)) <= 3 * rigid.stderr_);
    CHECK(code_of([] { mc_stick_hit_volume(2, 10, 2, OrientationLaw::uniform(), 0, 1); }) ==
          ErrorCode::InsufficientTrials);
}

TEST_CASE("cap hit probability") {
    CHECK(cap_hit_probability_exact(2, 1, 2) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(cap_hit_probability_exact(3, 1, 2) == doctest::Approx(1 - std::sqrt(3.0) / 2).epsilon(1e-12));
    CHECK(cap_hit_probability_exact(4, 1 - 1e-12, 1) > 0.999);
    CHECK(cap_hit_lower_bound(2, 1, 2) == doctest::Approx(1 / kPi).epsilon(1e-12));
    CHECK(cap_hit_lower_bound(3, 1, 2) == doctest::Approx(0.125).epsilon(1e-12));
    for (int d = 2; d <= 8; ++d) {
        double limit = std::tgamma(d / 2.0) / (std::sqrt(kPi) * std::tgamma((d + 1) / 2.0));
        CHECK(cap_hit_lower_bound(d, 1 - 1e-13, 1) == doctest::Approx(limit).epsilon(1e-10));
        CHECK(limit < 1);
    }
    CHECK(code_of([] { cap_hit_probability_exact(2, 2, 2); }) == ErrorCode::DomainError);
    CHECK(code_of([] { cap_hit_lower_bound(2, 3, 2); }) == ErrorCode::DomainError);

    RngStream s(22);
    int below = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        int d = 2 + rep % 7;
        double r = s.uniform(0.1, 50), rho = r * s.uniform_open();
        if (cap_hit_lower_bound(d, rho, r) > cap_hit_probability_exact(d, rho, r) + 1e-15) ++below;
    }
    CHECK(below == 0);
    for (int d = 2; d <= 6; ++d) {
        CHECK(cap_hit_probability_exact(d, 1.0, 3) < cap_hit_probability_exact(d, 1.5, 3));
        CHECK(cap_hit_probability_exact(d, 1.0, 3) > cap_hit_probability_exact(d, 1.0, 4));
        auto mc = mc_cap_hit_probability(d, 1.0, 2.0, 100000, 30 + d);
        CHECK(std::abs(mc.estimate - cap_hit_probability_exact(d, 1.0, 2.0)) <= 3 * mc.stderr_);
    }
}

TEST_CASE("two-ball constants") {
    CHECK(c_d(2) == doctest::Approx(1 / (2 * std::sqrt(2.0) * kPi)).epsilon(1e-13));
    CHECK(c_d(3) == doctest::Approx(32 * std::pow(std::sqrt(kPi) / 2, 3) / (std::sqrt(3 * kPi) * 24)).epsilon(1e-13));
    for (int d = 2; d <= 10; ++d) {
        CHECK(c_d(d) == doctest::Approx(ref_c_d(d)).epsilon(1e-12));
        CHECK(c_d_prime(d) == doctest::Approx(ref_c_d(d) / std::pow(1000 * std::sqrt(d), d)).epsilon(1e-12));
        CHECK(c_d_prime(d) < c_d(d));
    }
    CHECK(c_d_prime(2) == doctest::Approx(5.627e-8).epsilon(1e-3));
    CHECK(code_of([] { c_d(1); }) == ErrorCode::DomainError);
}

TEST_CASE("theorem bounds") {
    auto u = bound_constants(2, LawTag::Uniform);
    CHECK(u.lower == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(u.exponent == 2);
    auto r = bound_constants(2, LawTag::Rigid);
    CHECK(r.lower == doctest::Approx(1 / (8 * std::sqrt(kPi))).epsilon(1e-13));
    CHECK(r.upper == doctest::Approx(8 * std::sqrt(kPi)).epsilon(1e-13));
    CHECK(r.exponent == 1);
    CHECK(u.upper == doctest::Approx(3.95e7).epsilon(1e-3));
    for (int d = 2; d <= 6; ++d) {
        double dd = d;
        double lower = std::tgamma((dd + 1) / 2) / (std::pow(kPi, (dd - 1) / 2) * std::pow(2.0, dd));
        double upper = 20 * std::pow(1000 * std::sqrt(dd), dd) * std::sqrt(dd) * std::tgamma(2 * dd - 1) /
                       (9 * 0.5 * std::pow(2.0, 5 * (dd - 2)) * std::pow(kPi, dd / 2 - 2) * std::pow(std::tgamma(dd / 2), 3));
        auto k = bound_constants(d, LawTag::Density, 0.5);
        CHECK(k.lower == doctest::Approx(lower).epsilon(1e-12));
        CHECK(k.upper == doctest::Approx(upper).epsilon(1e-12));
        double rl = std::tgamma((dd + 1) / 2) / (std::pow(2.0, dd) * std::pow(kPi, dd / 2));
        double ru = 4 * std::pow(2.0, dd) * std::tgamma((dd + 1) / 2) / std::pow(kPi, dd / 2 - 1);
        auto kr = bound_constants(d, LawTag::Rigid);
        CHECK(kr.lower == doctest::Approx(rl).epsilon(1e-12));
        CHECK(kr.upper == doctest::Approx(ru).epsilon(1e-12));
        double len = 300 * std::sqrt(dd);
        auto rep = theorem_bounds(d, len, LawTag::Uniform);
        CHECK(rep.lower < rep.upper);
        CHECK(rep.lower == doctest::Approx(lower / (len * len)).epsilon(1e-12));
    }
    CHECK(theorem_lower_bound(2, 100, LawTag::Rigid) == doctest::Approx(7.0523e-4).epsilon(1e-4));
    CHECK(theorem_upper_bound(2, 100, LawTag::Rigid) == doctest::Approx(0.141796).epsilon(1e-5));
    CHECK(theorem_lower_bound(2, 100, LawTag::Uniform) == doctest::Approx(1.25e-5).epsilon(1e-12));
    CHECK(code_of([] { theorem_lower_bound(2, 3, LawTag::Rigid); }) == ErrorCode::PreconditionViolated);
    CHECK(code_of([] { theorem_lower_bound(2, 3, LawTag::Uniform); }) == ErrorCode::PreconditionViolated);
    CHECK(code_of([] { theorem_upper_bound(2, 10, LawTag::Rigid); }) == ErrorCode::PreconditionViolated);
    CHECK(code_of([] { theorem_upper_bound(2, 200 * std::sqrt(2.0), LawTag::Uniform); }) ==
          ErrorCode::PreconditionViolated);
    CHECK(code_of([] { theorem_bounds(2, 100, LawTag::Uniform); }) == ErrorCode::PreconditionViolated);
    CHECK_NOTHROW(theorem_bounds(2, 11, LawTag::Rigid));
    CHECK(parse_law_tag("rigid") == LawTag::Rigid);
    CHECK(code_of([] { parse_law_tag("isotropic"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("offspring bound") {
    for (double len : {4.0, 10.0, 50.0, 500.0}) {
        double lam = 0.125 / (len * len);
        CHECK(std::abs(gw_offspring_bound(2, len, lam, LawTag::Uniform) - 1) <= 1e-12);
    }
    for (int d = 2; d <= 6; ++d) {
        double lam = bound_constants(d, LawTag::Uniform).lower / (40.0 * 40.0);
        CHECK(std::abs(gw_offspring_bound(d, 40, lam, LawTag::Uniform) - 1) <= 1e-12);
    }
    CHECK(gw_offspring_bound(2, 10, 0.01, LawTag::Uniform) == doctest::Approx(8).epsilon(1e-13));
    CHECK(gw_offspring_bound(2, 10, 0.1, LawTag::Rigid) == doctest::Approx(8 * std::sqrt(kPi)).epsilon(1e-13));
    CHECK(code_of([] { gw_offspring_bound(2, 3, 0.1, LawTag::Uniform); }) == ErrorCode::PreconditionViolated);
    CHECK(code_of([] { gw_offspring_bound(2, 3, 0.1, LawTag::Rigid); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("box lattice") {
    CHECK(code_of([] { lattice_T_count(2, 250); }) == ErrorCode::PreconditionViolated);
    CHECK(lattice_T_count(2, 600) == 1);
    CHECK(lattice_T_count(2, 2000) == 13);
    for (int d = 2; d <= 4; ++d)
        for (double len : {300.0, 1000.0, 5000.0}) {
            if (len <= 200 * std::sqrt(d)) continue;
            // Enumerate lattice points directly: multiples of 12 in (-inner, inner).
            double inner = len / (16 * std::sqrt(d)) - 16;
            std::uint64_t per = 0;
            for (int k = -100000; k <= 100000; ++k)
                if (std::abs(12.0 * k) <= inner) ++per;
            std::uint64_t total = 1;
            for (int k = 1; k < d; ++k) total *= per;
            CHECK(lattice_T_count(d, len) == total);
            CHECK(static_cast<double>(lattice_T_count(d, len)) >= std::floor(lattice_T_count_bound(d, len)));
        }
    CHECK(lattice_T_count_bound(2, 2000) == doctest::Approx(2000 / (96 * std::sqrt(2.0)) - 4).epsilon(1e-13));
    CHECK(lattice_T_count_bound(2, 100) == 0.0);
}

TEST_CASE("two-ball measure") {
    const int d = 2;
    const double len = 512, lam = 1e-3;
    auto geo = ConstructionGeometry::make(d, len);
    std::vector<double> gamma = geo.box_center(-2, 0);
    std::vector<double> zeta = geo.box_center(0, 0);
    zeta[0] += geo.half_side;
    auto est = mc_two_ball_measure(d, len, lam, gamma, zeta, OrientationLaw::uniform(), 1000000, 3);
    CHECK(est.estimate + 3 * est.stderr_ >= lam * c_d(2));
    auto again = mc_two_ball_measure(d, len, lam, gamma, zeta, OrientationLaw::uniform(), 1000000, 3, 4);
    CHECK(again.estimate == est.estimate);
    CHECK(code_of([&] { mc_two_ball_measure(d, len, lam, gamma, zeta, OrientationLaw::uniform(), 0, 3); }) ==
          ErrorCode::InsufficientTrials);
    std::vector<double> off = gamma;
    off[1] += 3 * geo.half_side;
    CHECK(code_of([&] { mc_two_ball_measure(d, len, lam, off, zeta, OrientationLaw::uniform(), 10, 3); }) ==
          ErrorCode::PreconditionViolated);
    CHECK(code_of([&] { mc_two_ball_measure(d, len, lam, gamma, zeta, OrientationLaw::rigid_e2(2), 10, 3); }) ==
          ErrorCode::PreconditionViolated);
    CHECK(code_of([] {
              auto g = ConstructionGeometry::make(2, 256);
              std::vector<double> z = g.box_center(0, 0);
              z[0] += g.half_side;
              mc_two_ball_measure(2, 256, 1e-3, g.box_center(-2, 0), z, OrientationLaw::uniform(), 10, 3);
          }) == ErrorCode::PreconditionViolated);
}
