#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sampling.hpp"

namespace stickperc::measures {

/// Natural log of Gamma(x), x > 0. Lanczos (g = 7, 9 terms) with exact factorial sums at small
/// positive integers; relative error <= 1e-13 away from the zeros at 1 and 2, absolute ~1e-15 near them.
double log_gamma(double x);

/// Regularised incomplete beta J_z(a, b) by the Lentz continued fraction, |error| <= 1e-12.
double regularized_incomplete_beta(double z, double a, double b);

/// Volume of a d-ball of radius rho.
double ball_volume(int d, double rho);

/// mu_lambda/lambda of segments of length L hitting B(o, rho): L V_{d-1}(rho) + V_d(rho).
double stick_hit_volume(int d, double length, double rho);

/// H-measure of directions whose line from a point at distance r meets B(o, rho):
/// J_{rho^2/r^2}((d-1)/2, 1/2). Requires rho < r.
double cap_hit_probability_exact(int d, double rho, double r);

/// Gamma(d/2) / (sqrt(pi) Gamma((d+1)/2)) (rho/r)^(d-1) <= cap_hit_probability_exact.
double cap_hit_lower_bound(int d, double rho, double r);

/// Two-ball constant c_d = 2^{5(d-2)} pi^{d/2-2} d^{-1/2} Gamma(d/2)^3 / Gamma(2d-1).
double c_d(int d);
/// c'_d = c_d / (1000 sqrt(d))^d.
double c_d_prime(int d);

enum class LawTag { Uniform, Rigid, Density };

LawTag law_tag(const sampling::OrientationLaw& law);
std::string law_tag_name(LawTag tag);
LawTag parse_law_tag(const std::string& name);

/// Constants c, C with c L^-k <= lambda_c <= C L^-k (k = 2 uniform/density, k = 1 rigid).
struct BoundConstants {
    double lower = 0.0;
    double upper = 0.0;
    int exponent = 2;
    double lower_min_length = 0.0;  // lower bound claimed for L strictly above this
    double upper_min_length = 0.0;  // upper bound claimed for L strictly above this
};

/// Constants only; never checks L. delta is the density floor (1 for uniform, ignored for rigid).
BoundConstants bound_constants(int d, LawTag law, double delta = 1.0);

struct BoundsReport {
    int d = 2;
    double length = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    LawTag law = LawTag::Uniform;
    double delta = 1.0;
};

/// Both theorem bounds at L. PreconditionViolated unless L exceeds both validity thresholds.
BoundsReport theorem_bounds(int d, double length, LawTag law, double delta = 1.0);
/// Lower bound alone; PreconditionViolated unless L exceeds its threshold.
double theorem_lower_bound(int d, double length, LawTag law, double delta = 1.0);
/// Upper bound alone; PreconditionViolated unless L exceeds its threshold.
double theorem_upper_bound(int d, double length, LawTag law, double delta = 1.0);

/// Upper bound on the mean number of sticks hitting a fixed stick (the GW offspring mean).
/// Uniform / density: lambda L^2 pi^{(d-1)/2} 2^d / Gamma((d+1)/2), needs L > pi.
/// Rigid: lambda 2^d pi^{d/2} L / Gamma((d+1)/2), needs L > 3.
double gw_offspring_bound(int d, double length, double intensity, LawTag law);

/// Geometry of the box lattice D^u used by the upper-bound construction.
struct ConstructionGeometry {
    int d = 2;
    double length = 0.0;
    double half_side = 0.0;      // L / (16 sqrt d)
    double spacing = 0.0;        // L / 4 between neighbouring box centres
    double face_inset = 16.0;
    double lattice_spacing = 12.0;

    /// Requires L > 200 sqrt(d).
    static ConstructionGeometry make(int d, double length);
    /// Non-validating variant for geometry that only needs L > 32.
    static ConstructionGeometry make_unchecked(int d, double length);

    std::vector<double> box_center(int u1, int u2) const;
    sampling::BoxRegion box(int u1, int u2) const;
    bool in_box(int u1, int u2, std::span<const double> x, double tol = 0.0) const;
    /// x on the inset right face R^{-16}(D^u).
    bool on_right_face(int u1, int u2, std::span<const double> x, double tol = 1e-9) const;
    /// |T(D^u)| by enumeration: points of the inset top face with (x1, x3..xd) in 12 Z^{d-1}.
    std::uint64_t top_lattice_count(int u1, int u2) const;
};

/// |T(D^{(0,2)})| by enumeration. Requires L > 200 sqrt(d).
std::uint64_t lattice_T_count(int d, double length);
/// The counting bound (L / (96 sqrt d) - 4)^{d-1}; the base is floored at 0.
double lattice_T_count_bound(int d, double length);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
};

/// mu_lambda of (x, p) with x in D^{(-1,0)} whose segment meets both B(gamma, 2) and B(zeta, 2),
/// estimated as lambda Vol(D) * hit fraction. Requires gamma in D^{(-2,0)}, zeta on R^{-16}(D^o),
/// L > 32 and a law with density floor > 0. Trials are sharded into fixed substreams, so the
/// result does not depend on `workers`.
McEstimate mc_two_ball_measure(int d, double length, double intensity, std::span<const double> gamma,
                               std::span<const double> zeta, const sampling::OrientationLaw& law,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

/// mu_lambda/lambda of segments hitting B(o, rho), by sampling centres uniformly in a box that
/// contains every hitting centre. Checks the stick-volume identity.
McEstimate mc_stick_hit_volume(int d, double length, double rho, const sampling::OrientationLaw& law,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

/// Fraction of uniform directions p for which the segment centred at r e_1 with length
/// 2(r + rho) + 1 meets B(o, rho).
McEstimate mc_cap_hit_probability(int d, double rho, double r, std::uint64_t trials, std::uint64_t seed,
                                  unsigned workers = 1);

}  // namespace stickperc::measures
