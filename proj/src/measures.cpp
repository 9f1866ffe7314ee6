#include "measures.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "geometry.hpp"
#include "parallel.hpp"

namespace stickperc::measures {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kShardTrials = 1ULL << 16;

void require_dim(int d) {
    if (d < 2) fail(ErrorCode::DomainError, "dimension must be at least 2");
}

template <class PerTrial>
McEstimate sharded_fraction(std::uint64_t trials, std::uint64_t seed, std::string_view tag, unsigned workers,
                            PerTrial&& per_trial) {
    if (trials == 0) fail(ErrorCode::InsufficientTrials, "at least one trial is required");
    const std::uint64_t shards = (trials + kShardTrials - 1) / kShardTrials;
    std::vector<std::uint64_t> hits(shards, 0);
    parallel_for(shards, workers, [&](std::size_t s) {
        RngStream stream(derive_seed(seed, tag, s));
        std::uint64_t begin = s * kShardTrials;
        std::uint64_t end = std::min(trials, begin + kShardTrials);
        std::uint64_t h = 0;
        for (std::uint64_t i = begin; i < end; ++i) h += per_trial(stream) ? 1 : 0;
        hits[s] = h;
    });
    McEstimate est;
    est.trials = trials;
    for (auto h : hits) est.hits += h;
    double f = static_cast<double>(est.hits) / static_cast<double>(trials);
    est.estimate = f;
    est.stderr_ = std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
    return est;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::DomainError, "log_gamma requires x > 0");
    if (x == std::floor(x) && x <= 21.0) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(x); ++k) f *= k;  // exact in double up to 20!
        return std::log(f);
    }
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
        return std::log(kPi / std::abs(std::sin(kPi * x))) - log_gamma(1.0 - x);
    }
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    constexpr double g = 7.0;
    double z = x - 1.0;
    double sum = c[0];
    for (int i = 1; i < 9; ++i) sum += c[i] / (z + i);
    double t = z + g + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

namespace {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double z, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * z / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 100000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * z / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    fail(ErrorCode::Internal, "incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double z, double a, double b) {
    if (!(z >= 0.0 && z <= 1.0)) fail(ErrorCode::DomainError, "incomplete beta requires z in [0, 1]");
    if (!(a > 0.0) || !(b > 0.0)) fail(ErrorCode::DomainError, "incomplete beta requires a, b > 0");
    if (z == 0.0) return 0.0;
    if (z == 1.0) return 1.0;
    const double log_front =
        log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(z) + b * std::log1p(-z);
    const double front = std::exp(log_front);
    if (z < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(z, a, b) / a;
    return 1.0 - front * beta_continued_fraction(1.0 - z, b, a) / b;
}

double ball_volume(int d, double rho) {
    if (d < 1) fail(ErrorCode::DomainError, "ball dimension must be >= 1");
    return std::exp(0.5 * d * std::log(kPi) - log_gamma(0.5 * d + 1.0)) * std::pow(rho, d);
}

double stick_hit_volume(int d, double length, double rho) {
    require_dim(d);
    if (!(rho > 0.0)) fail(ErrorCode::DomainError, "radius must be positive");
    if (!(length >= 0.0)) fail(ErrorCode::DomainError, "length must be non-negative");
    return length * ball_volume(d - 1, rho) + ball_volume(d, rho);
}

double cap_hit_probability_exact(int d, double rho, double r) {
    require_dim(d);
    if (!(rho > 0.0) || !(rho < r)) fail(ErrorCode::DomainError, "cap probability requires 0 < rho < r");
    return regularized_incomplete_beta(rho * rho / (r * r), 0.5 * (d - 1), 0.5);
}

double cap_hit_lower_bound(int d, double rho, double r) {
    require_dim(d);
    if (!(rho > 0.0) || !(rho < r)) fail(ErrorCode::DomainError, "cap bound requires 0 < rho < r");
    double coef = std::exp(log_gamma(0.5 * d) - 0.5 * std::log(kPi) - log_gamma(0.5 * (d + 1)));
    return coef * std::pow(rho / r, d - 1);
}

double c_d(int d) {
    require_dim(d);
    double log_c = 5.0 * (d - 2) * std::log(2.0) + (0.5 * d - 2.0) * std::log(kPi) - 0.5 * std::log(d) +
                   3.0 * log_gamma(0.5 * d) - log_gamma(2.0 * d - 1.0);
    return std::exp(log_c);
}

double c_d_prime(int d) { return c_d(d) / std::pow(1000.0 * std::sqrt(static_cast<double>(d)), d); }

LawTag law_tag(const sampling::OrientationLaw& law) {
    switch (law.kind()) {
        case sampling::OrientationLaw::Kind::Uniform: return LawTag::Uniform;
        case sampling::OrientationLaw::Kind::Rigid: return LawTag::Rigid;
        case sampling::OrientationLaw::Kind::BoundedDensity: return LawTag::Density;
    }
    return LawTag::Uniform;
}

std::string law_tag_name(LawTag tag) {
    switch (tag) {
        case LawTag::Uniform: return "uniform";
        case LawTag::Rigid: return "rigid";
        case LawTag::Density: return "density";
    }
    return "uniform";
}

LawTag parse_law_tag(const std::string& name) {
    if (name == "uniform") return LawTag::Uniform;
    if (name == "rigid") return LawTag::Rigid;
    if (name == "density") return LawTag::Density;
    fail(ErrorCode::InvalidArgument, "unknown law '" + name + "' (expected uniform|rigid|density)");
}

BoundConstants bound_constants(int d, LawTag law, double delta) {
    require_dim(d);
    const double dd = d;
    const double lg_half_up = log_gamma(0.5 * (dd + 1.0));
    BoundConstants k;
    if (law == LawTag::Rigid) {
        k.exponent = 1;
        k.lower = std::exp(lg_half_up - dd * std::log(2.0) - 0.5 * dd * std::log(kPi));
        k.upper = 4.0 * std::exp(dd * std::log(2.0) + lg_half_up - (0.5 * dd - 1.0) * std::log(kPi));
        k.lower_min_length = 3.0;
        k.upper_min_length = 10.0;
        return k;
    }
    if (law == LawTag::Uniform) delta = 1.0;
    if (!(delta > 0.0)) fail(ErrorCode::DomainError, "density floor delta must be positive");
    k.exponent = 2;
    k.lower = std::exp(lg_half_up - 0.5 * (dd - 1.0) * std::log(kPi) - dd * std::log(2.0));
    const double log_upper = std::log(20.0) + dd * std::log(1000.0 * std::sqrt(dd)) + 0.5 * std::log(dd) +
                             log_gamma(2.0 * dd - 1.0) - std::log(9.0 * delta) - 5.0 * (dd - 2.0) * std::log(2.0) -
                             (0.5 * dd - 2.0) * std::log(kPi) - 3.0 * log_gamma(0.5 * dd);
    k.upper = std::exp(log_upper);
    k.lower_min_length = kPi;
    k.upper_min_length = 200.0 * std::sqrt(dd);
    return k;
}

double theorem_lower_bound(int d, double length, LawTag law, double delta) {
    BoundConstants k = bound_constants(d, law, delta);
    if (!(length > k.lower_min_length)) {
        fail(ErrorCode::PreconditionViolated,
             "lower bound requires L > " + std::to_string(k.lower_min_length) + " for law " + law_tag_name(law));
    }
    return k.lower * std::pow(length, -k.exponent);
}

double theorem_upper_bound(int d, double length, LawTag law, double delta) {
    BoundConstants k = bound_constants(d, law, delta);
    if (!(length > k.upper_min_length)) {
        fail(ErrorCode::PreconditionViolated,
             "upper bound requires L > " + std::to_string(k.upper_min_length) + " for law " + law_tag_name(law));
    }
    return k.upper * std::pow(length, -k.exponent);
}

BoundsReport theorem_bounds(int d, double length, LawTag law, double delta) {
    BoundsReport r;
    r.d = d;
    r.length = length;
    r.law = law;
    r.delta = law == LawTag::Uniform ? 1.0 : delta;
    r.lower = theorem_lower_bound(d, length, law, delta);
    r.upper = theorem_upper_bound(d, length, law, delta);
    return r;
}

double gw_offspring_bound(int d, double length, double intensity, LawTag law) {
    require_dim(d);
    if (!(intensity > 0.0)) fail(ErrorCode::DomainError, "intensity must be positive");
    const double dd = d;
    const double lg = log_gamma(0.5 * (dd + 1.0));
    if (law == LawTag::Rigid) {
        if (!(length > 3.0)) fail(ErrorCode::PreconditionViolated, "rigid offspring bound requires L > 3");
        return intensity * std::exp(dd * std::log(2.0) + 0.5 * dd * std::log(kPi) - lg) * length;
    }
    if (!(length > kPi)) fail(ErrorCode::PreconditionViolated, "offspring bound requires L > pi");
    return intensity * length * length * std::exp(0.5 * (dd - 1.0) * std::log(kPi) - lg + dd * std::log(2.0));
}

ConstructionGeometry ConstructionGeometry::make_unchecked(int d, double length) {
    require_dim(d);
    if (!(length > 0.0)) fail(ErrorCode::DomainError, "length must be positive");
    ConstructionGeometry g;
    g.d = d;
    g.length = length;
    g.half_side = length / (16.0 * std::sqrt(static_cast<double>(d)));
    g.spacing = length / 4.0;
    return g;
}

ConstructionGeometry ConstructionGeometry::make(int d, double length) {
    require_dim(d);
    if (!(length > 200.0 * std::sqrt(static_cast<double>(d)))) {
        fail(ErrorCode::PreconditionViolated, "construction geometry requires L > 200 sqrt(d)");
    }
    return make_unchecked(d, length);
}

std::vector<double> ConstructionGeometry::box_center(int u1, int u2) const {
    std::vector<double> c(d, 0.0);
    c[0] = u1 * spacing;
    c[1] = u2 * spacing;
    return c;
}

sampling::BoxRegion ConstructionGeometry::box(int u1, int u2) const {
    auto c = box_center(u1, u2);
    sampling::BoxRegion b{c, c};
    for (int k = 0; k < d; ++k) {
        b.low[k] -= half_side;
        b.high[k] += half_side;
    }
    return b;
}

bool ConstructionGeometry::in_box(int u1, int u2, std::span<const double> x, double tol) const {
    auto c = box_center(u1, u2);
    for (int k = 0; k < d; ++k) {
        if (std::abs(x[k] - c[k]) > half_side + tol) return false;
    }
    return true;
}

bool ConstructionGeometry::on_right_face(int u1, int u2, std::span<const double> x, double tol) const {
    auto c = box_center(u1, u2);
    const double inner = half_side - face_inset;
    if (inner < 0.0) return false;
    if (std::abs(x[0] - (c[0] + half_side)) > tol * std::max(1.0, length)) return false;
    for (int k = 1; k < d; ++k) {
        if (std::abs(x[k] - c[k]) > inner) return false;
    }
    return true;
}

std::uint64_t ConstructionGeometry::top_lattice_count(int u1, int /*u2*/) const {
    const double inner = half_side - face_inset;
    if (inner < 0.0) return 0;
    auto multiples = [&](double lo, double hi) -> std::uint64_t {
        double first = std::ceil(lo / lattice_spacing);
        double last = std::floor(hi / lattice_spacing);
        return last >= first ? static_cast<std::uint64_t>(last - first + 1.0) : 0;
    };
    const double c1 = u1 * spacing;
    std::uint64_t count = multiples(c1 - inner, c1 + inner);
    for (int k = 2; k < d; ++k) count *= multiples(-inner, inner);
    return count;
}

std::uint64_t lattice_T_count(int d, double length) {
    return ConstructionGeometry::make(d, length).top_lattice_count(0, 2);
}

double lattice_T_count_bound(int d, double length) {
    require_dim(d);
    double base = length / (96.0 * std::sqrt(static_cast<double>(d))) - 4.0;
    return std::pow(std::max(0.0, base), d - 1);
}

McEstimate mc_two_ball_measure(int d, double length, double intensity, std::span<const double> gamma,
                               std::span<const double> zeta, const sampling::OrientationLaw& law,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    require_dim(d);
    if (trials == 0) fail(ErrorCode::InsufficientTrials, "at least one trial is required");
    if (!(length > 32.0)) fail(ErrorCode::PreconditionViolated, "two-ball measure requires L > 32");
    if (!(intensity > 0.0)) fail(ErrorCode::DomainError, "intensity must be positive");
    if (!(law.density_lower_bound() > 0.0)) {
        fail(ErrorCode::PreconditionViolated, "two-ball measure requires a law with density floor delta > 0");
    }
    if (gamma.size() != static_cast<std::size_t>(d) || zeta.size() != static_cast<std::size_t>(d)) {
        fail(ErrorCode::InvalidArgument, "ball centre dimension mismatch");
    }
    auto geo = ConstructionGeometry::make_unchecked(d, length);
    if (!geo.in_box(-2, 0, gamma)) fail(ErrorCode::PreconditionViolated, "gamma must lie in D^(-2,0)");
    if (!geo.on_right_face(0, 0, zeta)) fail(ErrorCode::PreconditionViolated, "zeta must lie on R^-16(D^o)");

    const sampling::BoxRegion box = geo.box(-1, 0);
    const double scale = intensity * box.volume();
    std::vector<double> g(gamma.begin(), gamma.end()), z(zeta.begin(), zeta.end());
    McEstimate est = sharded_fraction(trials, seed, "two-ball", workers, [&](RngStream& stream) {
        std::array<double, 16> cbuf{}, pbuf{};
        std::span<double> c(cbuf.data(), d), p(pbuf.data(), d);
        for (int k = 0; k < d; ++k) c[k] = stream.uniform(box.low[k], box.high[k]);
        sampling::sample_direction_into(law, d, stream, p);
        geometry::SegmentView seg{c, p, length};
        return geometry::segment_hits_ball(seg, g, 2.0) && geometry::segment_hits_ball(seg, z, 2.0);
    });
    est.estimate *= scale;
    est.stderr_ *= scale;
    return est;
}

McEstimate mc_stick_hit_volume(int d, double length, double rho, const sampling::OrientationLaw& law,
                               std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    require_dim(d);
    if (d > 16) fail(ErrorCode::DomainError, "Monte Carlo verifiers support d <= 16");
    if (!(rho > 0.0) || !(length >= 0.0)) fail(ErrorCode::DomainError, "need rho > 0 and L >= 0");
    // Every hitting centre lies within L/2 + rho of the origin: propose uniformly in that ball.
    const double reach = 0.5 * length + rho;
    const double proposal = ball_volume(d, reach);
    const std::vector<double> origin(d, 0.0);
    McEstimate est = sharded_fraction(trials, seed, "stick-hit", workers, [&](RngStream& stream) {
        std::array<double, 16> cbuf{}, pbuf{};
        std::span<double> c(cbuf.data(), d), p(pbuf.data(), d);
        sampling::sample_direction_into(sampling::OrientationLaw::uniform(), d, stream, c);
        const double radius = reach * std::pow(stream.uniform(), 1.0 / d);
        for (int k = 0; k < d; ++k) c[k] *= radius;
        sampling::sample_direction_into(law, d, stream, p);
        return geometry::segment_hits_ball({c, p, length}, origin, rho);
    });
    est.estimate *= proposal;
    est.stderr_ *= proposal;
    return est;
}

McEstimate mc_cap_hit_probability(int d, double rho, double r, std::uint64_t trials, std::uint64_t seed,
                                  unsigned workers) {
    require_dim(d);
    if (d > 16) fail(ErrorCode::DomainError, "Monte Carlo verifiers support d <= 16");
    if (!(rho > 0.0) || !(rho < r)) fail(ErrorCode::DomainError, "cap probability requires 0 < rho < r");
    std::vector<double> x(d, 0.0);
    x[0] = r;
    const std::vector<double> origin(d, 0.0);
    const double length = 2.0 * (r + rho) + 1.0;
    return sharded_fraction(trials, seed, "cap-hit", workers, [&](RngStream& stream) {
        std::array<double, 16> pbuf{};
        std::span<double> p(pbuf.data(), d);
        sampling::sample_direction_into(sampling::OrientationLaw::uniform(), d, stream, p);
        return geometry::segment_hits_ball({x, p, length}, origin, rho);
    });
}

}  // namespace stickperc::measures
