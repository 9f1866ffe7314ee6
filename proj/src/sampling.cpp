#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "measures.hpp"

namespace stickperc::sampling {

OrientationLaw OrientationLaw::uniform() { return OrientationLaw{}; }

OrientationLaw OrientationLaw::rigid(std::vector<double> axis) {
    if (axis.size() < 2) fail(ErrorCode::DomainError, "dimension must be at least 2");
    OrientationLaw law;
    law.kind_ = Kind::Rigid;
    law.axis_ = geometry::normalized(axis);
    law.delta_ = 0.0;
    return law;
}

OrientationLaw OrientationLaw::rigid_e2(std::size_t d) {
    std::vector<double> axis(d, 0.0);
    if (d < 2) fail(ErrorCode::DomainError, "dimension must be at least 2");
    axis[1] = 1.0;
    return rigid(std::move(axis));
}

OrientationLaw OrientationLaw::bounded_density(Density phi, double delta, double bound) {
    if (!phi) fail(ErrorCode::InvalidArgument, "density callback is empty");
    if (!(delta > 0.0) || !(bound >= delta) || !std::isfinite(bound)) {
        fail(ErrorCode::DomainError, "density bounds must satisfy 0 < delta <= M < inf");
    }
    OrientationLaw law;
    law.kind_ = Kind::BoundedDensity;
    law.phi_ = std::move(phi);
    law.delta_ = delta;
    law.bound_ = bound;
    return law;
}

double OrientationLaw::density_lower_bound() const {
    switch (kind_) {
        case Kind::Uniform: return 1.0;
        case Kind::Rigid: return 0.0;
        case Kind::BoundedDensity: return delta_;
    }
    return 0.0;
}

double OrientationLaw::density(std::span<const double> p) const {
    switch (kind_) {
        case Kind::Uniform: return 1.0;
        case Kind::Rigid: fail(ErrorCode::DomainError, "rigid law has no density");
        case Kind::BoundedDensity: return phi_(p);
    }
    return 0.0;
}

std::string OrientationLaw::tag() const {
    switch (kind_) {
        case Kind::Uniform: return "uniform";
        case Kind::Rigid: return "rigid";
        case Kind::BoundedDensity: return "density";
    }
    return "unknown";
}

BoxRegion BoxRegion::cube(std::size_t d, double lo, double hi) {
    return {std::vector<double>(d, lo), std::vector<double>(d, hi)};
}

double BoxRegion::volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < dim(); ++k) v *= side(k);
    return v;
}

bool BoxRegion::contains(std::span<const double> x) const {
    for (std::size_t k = 0; k < dim(); ++k) {
        if (x[k] < low[k] || x[k] > high[k]) return false;
    }
    return true;
}

BoxRegion BoxRegion::inflated(double margin) const {
    BoxRegion out = *this;
    for (std::size_t k = 0; k < dim(); ++k) {
        out.low[k] -= margin;
        out.high[k] += margin;
    }
    return out;
}

void BoxRegion::validate() const {
    if (low.size() != high.size() || low.size() < 2) fail(ErrorCode::InvalidArgument, "box must have matching corners, d >= 2");
    for (std::size_t k = 0; k < dim(); ++k) {
        if (!std::isfinite(low[k]) || !std::isfinite(high[k]) || !(low[k] < high[k])) {
            fail(ErrorCode::InvalidArgument, "box requires low_k < high_k, finite");
        }
    }
}

void Configuration::push(std::span<const double> c, std::span<const double> p) {
    centers.insert(centers.end(), c.begin(), c.end());
    dirs.insert(dirs.end(), p.begin(), p.end());
}

std::uint64_t poisson_count(double mean, RngStream& stream) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) fail(ErrorCode::DomainError, "Poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        double u = stream.uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            double next = cdf + p;
            if (next == cdf) break;  // tail below double resolution
            cdf = next;
        }
        return k;
    }
    // PTRS, Hormann (1993), "The transformed rejection method for generating Poisson random variables".
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = stream.uniform() - 0.5;
        double v = stream.uniform();
        double us = 0.5 - std::abs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - measures::log_gamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

void sample_direction_into(const OrientationLaw& law, std::size_t d, RngStream& stream, std::span<double> out) {
    if (law.kind() == OrientationLaw::Kind::Rigid) {
        if (law.axis().size() != d) fail(ErrorCode::InvalidArgument, "rigid axis dimension mismatch");
        std::copy(law.axis().begin(), law.axis().end(), out.begin());
        return;
    }
    auto draw_uniform = [&] {
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                out[k] = stream.normal();
                n2 += out[k] * out[k];
            }
        } while (!(n2 > 1e-300));
        double inv = 1.0 / std::sqrt(n2);
        for (std::size_t k = 0; k < d; ++k) out[k] *= inv;
    };
    if (law.kind() == OrientationLaw::Kind::Uniform) {
        draw_uniform();
        return;
    }
    const double bound = law.density_upper_bound();
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        draw_uniform();
        double phi = law.density(std::span<const double>(out.data(), d));
        if (stream.uniform() * bound < phi) return;
    }
    fail(ErrorCode::RejectionStall, "10^6 consecutive rejections; density bound M is likely wrong");
}

std::vector<double> sample_direction(const OrientationLaw& law, std::size_t d, RngStream& stream) {
    std::vector<double> out(d);
    sample_direction_into(law, d, stream, out);
    return out;
}

Configuration sample_configuration(std::size_t d, double length, double intensity, const OrientationLaw& law,
                                   const BoxRegion& box, RngStream& stream) {
    if (d < 2) fail(ErrorCode::DomainError, "dimension must be at least 2");
    if (!(intensity > 0.0) || !std::isfinite(intensity)) fail(ErrorCode::DomainError, "intensity must be positive");
    if (!(length > 0.0)) fail(ErrorCode::DomainError, "stick length must be positive");
    box.validate();
    if (box.dim() != d) fail(ErrorCode::InvalidArgument, "box dimension mismatch");
    double mean = intensity * box.volume();
    if (!(mean <= static_cast<double>(kMaxExpectedCount))) {
        fail(ErrorCode::CapacityExceeded, "expected stick count exceeds 10^9");
    }
    Configuration config;
    config.d = d;
    config.length = length;
    config.intensity = intensity;
    config.law = law.tag();
    config.box = box;
    config.window = box;
    config.seed = stream.seed();
    std::uint64_t n = poisson_count(mean, stream);
    config.centers.resize(n * d);
    config.dirs.resize(n * d);
    for (std::uint64_t i = 0; i < n; ++i) {
        double* c = config.centers.data() + i * d;
        for (std::size_t k = 0; k < d; ++k) c[k] = stream.uniform(box.low[k], box.high[k]);
        sample_direction_into(law, d, stream, std::span<double>(config.dirs.data() + i * d, d));
    }
    return config;
}

Configuration sample_configuration(std::size_t d, double length, double intensity, const OrientationLaw& law,
                                   const BoxRegion& box, std::uint64_t seed) {
    RngStream stream(derive_seed(seed, "configuration"));
    Configuration config = sample_configuration(d, length, intensity, law, box, stream);
    config.seed = seed;
    return config;
}

Configuration sample_windowed(std::size_t d, double length, double intensity, const OrientationLaw& law,
                              double side, std::uint64_t seed) {
    if (!(side > 0.0)) fail(ErrorCode::DomainError, "window side must be positive");
    BoxRegion window = BoxRegion::cube(d, 0.0, side);
    Configuration config =
        sample_configuration(d, length, intensity, law, window.inflated(0.5 * length + geometry::kStickRadius), seed);
    config.window = window;
    return config;
}

std::string to_json(const Configuration& config) {
    nlohmann::ordered_json j;
    j["schema_version"] = kConfigurationSchemaVersion;
    j["kind"] = "stick_configuration";
    j["d"] = config.d;
    j["L"] = config.length;
    j["lambda"] = config.intensity;
    j["law"] = config.law;
    j["seed"] = config.seed;
    j["box"] = {{"low", config.box.low}, {"high", config.box.high}};
    j["window"] = {{"low", config.window.low}, {"high", config.window.high}};
    j["count"] = config.size();
    j["centers"] = config.centers;
    j["dirs"] = config.dirs;
    return j.dump();
}

Configuration configuration_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::IoError, std::string("malformed configuration JSON: ") + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != kConfigurationSchemaVersion) {
            fail(ErrorCode::IoError, "unsupported configuration schema_version");
        }
        Configuration c;
        c.d = j.at("d").get<std::size_t>();
        c.length = j.at("L").get<double>();
        c.intensity = j.at("lambda").get<double>();
        c.law = j.at("law").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.box.low = j.at("box").at("low").get<std::vector<double>>();
        c.box.high = j.at("box").at("high").get<std::vector<double>>();
        c.window.low = j.at("window").at("low").get<std::vector<double>>();
        c.window.high = j.at("window").at("high").get<std::vector<double>>();
        c.centers = j.at("centers").get<std::vector<double>>();
        c.dirs = j.at("dirs").get<std::vector<double>>();
        if (c.centers.size() != c.dirs.size() || c.centers.size() != c.d * j.at("count").get<std::size_t>()) {
            fail(ErrorCode::IoError, "configuration arrays do not match count * d");
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::IoError, std::string("configuration JSON missing fields: ") + e.what());
    }
}

}  // namespace stickperc::sampling
