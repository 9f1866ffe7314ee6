#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "geometry.hpp"

namespace stickperc::sampling {

/// Probability law Theta(dp) of stick directions on the unit sphere.
class OrientationLaw {
public:
    enum class Kind { Uniform, Rigid, BoundedDensity };
    using Density = std::function<double(std::span<const double>)>;

    static OrientationLaw uniform();
    /// Point mass on `axis` (normalised on construction).
    static OrientationLaw rigid(std::vector<double> axis);
    /// Rigid along e_2, the conventional choice.
    static OrientationLaw rigid_e2(std::size_t d);
    /// Theta(dp) = phi(p) H(dp) with delta <= phi <= bound; the caller asserts phi integrates to 1.
    static OrientationLaw bounded_density(Density phi, double delta, double bound);

    Kind kind() const { return kind_; }
    const std::vector<double>& axis() const { return axis_; }
    /// Essential lower bound delta of the density w.r.t. normalised Hausdorff measure (0 for rigid).
    double density_lower_bound() const;
    double density_upper_bound() const { return bound_; }
    double density(std::span<const double> p) const;
    std::string tag() const;

private:
    Kind kind_ = Kind::Uniform;
    std::vector<double> axis_;
    Density phi_;
    double delta_ = 1.0;
    double bound_ = 1.0;
};

/// Axis-aligned box [low, high].
struct BoxRegion {
    std::vector<double> low;
    std::vector<double> high;

    static BoxRegion cube(std::size_t d, double lo, double hi);
    std::size_t dim() const { return low.size(); }
    double volume() const;
    double side(std::size_t k) const { return high[k] - low[k]; }
    bool contains(std::span<const double> x) const;
    BoxRegion inflated(double margin) const;
    void validate() const;
};

/// One sampled realisation of the stick process restricted to a box.
struct Configuration {
    std::size_t d = 2;
    double length = 1.0;
    double intensity = 0.0;
    std::string law;
    BoxRegion box;     // where centres were sampled
    BoxRegion window;  // observation window (equal to box unless set by the consumer)
    std::uint64_t seed = 0;
    std::vector<double> centers;  // count * d, row-major
    std::vector<double> dirs;     // count * d, row-major

    std::size_t size() const { return d == 0 ? 0 : centers.size() / d; }
    std::span<const double> center(std::size_t i) const { return {centers.data() + i * d, d}; }
    std::span<const double> dir(std::size_t i) const { return {dirs.data() + i * d, d}; }
    geometry::SegmentView segment(std::size_t i) const { return {center(i), dir(i), length}; }
    void push(std::span<const double> c, std::span<const double> p);
};

inline constexpr std::uint64_t kMaxExpectedCount = 1000000000ULL;
inline constexpr int kConfigurationSchemaVersion = 1;

/// Exact Poisson(mean) draw: sequential inversion below 30, PTRS transformed rejection above.
std::uint64_t poisson_count(double mean, RngStream& stream);

/// One direction from `law`. Uniform: normalised Gaussian vector. Density: rejection against
/// uniform proposals with acceptance phi/M; RejectionStall after 10^6 consecutive rejections.
std::vector<double> sample_direction(const OrientationLaw& law, std::size_t d, RngStream& stream);
void sample_direction_into(const OrientationLaw& law, std::size_t d, RngStream& stream, std::span<double> out);

/// Poisson configuration of intensity `intensity` in `box`; deterministic in (inputs, seed).
Configuration sample_configuration(std::size_t d, double length, double intensity, const OrientationLaw& law,
                                   const BoxRegion& box, std::uint64_t seed);

/// Same, drawing from an already-positioned stream.
Configuration sample_configuration(std::size_t d, double length, double intensity, const OrientationLaw& law,
                                   const BoxRegion& box, RngStream& stream);

/// Observation window [0, side]^d with centres drawn from the window grown by L/2 + 1, so
/// every stick whose body meets the window is present.
Configuration sample_windowed(std::size_t d, double length, double intensity, const OrientationLaw& law,
                              double side, std::uint64_t seed);

std::string to_json(const Configuration& config);
Configuration configuration_from_json(const std::string& text);

}  // namespace stickperc::sampling
