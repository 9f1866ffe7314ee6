#pragma once

#include <span>
#include <vector>

namespace stickperc::geometry {

using Vec = std::span<const double>;

/// Radius of every stick. Two sticks overlap iff their segments are within 2 * kStickRadius.
inline constexpr double kStickRadius = 1.0;
inline constexpr double kIntersectDistance = 2.0 * kStickRadius;
/// 1 - <p,q>^2 below this counts as parallel.
inline constexpr double kParallelTolerance = 1e-12;

/// Non-owning view of the segment {center + t*dir : |t| <= length/2}.
struct SegmentView {
    Vec center;
    Vec dir;
    double length = 0.0;

    std::size_t dim() const { return center.size(); }
};

/// Owning segment. The stick it describes is its closed 1-neighbourhood.
struct Segment {
    std::vector<double> center;
    std::vector<double> dir;
    double length = 0.0;

    SegmentView view() const { return {center, dir, length}; }
};

double dot(Vec a, Vec b);
double norm(Vec a);
/// Throws DomainError on a zero vector.
std::vector<double> normalized(Vec a);
/// True when ||p|| is within 1e-12 of 1.
bool is_unit(Vec p);

/// Squared distance from y to the infinite line through x with direction p.
double line_point_distance_sq(Vec x, Vec p, Vec y);

/// h(t): squared distance from x + t*p to the infinite line through y with direction q.
double line_line_distance_profile(Vec x, Vec p, Vec y, Vec q, double t);

/// Parameter t minimising h(t). Throws ParallelLines when 1 - <p,q>^2 < kParallelTolerance.
double line_line_t_min(Vec x, Vec p, Vec y, Vec q);

/// Exact minimum distance between two finite segments, any dimension >= 2.
/// Symmetric bit-for-bit in its arguments.
double segment_segment_distance(const SegmentView& a, const SegmentView& b);

/// Raw kernel behind segment_segment_distance for hot loops (no argument canonicalisation).
double segment_segment_distance_raw(std::size_t d, const double* ca, const double* pa, double half_a,
                                    const double* cb, const double* pb, double half_b);

/// Closed sticks of radius 1 overlap iff their segments are within distance 2 (ties count).
bool sticks_intersect(const SegmentView& a, const SegmentView& b);

/// True iff the segment passes within rho of c.
bool segment_hits_ball(const SegmentView& s, Vec c, double rho);

/// Distance from a segment to the axis-aligned box [low, high] (a face when low_k == high_k).
double segment_box_distance(const SegmentView& s, Vec low, Vec high);

/// inf of ||x + t p - y - tau q|| over max(|t - t1|, |tau - tau1|) >= w.
/// Requires |<p,q>| <= 1/sqrt(2) and ||x + t1 p - y - tau1 q|| <= 2 (PreconditionViolated otherwise).
double min_distance_outside_window(Vec x, Vec p, Vec y, Vec q, double t1, double tau1, double w);

}  // namespace stickperc::geometry
