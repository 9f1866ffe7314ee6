#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "core.hpp"

namespace stickperc::geometry {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
    if (a != b) fail(ErrorCode::InvalidArgument, "dimension mismatch");
}

// ||r + t*pa - tau*pb||^2
inline double offset_sq(std::size_t d, const double* r, const double* pa, const double* pb, double t,
                        double tau) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        double v = r[k] + t * pa[k] - tau * pb[k];
        s += v * v;
    }
    return s;
}

inline double clamp(double v, double h) { return v < -h ? -h : (v > h ? h : v); }

bool lex_less(const SegmentView& a, const SegmentView& b) {
    for (std::size_t k = 0; k < a.dim(); ++k) {
        if (a.center[k] != b.center[k]) return a.center[k] < b.center[k];
    }
    for (std::size_t k = 0; k < a.dim(); ++k) {
        if (a.dir[k] != b.dir[k]) return a.dir[k] < b.dir[k];
    }
    return a.length < b.length;
}

}  // namespace

double dot(Vec a, Vec b) {
    require_same_dim(a.size(), b.size());
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm(Vec a) { return std::sqrt(dot(a, a)); }

std::vector<double> normalized(Vec a) {
    double n = norm(a);
    if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorCode::DomainError, "cannot normalise a zero or non-finite vector");
    std::vector<double> out(a.begin(), a.end());
    for (double& v : out) v /= n;
    return out;
}

bool is_unit(Vec p) { return std::abs(norm(p) - 1.0) <= 1e-12; }

double line_point_distance_sq(Vec x, Vec p, Vec y) {
    require_same_dim(x.size(), p.size());
    require_same_dim(x.size(), y.size());
    double rr = 0.0, rp = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double r = x[k] - y[k];
        rr += r * r;
        rp += r * p[k];
    }
    return std::max(0.0, rr - rp * rp);
}

double line_line_distance_profile(Vec x, Vec p, Vec y, Vec q, double t) {
    require_same_dim(x.size(), p.size());
    require_same_dim(x.size(), y.size());
    require_same_dim(x.size(), q.size());
    double rr = 0.0, rp = 0.0, rq = 0.0, pq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double r = x[k] - y[k];
        rr += r * r;
        rp += r * p[k];
        rq += r * q[k];
        pq += p[k] * q[k];
    }
    double h = rr + t * t * (1.0 - pq * pq) - rq * rq + 2.0 * t * (rp - pq * rq);
    return std::max(0.0, h);
}

double line_line_t_min(Vec x, Vec p, Vec y, Vec q) {
    require_same_dim(x.size(), p.size());
    require_same_dim(x.size(), y.size());
    require_same_dim(x.size(), q.size());
    double rp = 0.0, rq = 0.0, pq = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double r = x[k] - y[k];
        rp += r * p[k];
        rq += r * q[k];
        pq += p[k] * q[k];
    }
    double denom = 1.0 - pq * pq;
    if (denom < kParallelTolerance) fail(ErrorCode::ParallelLines, "lines are parallel");
    return -(rp - pq * rq) / denom;
}

double segment_segment_distance_raw(std::size_t d, const double* ca, const double* pa, double half_a,
                                    const double* cb, const double* pb, double half_b) {
    std::array<double, 16> rbuf{};
    std::vector<double> rheap;
    double* r = rbuf.data();
    if (d > rbuf.size()) {
        rheap.resize(d);
        r = rheap.data();
    }
    double rp = 0.0, rq = 0.0, c = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        r[k] = ca[k] - cb[k];
        rp += r[k] * pa[k];
        rq += r[k] * pb[k];
        c += pa[k] * pb[k];
    }
    double denom = 1.0 - c * c;
    if (denom >= kParallelTolerance) {
        double t = (c * rq - rp) / denom;
        double tau = (rq - c * rp) / denom;
        if (std::abs(t) <= half_a && std::abs(tau) <= half_b) {
            return std::sqrt(offset_sq(d, r, pa, pb, t, tau));
        }
    }
    // The minimum lies on the boundary of the parameter rectangle; each edge is a 1-D convex
    // quadratic minimised by clamping.
    double best = std::numeric_limits<double>::infinity();
    for (double t : {-half_a, half_a}) {
        double tau = clamp(t * c + rq, half_b);
        best = std::min(best, offset_sq(d, r, pa, pb, t, tau));
    }
    for (double tau : {-half_b, half_b}) {
        double t = clamp(tau * c - rp, half_a);
        best = std::min(best, offset_sq(d, r, pa, pb, t, tau));
    }
    return std::sqrt(best);
}

double segment_segment_distance(const SegmentView& a, const SegmentView& b) {
    require_same_dim(a.dim(), b.dim());
    require_same_dim(a.dim(), a.dir.size());
    require_same_dim(b.dim(), b.dir.size());
    const SegmentView& first = lex_less(b, a) ? b : a;
    const SegmentView& second = (&first == &a) ? b : a;
    return segment_segment_distance_raw(first.dim(), first.center.data(), first.dir.data(), 0.5 * first.length,
                                        second.center.data(), second.dir.data(), 0.5 * second.length);
}

bool sticks_intersect(const SegmentView& a, const SegmentView& b) {
    return segment_segment_distance(a, b) <= kIntersectDistance;
}

bool segment_hits_ball(const SegmentView& s, Vec c, double rho) {
    if (!(rho > 0.0)) fail(ErrorCode::DomainError, "ball radius must be positive");
    require_same_dim(s.dim(), c.size());
    double proj = 0.0;
    for (std::size_t k = 0; k < s.dim(); ++k) proj += (c[k] - s.center[k]) * s.dir[k];
    double t = clamp(proj, 0.5 * s.length);
    double dd = 0.0;
    for (std::size_t k = 0; k < s.dim(); ++k) {
        double v = s.center[k] + t * s.dir[k] - c[k];
        dd += v * v;
    }
    return std::sqrt(dd) <= rho;
}

double segment_box_distance(const SegmentView& s, Vec low, Vec high) {
    const std::size_t d = s.dim();
    require_same_dim(d, low.size());
    require_same_dim(d, high.size());
    const double half = 0.5 * s.length;
    auto value = [&](double t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            double v = s.center[k] + t * s.dir[k];
            double gap = v < low[k] ? low[k] - v : (v > high[k] ? v - high[k] : 0.0);
            acc += gap * gap;
        }
        return acc;
    };
    // Piecewise quadratic and convex in t; breakpoints where a coordinate crosses a slab wall.
    std::vector<double> knots{-half, half};
    for (std::size_t k = 0; k < d; ++k) {
        if (s.dir[k] == 0.0) continue;
        for (double wall : {low[k], high[k]}) {
            double t = (wall - s.center[k]) / s.dir[k];
            if (t > -half && t < half) knots.push_back(t);
        }
    }
    std::sort(knots.begin(), knots.end());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double a = knots[i], b = knots[i + 1];
        best = std::min(best, value(a));
        if (!(b > a)) continue;
        double mid = 0.5 * (a + b);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            double v = s.center[k] + mid * s.dir[k];
            double wall;
            if (v < low[k]) {
                wall = low[k];
            } else if (v > high[k]) {
                wall = high[k];
            } else {
                continue;
            }
            num += s.dir[k] * (s.center[k] - wall);
            den += s.dir[k] * s.dir[k];
        }
        if (den > 0.0) {
            double t = std::clamp(-num / den, a, b);
            best = std::min(best, value(t));
        } else {
            best = std::min(best, value(mid));
        }
    }
    best = std::min(best, value(knots.back()));
    return std::sqrt(best);
}

double min_distance_outside_window(Vec x, Vec p, Vec y, Vec q, double t1, double tau1, double w) {
    require_same_dim(x.size(), p.size());
    require_same_dim(x.size(), y.size());
    require_same_dim(x.size(), q.size());
    if (!(w >= 0.0)) fail(ErrorCode::DomainError, "window half-width must be non-negative");
    double pq = dot(p, q);
    if (std::abs(pq) > 1.0 / std::sqrt(2.0) + 1e-12) {
        fail(ErrorCode::PreconditionViolated, "|<p,q>| exceeds 1/sqrt(2)");
    }
    const std::size_t d = x.size();
    std::vector<double> r(d);
    for (std::size_t k = 0; k < d; ++k) r[k] = x[k] - y[k];
    double anchor = offset_sq(d, r.data(), p.data(), q.data(), t1, tau1);
    if (anchor > 4.0 + 1e-12) fail(ErrorCode::PreconditionViolated, "anchor points are farther apart than 2");

    double t_star = line_line_t_min(x, p, y, q);
    double tau_star = t_star * pq + dot(r, q);
    if (std::max(std::abs(t_star - t1), std::abs(tau_star - tau1)) >= w) {
        return std::sqrt(offset_sq(d, r.data(), p.data(), q.data(), t_star, tau_star));
    }
    // Convex objective with its minimiser inside the window: the infimum sits on the window
    // boundary, and each boundary side extends to a full line contained in the region.
    double best = std::numeric_limits<double>::infinity();
    for (double t : {t1 - w, t1 + w}) best = std::min(best, line_line_distance_profile(x, p, y, q, t));
    for (double tau : {tau1 - w, tau1 + w}) best = std::min(best, line_line_distance_profile(y, q, x, p, tau));
    return std::sqrt(best);
}

}  // namespace stickperc::geometry
