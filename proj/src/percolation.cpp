#include "percolation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "measures.hpp"
#include "parallel.hpp"

namespace stickperc::percolation {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
    if (n > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::CapacityExceeded, "too many sticks for UnionFind");
    std::iota(parent_.begin(), parent_.end(), 0u);
}

std::size_t UnionFind::find(std::size_t i) {
    std::uint32_t x = static_cast<std::uint32_t>(i);
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(std::size_t i, std::size_t j) {
    std::size_t a = find(i), b = find(j);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = static_cast<std::uint32_t>(a);
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
    return true;
}

SpatialIndex::SpatialIndex(const sampling::Configuration& config, double cell, std::span<const char> active)
    : d_(config.d), cell_(cell) {
    if (!(cell > 0.0) || !std::isfinite(cell)) fail(ErrorCode::InvalidArgument, "cell size must be positive");
    const std::size_t n = config.size();
    if (!active.empty() && active.size() != n) fail(ErrorCode::InvalidArgument, "active mask size mismatch");
    body_low_.resize(n * d_);
    body_high_.resize(n * d_);
    cell_low_.assign(n * d_, 0);
    cell_high_.assign(n * d_, -1);
    indexed_.assign(n, 0);
    origin_.assign(d_, std::numeric_limits<double>::infinity());
    std::vector<double> top(d_, -std::numeric_limits<double>::infinity());
    const double half = 0.5 * config.length;
    for (std::size_t i = 0; i < n; ++i) {
        auto c = config.center(i);
        auto p = config.dir(i);
        for (std::size_t k = 0; k < d_; ++k) {
            double reach = std::abs(p[k]) * half + geometry::kStickRadius;
            body_low_[i * d_ + k] = c[k] - reach;
            body_high_[i * d_ + k] = c[k] + reach;
        }
        if (!active.empty() && !active[i]) continue;
        indexed_[i] = 1;
        for (std::size_t k = 0; k < d_; ++k) {
            origin_[k] = std::min(origin_[k], body_low_[i * d_ + k]);
            top[k] = std::max(top[k], body_high_[i * d_ + k]);
        }
    }
    extent_.assign(d_, 1);
    stride_.assign(d_, 1);
    bool any = std::any_of(indexed_.begin(), indexed_.end(), [](char v) { return v != 0; });
    if (!any) {
        std::fill(origin_.begin(), origin_.end(), 0.0);
        return;
    }
    double cells_total = 1.0;
    for (std::size_t k = 0; k < d_; ++k) {
        extent_[k] = static_cast<std::int64_t>(std::floor((top[k] - origin_[k]) / cell_)) + 1;
        cells_total *= static_cast<double>(extent_[k]);
    }
    if (cells_total > 9.0e18) fail(ErrorCode::CapacityExceeded, "spatial index grid too large");
    for (std::size_t k = 1; k < d_; ++k) stride_[k] = stride_[k - 1] * static_cast<std::uint64_t>(extent_[k - 1]);

    std::vector<std::int64_t> coord(d_);
    for (std::size_t i = 0; i < n; ++i) {
        if (!indexed_[i]) continue;
        std::uint64_t cells = 1;
        for (std::size_t k = 0; k < d_; ++k) {
            auto lo = static_cast<std::int64_t>(std::floor((body_low_[i * d_ + k] - origin_[k]) / cell_));
            auto hi = static_cast<std::int64_t>(std::floor((body_high_[i * d_ + k] - origin_[k]) / cell_));
            lo = std::clamp<std::int64_t>(lo, 0, extent_[k] - 1);
            hi = std::clamp<std::int64_t>(hi, 0, extent_[k] - 1);
            cell_low_[i * d_ + k] = lo;
            cell_high_[i * d_ + k] = hi;
            cells *= static_cast<std::uint64_t>(hi - lo + 1);
        }
        std::copy_n(cell_low_.begin() + static_cast<std::ptrdiff_t>(i * d_), d_, coord.begin());
        for (std::uint64_t c = 0; c < cells; ++c) {
            entries_.emplace_back(key_of(coord.data()), static_cast<std::uint32_t>(i));
            for (std::size_t k = 0; k < d_; ++k) {
                if (++coord[k] <= cell_high_[i * d_ + k]) break;
                coord[k] = cell_low_[i * d_ + k];
            }
        }
    }
    std::sort(entries_.begin(), entries_.end());
}

std::uint64_t SpatialIndex::key_of(const std::int64_t* coords) const {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < d_; ++k) key += static_cast<std::uint64_t>(coords[k]) * stride_[k];
    return key;
}

std::vector<std::int64_t> SpatialIndex::cell_coords(std::uint64_t key) const {
    std::vector<std::int64_t> c(d_);
    for (std::size_t k = d_; k-- > 0;) {
        c[k] = static_cast<std::int64_t>(key / stride_[k]);
        key %= stride_[k];
    }
    return c;
}

std::vector<std::uint64_t> SpatialIndex::cells_of(std::size_t i) const {
    std::vector<std::uint64_t> out;
    for (const auto& [key, stick] : entries_) {
        if (stick == i) out.push_back(key);
    }
    return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SpatialIndex::candidate_pairs() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) { out.emplace_back(i, j); });
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool boxes_overlap(std::span<const double> alo, std::span<const double> ahi, std::span<const double> blo,
                   std::span<const double> bhi) {
    for (std::size_t k = 0; k < alo.size(); ++k) {
        if (ahi[k] < blo[k] || bhi[k] < alo[k]) return false;
    }
    return true;
}

// Body of stick i meets the face x_axis = value of the window.
bool touches_face(const sampling::Configuration& config, std::size_t i, std::size_t axis, double value) {
    auto c = config.center(i);
    auto p = config.dir(i);
    double reach = std::abs(p[axis]) * 0.5 * config.length + geometry::kStickRadius;
    if (c[axis] - reach > value || c[axis] + reach < value) return false;
    std::vector<double> lo = config.window.low, hi = config.window.high;
    lo[axis] = hi[axis] = value;
    return geometry::segment_box_distance(config.segment(i), lo, hi) <= geometry::kStickRadius;
}

}  // namespace

bool stick_meets_window(const sampling::Configuration& config, std::size_t i) {
    const auto& w = config.window;
    if (w.contains(config.center(i))) return true;
    auto p = config.dir(i);
    auto c = config.center(i);
    for (std::size_t k = 0; k < config.d; ++k) {
        double reach = std::abs(p[k]) * 0.5 * config.length + geometry::kStickRadius;
        if (c[k] + reach < w.low[k] || c[k] - reach > w.high[k]) return false;
    }
    return geometry::segment_box_distance(config.segment(i), w.low, w.high) <= geometry::kStickRadius;
}

ClusterOutput cluster(const sampling::Configuration& config, const ClusterOptions& options) {
    const std::size_t n = config.size();
    const std::size_t d = config.d;
    if (options.axis < 0 || static_cast<std::size_t>(options.axis) >= d) fail(ErrorCode::InvalidArgument, "axis out of range");
    if (config.window.dim() != d) fail(ErrorCode::InvalidArgument, "window dimension mismatch");
    ClusterOutput out{UnionFind(n), std::vector<char>(n, 0), CrossingResult{}};
    out.result.axis = options.axis;
    out.result.crossed_axes.assign(d, 0);
    for (std::size_t i = 0; i < n; ++i) out.active[i] = stick_meets_window(config, i) ? 1 : 0;

    const double cell = options.cell > 0.0 ? options.cell : config.length + 2.0 * geometry::kStickRadius;
    SpatialIndex index(config, cell, out.active);
    const double half = 0.5 * config.length;
    std::uint64_t tests = 0;
    index.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) {
        if (!boxes_overlap(index.body_low(i), index.body_high(i), index.body_low(j), index.body_high(j))) return;
        if (out.components.find(i) == out.components.find(j)) return;
        ++tests;
        double dist = geometry::segment_segment_distance_raw(d, config.centers.data() + i * d, config.dirs.data() + i * d,
                                                             half, config.centers.data() + j * d,
                                                             config.dirs.data() + j * d, half);
        if (dist <= geometry::kIntersectDistance) out.components.unite(i, j);
    });
    out.result.pair_tests = tests;

    // Per root: bit 2k = touches low face on axis k, bit 2k+1 = touches high face.
    std::vector<std::uint64_t> faces(n, 0);
    std::vector<std::size_t> sizes(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.active[i]) continue;
        std::size_t r = out.components.find(i);
        ++sizes[r];
        for (std::size_t k = 0; k < d; ++k) {
            if (touches_face(config, i, k, config.window.low[k])) faces[r] |= 1ULL << (2 * k);
            if (touches_face(config, i, k, config.window.high[k])) faces[r] |= 1ULL << (2 * k + 1);
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (sizes[r] == 0) continue;
        ++out.result.cluster_count;
        out.result.largest_cluster = std::max(out.result.largest_cluster, sizes[r]);
        for (std::size_t k = 0; k < d; ++k) {
            if (((faces[r] >> (2 * k)) & 3ULL) == 3ULL) out.result.crossed_axes[k] = 1;
        }
    }
    out.result.crossed = out.result.crossed_axes[static_cast<std::size_t>(options.axis)] != 0;
    return out;
}

bool crossing_event(const sampling::Configuration& config, int axis) {
    ClusterOptions options;
    options.axis = axis;
    return cluster(config, options).result.crossed;
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) fail(ErrorCode::InsufficientTrials, "Wilson interval needs n >= 1");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double halfw = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, centre - halfw), std::min(1.0, centre + halfw)};
}

namespace {

void check_params(const CrossingParams& params) {
    if (params.d < 2) fail(ErrorCode::DomainError, "dimension must be at least 2");
    if (params.replicates < 1) fail(ErrorCode::InsufficientTrials, "replicates must be >= 1");
    if (params.axis < 0 || params.axis >= params.d) fail(ErrorCode::InvalidArgument, "axis out of range");
    if (!(params.length > 0.0)) fail(ErrorCode::DomainError, "stick length must be positive");
    if (!(params.side > 0.0)) fail(ErrorCode::DomainError, "window side must be positive");
}

void finish(CrossingEstimate& est) {
    est.crossings = 0;
    for (char c : est.crossed) est.crossings += c ? 1u : 0u;
    est.frequency = static_cast<double>(est.crossings) / est.replicates;
    est.ci = wilson_interval(est.crossings, est.replicates);
}

}  // namespace

CrossingEstimate crossing_probability(double intensity, const sampling::OrientationLaw& law,
                                      const CrossingParams& params) {
    check_params(params);
    const auto d = static_cast<std::size_t>(params.d);
    CrossingEstimate est;
    est.lambda = intensity;
    est.replicates = params.replicates;
    est.crossed.assign(params.replicates, 0);
    est.seeds.resize(params.replicates);
    std::vector<std::vector<char>> axes(params.replicates);
    for (std::uint32_t r = 0; r < params.replicates; ++r) est.seeds[r] = derive_seed(params.seed, "replicate", params.probe_index, r);
    parallel_for(params.replicates, params.workers, [&](std::size_t r) {
        auto config = sampling::sample_windowed(d, params.length, intensity, law, params.side, est.seeds[r]);
        ClusterOptions options;
        options.axis = params.axis;
        auto res = cluster(config, options).result;
        est.crossed[r] = res.crossed ? 1 : 0;
        axes[r] = res.crossed_axes;
    });
    est.axis_crossings.assign(d, 0);
    for (const auto& a : axes) {
        for (std::size_t k = 0; k < d; ++k) est.axis_crossings[k] += a[k] ? 1u : 0u;
    }
    finish(est);
    return est;
}

sampling::Configuration thin(const sampling::Configuration& config, double keep, std::uint64_t mark_key) {
    sampling::Configuration out = config;
    out.centers.clear();
    out.dirs.clear();
    out.intensity = config.intensity * std::clamp(keep, 0.0, 1.0);
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (hash_uniform(mark_key + mix64(i)) < keep) out.push(config.center(i), config.dir(i));
    }
    return out;
}

std::vector<CrossingEstimate> coupled_crossing_curve(std::span<const double> intensities,
                                                     const sampling::OrientationLaw& law,
                                                     const CrossingParams& params) {
    check_params(params);
    if (intensities.empty()) fail(ErrorCode::InvalidArgument, "no intensities");
    for (std::size_t m = 0; m < intensities.size(); ++m) {
        if (!(intensities[m] > 0.0) || (m > 0 && !(intensities[m] > intensities[m - 1]))) {
            fail(ErrorCode::InvalidArgument, "intensities must be positive and strictly increasing");
        }
    }
    const auto d = static_cast<std::size_t>(params.d);
    const double top = intensities.back();
    std::vector<CrossingEstimate> curve(intensities.size());
    for (std::size_t m = 0; m < curve.size(); ++m) {
        curve[m].lambda = intensities[m];
        curve[m].replicates = params.replicates;
        curve[m].crossed.assign(params.replicates, 0);
        curve[m].seeds.resize(params.replicates);
        curve[m].axis_crossings.assign(d, 0);
    }
    parallel_for(params.replicates, params.workers, [&](std::size_t r) {
        std::uint64_t seed = derive_seed(params.seed, "coupled", params.probe_index, r);
        auto full = sampling::sample_windowed(d, params.length, top, law, params.side, seed);
        std::uint64_t marks = derive_seed(seed, "marks");
        for (std::size_t m = 0; m < curve.size(); ++m) {
            auto config = thin(full, intensities[m] / top, marks);
            config.window = full.window;
            ClusterOptions options;
            options.axis = params.axis;
            curve[m].crossed[r] = cluster(config, options).result.crossed ? 1 : 0;
            curve[m].seeds[r] = seed;
        }
    });
    for (auto& est : curve) finish(est);
    return curve;
}

int default_axis(const sampling::OrientationLaw& law) {
    (void)law;
    return 0;
}

LogisticFit fit_logistic(std::span<const CrossingEstimate> trace) {
    LogisticFit fit;
    if (trace.size() < 2) return fit;
    double wsum = 0.0, xsum = 0.0;
    for (const auto& p : trace) {
        wsum += p.replicates;
        xsum += p.replicates * std::log(p.lambda);
    }
    fit.center = xsum / wsum;
    double a = 0.0, b = 1.0;
    bool converged = false;
    double h00 = 0, h01 = 0, h11 = 0;
    for (int iter = 0; iter < 200; ++iter) {
        double g0 = 0, g1 = 0;
        h00 = h01 = h11 = 0;
        for (const auto& p : trace) {
            double x = std::log(p.lambda) - fit.center;
            double eta = a + b * x;
            double mu = 1.0 / (1.0 + std::exp(-eta));
            double n = p.replicates;
            double w = n * mu * (1.0 - mu);
            g0 += p.crossings - n * mu;
            g1 += (p.crossings - n * mu) * x;
            h00 += w;
            h01 += w * x;
            h11 += w * x * x;
        }
        double det = h00 * h11 - h01 * h01;
        if (!(det > 1e-300)) return fit;
        double da = (h11 * g0 - h01 * g1) / det;
        double db = (h00 * g1 - h01 * g0) / det;
        // Damp long steps; complete separation drives b to infinity.
        double step = std::max(std::abs(da), std::abs(db));
        if (step > 5.0) {
            da *= 5.0 / step;
            db *= 5.0 / step;
        }
        a += da;
        b += db;
        if (!std::isfinite(a) || !std::isfinite(b) || std::abs(b) > 1e4) return fit;
        if (step < 1e-10) {
            converged = true;
            break;
        }
    }
    if (!converged || !(b > 0.0)) return fit;
    double det = h00 * h11 - h01 * h01;
    double v00 = h11 / det, v01 = -h01 / det, v11 = h00 / det;
    double ga = -1.0 / b, gb = a / (b * b);
    double var = ga * ga * v00 + 2.0 * ga * gb * v01 + gb * gb * v11;
    if (!(var >= 0.0) || !std::isfinite(var)) return fit;
    fit.ok = true;
    fit.intercept = a;
    fit.slope = b;
    fit.midpoint = fit.center - a / b;
    fit.midpoint_se = std::sqrt(var);
    return fit;
}

ThresholdEstimate estimate_threshold(const sampling::OrientationLaw& law, const ThresholdParams& params) {
    if (!(params.side >= 8.0 * params.length)) fail(ErrorCode::PreconditionViolated, "window side must be >= 8 L");
    if (params.max_probes < 0) fail(ErrorCode::InvalidArgument, "max_probes must be >= 0");
    const auto tag = measures::law_tag(law);
    const double delta = tag == measures::LawTag::Density ? law.density_lower_bound() : 1.0;
    const auto k = measures::bound_constants(params.d, tag, delta);
    const double scale = std::pow(params.length, -k.exponent);
    const double lam_min = k.lower * scale / 10.0;
    const double lam_max = k.upper * scale * 10.0;

    ThresholdEstimate out;
    out.axis = params.axis >= 0 ? params.axis : default_axis(law);
    out.replicates = params.replicates;
    CrossingParams cp;
    cp.d = params.d;
    cp.length = params.length;
    cp.side = params.side;
    cp.replicates = params.replicates;
    cp.seed = params.seed;
    cp.workers = params.workers;
    cp.axis = out.axis;

    auto probe = [&](double lam) -> const CrossingEstimate& {
        cp.probe_index = out.trace.size();
        out.trace.push_back(crossing_probability(lam, law, cp));
        return out.trace.back();
    };

    std::size_t lo_idx = 0, hi_idx = 0;
    double lam = k.lower * scale;
    if (probe(lam).frequency < 0.5) {
        lo_idx = 0;
        for (;;) {
            lam *= 2.0;
            if (lam > lam_max) fail(ErrorCode::BracketFailure, "no crossing frequency >= 1/2 below 10 x upper bound");
            if (probe(lam).frequency >= 0.5) break;
            lo_idx = out.trace.size() - 1;
        }
        hi_idx = out.trace.size() - 1;
    } else {
        hi_idx = 0;
        for (;;) {
            lam *= 0.5;
            if (lam < lam_min) fail(ErrorCode::BracketFailure, "no crossing frequency < 1/2 above lower bound / 10");
            if (probe(lam).frequency < 0.5) break;
            hi_idx = out.trace.size() - 1;
        }
        lo_idx = out.trace.size() - 1;
    }
    out.bracketing_probes = static_cast<int>(out.trace.size());

    auto contains_half = [](const CrossingEstimate& e) { return e.ci.low <= 0.5 && 0.5 <= e.ci.high; };
    for (int i = 0; i < params.max_probes; ++i) {
        if (contains_half(out.trace[lo_idx]) && contains_half(out.trace[hi_idx])) break;
        double mid = std::sqrt(out.trace[lo_idx].lambda * out.trace[hi_idx].lambda);
        bool high = probe(mid).frequency >= 0.5;
        (high ? hi_idx : lo_idx) = out.trace.size() - 1;
        ++out.bisection_probes;
    }
    const auto& lo = out.trace[lo_idx];
    const auto& hi = out.trace[hi_idx];
    out.bracket = {lo.lambda, hi.lambda};

    LogisticFit fit = fit_logistic(out.trace);
    if (fit.ok) {
        out.logistic_fit = true;
        out.lambda_hat = std::exp(fit.midpoint);
        out.ci = {std::exp(fit.midpoint - 1.959963984540054 * fit.midpoint_se),
                  std::exp(fit.midpoint + 1.959963984540054 * fit.midpoint_se)};
    } else {
        double x0 = std::log(lo.lambda), x1 = std::log(hi.lambda);
        double f0 = lo.frequency, f1 = hi.frequency;
        double t = f1 > f0 ? (0.5 - f0) / (f1 - f0) : 0.5;
        out.lambda_hat = std::exp(x0 + std::clamp(t, 0.0, 1.0) * (x1 - x0));
        out.ci = out.bracket;
    }
    out.ci.low = std::min(out.ci.low, out.lambda_hat);
    out.ci.high = std::max(out.ci.high, out.lambda_hat);
    return out;
}

ScalingFit scaling_fit(std::span<const ScalingPoint> points) {
    std::vector<double> ls;
    for (const auto& p : points) {
        if (!(p.length > 0.0) || !(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
            fail(ErrorCode::DomainError, "scaling points need L > 0 and lambda > 0");
        }
        if (!(p.weight > 0.0) || !std::isfinite(p.weight)) fail(ErrorCode::InvalidArgument, "weights must be positive");
        ls.push_back(p.length);
    }
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    if (ls.size() < 3) fail(ErrorCode::DegenerateDesign, "scaling fit needs at least 3 distinct L");
    double sw = 0, sx = 0, sy = 0;
    for (const auto& p : points) {
        sw += p.weight;
        sx += p.weight * std::log(p.length);
        sy += p.weight * std::log(p.lambda);
    }
    const double xm = sx / sw, ym = sy / sw;
    double sxx = 0, sxy = 0;
    for (const auto& p : points) {
        double dx = std::log(p.length) - xm;
        sxx += p.weight * dx * dx;
        sxy += p.weight * dx * (std::log(p.lambda) - ym);
    }
    ScalingFit fit;
    fit.points = points.size();
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    double rss = 0;
    for (const auto& p : points) {
        double r = std::log(p.lambda) - fit.intercept - fit.slope * std::log(p.length);
        rss += p.weight * r * r;
    }
    double s2 = points.size() > 2 ? rss / static_cast<double>(points.size() - 2) : 0.0;
    fit.slope_stderr = std::sqrt(s2 / sxx);
    fit.intercept_stderr = std::sqrt(s2 * (1.0 / sw + xm * xm / sxx));
    return fit;
}

double scaling_weight(const ThresholdEstimate& estimate) {
    double se = (std::log(estimate.ci.high) - std::log(estimate.ci.low)) / (2.0 * 1.959963984540054);
    if (!(se > 0.0) || !std::isfinite(se)) return 1.0;
    return 1.0 / (se * se);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string probe_trace_csv(const ThresholdEstimate& estimate, double length, bool header) {
    std::string out;
    if (header) {
        out += "# stickperc probe-trace v" + std::to_string(kProbeCsvSchemaVersion) + "\n";
        out += "L,lambda,crossed,replicate,seed\n";
    }
    for (const auto& probe : estimate.trace) {
        for (std::size_t r = 0; r < probe.crossed.size(); ++r) {
            out += fmt(length) + "," + fmt(probe.lambda) + "," + (probe.crossed[r] ? "1" : "0") + "," +
                   std::to_string(r) + "," + std::to_string(probe.seeds[r]) + "\n";
        }
    }
    return out;
}

std::string threshold_json(const ThresholdEstimate& estimate, int d, double length, const std::string& law,
                           double side) {
    nlohmann::ordered_json j;
    j["schema_version"] = kThresholdJsonSchemaVersion;
    j["kind"] = "threshold_estimate";
    j["d"] = d;
    j["L"] = length;
    j["law"] = law;
    j["side"] = side;
    j["axis"] = estimate.axis;
    j["lambda_hat"] = estimate.lambda_hat;
    j["ci_low"] = estimate.ci.low;
    j["ci_high"] = estimate.ci.high;
    j["replicates"] = estimate.replicates;
    j["logistic_fit"] = estimate.logistic_fit;
    j["bracket"] = {estimate.bracket.low, estimate.bracket.high};
    auto trace = nlohmann::ordered_json::array();
    for (const auto& p : estimate.trace) {
        nlohmann::ordered_json t;
        t["lambda"] = p.lambda;
        t["frequency"] = p.frequency;
        t["crossings"] = p.crossings;
        t["ci"] = {p.ci.low, p.ci.high};
        t["axis_crossings"] = p.axis_crossings;
        trace.push_back(t);
    }
    j["trace"] = trace;
    return j.dump(2);
}

}  // namespace stickperc::percolation
