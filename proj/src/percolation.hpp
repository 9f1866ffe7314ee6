#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sampling.hpp"

namespace stickperc::percolation {

class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0);

    std::size_t size() const { return parent_.size(); }
    std::size_t find(std::size_t i);
    /// Returns true when i and j were in different components.
    bool unite(std::size_t i, std::size_t j);
    std::size_t components() const { return components_; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
    std::size_t components_ = 0;
};

/// Uniform grid over the configuration. Each indexed stick is registered in every cell met by
/// the bounding box of its body (segment inflated by radius 1).
class SpatialIndex {
public:
    /// Indexes the sticks with active[i] != 0 (all sticks when `active` is empty).
    SpatialIndex(const sampling::Configuration& config, double cell, std::span<const char> active = {});

    double cell_size() const { return cell_; }
    std::size_t entry_count() const { return entries_.size(); }
    /// Linear keys of the cells holding stick i (empty if i is not indexed).
    std::vector<std::uint64_t> cells_of(std::size_t i) const;
    /// Grid coordinates of a cell key; cell c spans [origin + c * cell, origin + (c + 1) * cell).
    std::vector<std::int64_t> cell_coords(std::uint64_t key) const;
    std::span<const double> origin() const { return origin_; }

    /// Calls fn(i, j), i < j, once for every pair of indexed sticks sharing at least one cell.
    template <class Fn>
    void for_each_candidate_pair(Fn&& fn) const;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> candidate_pairs() const;

    /// Bounding box of stick i's body: low, high per axis.
    std::span<const double> body_low(std::size_t i) const { return {body_low_.data() + i * d_, d_}; }
    std::span<const double> body_high(std::size_t i) const { return {body_high_.data() + i * d_, d_}; }

private:
    std::uint64_t key_of(const std::int64_t* coords) const;

    std::size_t d_ = 0;
    double cell_ = 1.0;
    std::vector<double> origin_;
    std::vector<std::int64_t> extent_;
    std::vector<std::uint64_t> stride_;
    std::vector<double> body_low_, body_high_;
    std::vector<std::int64_t> cell_low_, cell_high_;  // per stick, d each
    std::vector<char> indexed_;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> entries_;  // sorted (cell key, stick)
};

template <class Fn>
void SpatialIndex::for_each_candidate_pair(Fn&& fn) const {
    std::vector<std::int64_t> canon(d_);
    std::size_t begin = 0;
    while (begin < entries_.size()) {
        std::size_t end = begin;
        const std::uint64_t key = entries_[begin].first;
        while (end < entries_.size() && entries_[end].first == key) ++end;
        for (std::size_t a = begin; a < end; ++a) {
            const std::uint32_t i = entries_[a].second;
            for (std::size_t b = a + 1; b < end; ++b) {
                const std::uint32_t j = entries_[b].second;
                // Report the pair only from the lowest cell the two share.
                for (std::size_t k = 0; k < d_; ++k) {
                    canon[k] = std::max(cell_low_[i * d_ + k], cell_low_[j * d_ + k]);
                }
                if (key_of(canon.data()) == key) fn(i, j);
            }
        }
        begin = end;
    }
}

struct CrossingResult {
    bool crossed = false;
    std::size_t largest_cluster = 0;
    std::size_t cluster_count = 0;
    std::uint64_t pair_tests = 0;
    int axis = 0;
    std::vector<char> crossed_axes;  // one flag per axis
};

struct ClusterOptions {
    double cell = 0.0;  // 0 selects L + 2
    int axis = 0;
};

struct ClusterOutput {
    UnionFind components;
    std::vector<char> active;  // sticks whose body meets the observation window
    CrossingResult result;
};

/// True when the body of stick i meets config.window.
bool stick_meets_window(const sampling::Configuration& config, std::size_t i);

/// Connected components of the sticks meeting the window, plus the crossing flags.
ClusterOutput cluster(const sampling::Configuration& config, const ClusterOptions& options = {});

/// Some cluster touches both window faces x_axis = low and x_axis = high.
bool crossing_event(const sampling::Configuration& config, int axis);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

struct CrossingEstimate {
    double lambda = 0.0;
    double frequency = 0.0;
    Interval ci;
    std::uint32_t replicates = 0;
    std::uint32_t crossings = 0;
    std::vector<std::uint32_t> axis_crossings;  // per axis
    std::vector<char> crossed;                  // per replicate, primary axis
    std::vector<std::uint64_t> seeds;           // per replicate configuration seed
};

struct CrossingParams {
    int d = 2;
    double length = 1.0;
    double side = 10.0;
    std::uint32_t replicates = 100;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    int axis = 0;
    std::uint64_t probe_index = 0;  // separates the substreams of different probes
};

/// Fraction of independent windowed configurations at `intensity` that cross along params.axis.
CrossingEstimate crossing_probability(double intensity, const sampling::OrientationLaw& law,
                                      const CrossingParams& params);

/// Default crossing axis: 0, which for the rigid law (sticks along e_2) is perpendicular to the sticks.
int default_axis(const sampling::OrientationLaw& law);

struct ThresholdParams {
    int d = 2;
    double length = 1.0;
    double side = 10.0;  // must be >= 8 L
    std::uint32_t replicates = 200;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    int axis = -1;  // -1: default_axis(law)
    int max_probes = 12;  // bisection probes after the bracket is found
};

struct ThresholdEstimate {
    double lambda_hat = 0.0;
    Interval ci;
    std::uint32_t replicates = 0;
    std::vector<CrossingEstimate> trace;  // every probe, in probe order
    Interval bracket;
    bool logistic_fit = false;
    int axis = 0;
    int bracketing_probes = 0;
    int bisection_probes = 0;
};

/// Critical-intensity estimate from the crossing frequency 1/2: geometric stepping from the
/// lower theorem bound until a straddle, bisection in log-intensity, then a binomial logistic
/// fit of frequency on ln(lambda) over the whole trace.
ThresholdEstimate estimate_threshold(const sampling::OrientationLaw& law, const ThresholdParams& params);

/// Crossing counts at each of `intensities` (ascending) on one coupled driving per replicate:
/// a configuration at the largest intensity, thinned by fixed per-stick marks.
std::vector<CrossingEstimate> coupled_crossing_curve(std::span<const double> intensities,
                                                     const sampling::OrientationLaw& law,
                                                     const CrossingParams& params);

/// Keeps stick i iff its mark, a hash of (mark_key, i), is below keep.
sampling::Configuration thin(const sampling::Configuration& config, double keep, std::uint64_t mark_key);

struct LogisticFit {
    bool ok = false;
    double intercept = 0.0;  // on centred ln(lambda)
    double slope = 0.0;
    double center = 0.0;
    double midpoint = 0.0;     // ln(lambda) at frequency 1/2
    double midpoint_se = 0.0;  // delta-method standard error
};

LogisticFit fit_logistic(std::span<const CrossingEstimate> trace);

struct ScalingPoint {
    double length = 0.0;
    double lambda = 0.0;
    double weight = 1.0;
};

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    std::size_t points = 0;
};

/// Weighted least squares of ln(lambda) on ln(L). DegenerateDesign with < 3 distinct L.
ScalingFit scaling_fit(std::span<const ScalingPoint> points);

/// Weight 1 / var(ln lambda_hat) derived from the estimate's 95% interval.
double scaling_weight(const ThresholdEstimate& estimate);

inline constexpr int kProbeCsvSchemaVersion = 1;
inline constexpr int kThresholdJsonSchemaVersion = 1;

/// Per-replicate rows `L,lambda,crossed,replicate,seed` under a versioned comment header.
std::string probe_trace_csv(const ThresholdEstimate& estimate, double length, bool header = true);
std::string threshold_json(const ThresholdEstimate& estimate, int d, double length, const std::string& law,
                           double side);

}  // namespace stickperc::percolation
