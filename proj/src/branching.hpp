#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sampling.hpp"

namespace stickperc::branching {

struct OffspringEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::vector<std::uint32_t> samples;  // one |Psi_1| draw per trial
};

/// Axis-aligned box holding every centre of a stick of length L that can meet `seed_stick`:
/// the segment's bounding box grown by L + 4.
sampling::BoxRegion offspring_box(const geometry::SegmentView& seed_stick);

/// Number of sticks of an independent Poisson configuration meeting `seed_stick`, once per trial.
OffspringEstimate offspring_mean_mc(double intensity, const sampling::OrientationLaw& law,
                                    const geometry::SegmentView& seed_stick, std::uint64_t trials,
                                    std::uint64_t seed, unsigned workers = 1);

struct GWReport {
    std::vector<std::uint64_t> generation_sizes;  // generation 1 first
    std::vector<std::uint32_t> offspring_samples;
    bool extinct = false;
    bool truncated = false;
    std::uint32_t max_generations = 0;
    std::uint64_t population_cap = 0;
};

/// Galton-Watson family with offspring counts resampled uniformly from `offspring`.
GWReport dominating_gw_run(std::span<const std::uint32_t> offspring, std::uint32_t max_generations,
                           std::uint64_t population_cap, std::uint64_t seed, bool keep_samples = true);

struct GWSummary {
    std::uint32_t runs = 0;
    std::uint32_t extinct = 0;
    std::uint32_t truncated = 0;  // survived to a cap
};

/// Independent dominating_gw_run calls on substreams of `seed`.
GWSummary gw_extinction_runs(std::span<const std::uint32_t> offspring, std::uint32_t runs,
                             std::uint32_t max_generations, std::uint64_t population_cap, std::uint64_t seed,
                             unsigned workers = 1);

struct ExplorationParams {
    double intensity = 0.0;
    std::uint32_t max_generations = 10;
    std::uint64_t population_cap = 100000;
    std::uint64_t seed = 0;
};

struct ExplorationReport {
    std::uint64_t component_size = 0;             // seed included
    std::vector<std::uint64_t> generation_sizes;  // BFS generations of the actual component, generation 1 first
    GWReport dominating;                          // coupled GW tree grown alongside the exploration
    bool dominated = true;                        // actual generation n <= GW generation n for every n
    bool window_exceeded = false;
    bool truncated = false;
    std::uint64_t sticks_in_window = 0;
};

/// BFS of the seed's component in one configuration on the cube of half-width
/// max_generations * (L + 4) around the seed centre. The dominating tree gives every explored
/// stick its new neighbours plus independent-copy sticks meeting it and an earlier explored
/// stick, and grows phantom subtrees from fresh configurations, so its generations are
/// |Psi_1|-offspring Galton-Watson generations containing the actual ones.
ExplorationReport component_exploration(const sampling::OrientationLaw& law, const geometry::SegmentView& seed_stick,
                                        const ExplorationParams& params);

inline constexpr int kGWJsonSchemaVersion = 1;
inline constexpr int kOffspringCsvSchemaVersion = 1;

std::string gw_report_json(const GWReport& report);
std::string offspring_csv(const OffspringEstimate& estimate);

}  // namespace stickperc::branching
