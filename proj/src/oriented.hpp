#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"

namespace stickperc::oriented {

/// A_n: occupied sites (x, n) of the even sublattice, x + n even, kept sorted and unique.
struct Frontier {
    std::uint64_t level = 0;
    std::vector<std::int64_t> occupied;

    static Frontier origin() { return Frontier{0, {0}}; }
    bool empty() const { return occupied.empty(); }
    /// Parity, ordering and support |x| <= level.
    bool valid() const;
};

enum class Variant { Bond, Site };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

/// Occupation probability of a site with both predecessors occupied.
double beta(double alpha, Variant v);

/// Uniform driving the arrow from (x, n) to (x - 1, n + 1) (right = false) or (x + 1, n + 1).
/// Site variant: the child y reads the right arrow of (y - 1, n), so with both parents
/// occupied the site event is contained in the bond event.
double arrow_uniform(std::uint64_t key, std::uint64_t level, std::int64_t x, bool right);

/// One step A_n -> A_{n+1}, all randomness a function of `key` and the lattice position.
Frontier op_step(const Frontier& frontier, double alpha, Variant variant, std::uint64_t key);
/// Same, with the key drawn from `stream`.
Frontier op_step(const Frontier& frontier, double alpha, Variant variant, RngStream& stream);

struct SurvivalEstimate {
    double fraction = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint32_t trials = 0;
    std::uint32_t survived = 0;
    std::vector<std::int64_t> extinction_level;  // per trial; -1 when A_{n_max} is non-empty
};

/// Fraction of runs from A_0 = {o} with A_{n_max} non-empty.
SurvivalEstimate survival_probability(double alpha, Variant variant, std::uint64_t n_max, std::uint32_t trials,
                                      std::uint64_t seed, unsigned workers = 1);

struct MonotonicityReport {
    bool monotone = true;
    std::vector<std::uint32_t> survived;  // per alpha
    std::uint32_t violations = 0;         // trials whose survival indicator decreased in alpha
};

/// Every alpha in `alphas` (ascending) driven by the same uniforms in each trial.
MonotonicityReport coupled_survival_monotonicity(std::span<const double> alphas, Variant variant,
                                                 std::uint64_t n_max, std::uint32_t trials, std::uint64_t seed,
                                                 unsigned workers = 1);

/// Per-trial key used by survival_probability and the coupling, so the two agree run for run.
std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial);

/// Runs one trial to n_max; returns the extinction level or -1.
std::int64_t run_trial(double alpha, Variant variant, std::uint64_t n_max, std::uint64_t key);

inline constexpr int kSurvivalCsvSchemaVersion = 1;

std::string survival_csv(std::span<const double> alphas, std::span<const SurvivalEstimate> estimates);

}  // namespace stickperc::oriented
