#include "oriented.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "parallel.hpp"
#include "percolation.hpp"

namespace stickperc::oriented {

bool Frontier::valid() const {
    for (std::size_t i = 0; i < occupied.size(); ++i) {
        std::int64_t x = occupied[i];
        if (((x + static_cast<std::int64_t>(level)) & 1) != 0) return false;
        if (std::abs(x) > static_cast<std::int64_t>(level)) return false;
        if (i > 0 && !(occupied[i - 1] < x)) return false;
    }
    return true;
}

std::string variant_name(Variant v) { return v == Variant::Bond ? "bond" : "site"; }

Variant parse_variant(const std::string& name) {
    if (name == "bond") return Variant::Bond;
    if (name == "site") return Variant::Site;
    fail(ErrorCode::InvalidArgument, "unknown variant '" + name + "' (bond|site)");
}

double beta(double alpha, Variant v) { return v == Variant::Bond ? 1.0 - (1.0 - alpha) * (1.0 - alpha) : alpha; }

double arrow_uniform(std::uint64_t key, std::uint64_t level, std::int64_t x, bool right) {
    std::uint64_t site = mix64(static_cast<std::uint64_t>(x) * 2u + (right ? 1u : 0u));
    return hash_uniform(mix64(key + mix64(level)) ^ site);
}

Frontier op_step(const Frontier& frontier, double alpha, Variant variant, std::uint64_t key) {
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::DomainError, "alpha must lie in (0, 1]");
    Frontier next;
    next.level = frontier.level + 1;
    const auto& a = frontier.occupied;
    std::vector<std::int64_t> candidates;
    candidates.reserve(2 * a.size());
    for (std::int64_t x : a) {
        candidates.push_back(x - 1);
        candidates.push_back(x + 1);
    }
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    next.occupied.reserve(candidates.size());
    for (std::int64_t y : candidates) {
        const bool left = std::binary_search(a.begin(), a.end(), y - 1);
        const bool right = std::binary_search(a.begin(), a.end(), y + 1);
        bool open;
        if (variant == Variant::Bond) {
            open = (left && arrow_uniform(key, frontier.level, y - 1, true) < alpha) ||
                   (right && arrow_uniform(key, frontier.level, y + 1, false) < alpha);
        } else {
            open = arrow_uniform(key, frontier.level, y - 1, true) < alpha;
        }
        if (open) next.occupied.push_back(y);
    }
    return next;
}

Frontier op_step(const Frontier& frontier, double alpha, Variant variant, RngStream& stream) {
    return op_step(frontier, alpha, variant, stream.next_u64());
}

std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial) { return derive_seed(seed, "oriented", trial); }

std::int64_t run_trial(double alpha, Variant variant, std::uint64_t n_max, std::uint64_t key) {
    Frontier f = Frontier::origin();
    while (f.level < n_max) {
        f = op_step(f, alpha, variant, key);
        if (f.empty()) return static_cast<std::int64_t>(f.level);
    }
    return -1;
}

SurvivalEstimate survival_probability(double alpha, Variant variant, std::uint64_t n_max, std::uint32_t trials,
                                      std::uint64_t seed, unsigned workers) {
    if (trials < 1) fail(ErrorCode::InsufficientTrials, "trials must be >= 1");
    if (n_max < 1) fail(ErrorCode::InvalidArgument, "n_max must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::DomainError, "alpha must lie in (0, 1]");
    SurvivalEstimate est;
    est.trials = trials;
    est.extinction_level.assign(trials, -1);
    parallel_for(trials, workers, [&](std::size_t t) {
        est.extinction_level[t] = run_trial(alpha, variant, n_max, trial_key(seed, t));
    });
    for (auto lvl : est.extinction_level) est.survived += lvl < 0 ? 1u : 0u;
    est.fraction = static_cast<double>(est.survived) / trials;
    auto ci = percolation::wilson_interval(est.survived, trials);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    return est;
}

MonotonicityReport coupled_survival_monotonicity(std::span<const double> alphas, Variant variant,
                                                 std::uint64_t n_max, std::uint32_t trials, std::uint64_t seed,
                                                 unsigned workers) {
    if (trials < 1) fail(ErrorCode::InsufficientTrials, "trials must be >= 1");
    if (!std::is_sorted(alphas.begin(), alphas.end())) fail(ErrorCode::InvalidArgument, "alpha list must be ascending");
    MonotonicityReport report;
    report.survived.assign(alphas.size(), 0);
    std::vector<std::vector<char>> alive(trials, std::vector<char>(alphas.size(), 0));
    parallel_for(trials, workers, [&](std::size_t t) {
        std::uint64_t key = trial_key(seed, t);
        for (std::size_t m = 0; m < alphas.size(); ++m) alive[t][m] = run_trial(alphas[m], variant, n_max, key) < 0;
    });
    for (std::uint32_t t = 0; t < trials; ++t) {
        bool bad = false;
        for (std::size_t m = 0; m < alphas.size(); ++m) {
            report.survived[m] += alive[t][m] ? 1u : 0u;
            if (m > 0 && alive[t][m - 1] && !alive[t][m]) bad = true;
        }
        if (bad) ++report.violations;
    }
    report.monotone = report.violations == 0;
    return report;
}

std::string survival_csv(std::span<const double> alphas, std::span<const SurvivalEstimate> estimates) {
    std::string out = "# stickperc oriented-survival v" + std::to_string(kSurvivalCsvSchemaVersion) + "\n";
    out += "alpha,trial,extinction_level,survived\n";
    char buf[40];
    for (std::size_t m = 0; m < estimates.size() && m < alphas.size(); ++m) {
        std::snprintf(buf, sizeof buf, "%.17g", alphas[m]);
        for (std::size_t t = 0; t < estimates[m].extinction_level.size(); ++t) {
            auto lvl = estimates[m].extinction_level[t];
            out += std::string(buf) + "," + std::to_string(t) + "," + (lvl < 0 ? std::string() : std::to_string(lvl)) +
                   "," + (lvl < 0 ? "1" : "0") + "\n";
        }
    }
    return out;
}

}  // namespace stickperc::oriented
