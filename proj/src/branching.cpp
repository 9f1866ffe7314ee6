#include "branching.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "parallel.hpp"
#include "percolation.hpp"

namespace stickperc::branching {

namespace {

void check_seed_stick(const geometry::SegmentView& s) {
    if (s.dim() < 2 || s.dir.size() != s.dim()) fail(ErrorCode::InvalidArgument, "seed stick dimension mismatch");
    if (!(s.length > 0.0)) fail(ErrorCode::DomainError, "stick length must be positive");
    if (!geometry::is_unit(s.dir)) fail(ErrorCode::InvalidArgument, "seed stick direction must be a unit vector");
}

std::uint64_t hits(const sampling::Configuration& config, const geometry::SegmentView& target) {
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (geometry::sticks_intersect(config.segment(i), target)) ++count;
    }
    return count;
}

std::size_t pick(RngStream& stream, std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(stream.next_u64()) * n) >> 64);
}

}  // namespace

sampling::BoxRegion offspring_box(const geometry::SegmentView& s) {
    sampling::BoxRegion box;
    const double half = 0.5 * s.length;
    const double grow = s.length + 4.0;
    for (std::size_t k = 0; k < s.dim(); ++k) {
        double r = std::abs(s.dir[k]) * half + grow;
        box.low.push_back(s.center[k] - r);
        box.high.push_back(s.center[k] + r);
    }
    return box;
}

OffspringEstimate offspring_mean_mc(double intensity, const sampling::OrientationLaw& law,
                                    const geometry::SegmentView& seed_stick, std::uint64_t trials,
                                    std::uint64_t seed, unsigned workers) {
    check_seed_stick(seed_stick);
    if (trials < 1) fail(ErrorCode::InsufficientTrials, "trials must be >= 1");
    const auto box = offspring_box(seed_stick);
    const std::size_t d = seed_stick.dim();
    OffspringEstimate out;
    out.samples.assign(trials, 0);
    parallel_for(trials, workers, [&](std::size_t t) {
        RngStream stream(derive_seed(seed, "offspring", t));
        auto config = sampling::sample_configuration(d, seed_stick.length, intensity, law, box, stream);
        out.samples[t] = static_cast<std::uint32_t>(hits(config, seed_stick));
    });
    double sum = 0, sum2 = 0;
    for (auto v : out.samples) {
        sum += v;
        sum2 += static_cast<double>(v) * v;
    }
    const double n = static_cast<double>(trials);
    out.mean = sum / n;
    double var = trials > 1 ? std::max(0.0, (sum2 - n * out.mean * out.mean) / (n - 1.0)) : 0.0;
    out.stderr_ = std::sqrt(var / n);
    return out;
}

GWReport dominating_gw_run(std::span<const std::uint32_t> offspring, std::uint32_t max_generations,
                           std::uint64_t population_cap, std::uint64_t seed, bool keep_samples) {
    if (offspring.empty()) fail(ErrorCode::InvalidArgument, "offspring sampler has no samples");
    if (max_generations < 1 || population_cap < 1) fail(ErrorCode::InvalidArgument, "caps must be positive");
    GWReport report;
    report.max_generations = max_generations;
    report.population_cap = population_cap;
    if (keep_samples) report.offspring_samples.assign(offspring.begin(), offspring.end());
    RngStream stream(derive_seed(seed, "gw"));
    std::uint64_t z = offspring[pick(stream, offspring.size())];
    report.generation_sizes.push_back(z);
    while (z > 0) {
        if (z > population_cap || report.generation_sizes.size() >= max_generations) {
            report.truncated = true;
            return report;
        }
        std::uint64_t next = 0;
        for (std::uint64_t i = 0; i < z; ++i) next += offspring[pick(stream, offspring.size())];
        z = next;
        report.generation_sizes.push_back(z);
    }
    report.extinct = true;
    return report;
}

GWSummary gw_extinction_runs(std::span<const std::uint32_t> offspring, std::uint32_t runs,
                             std::uint32_t max_generations, std::uint64_t population_cap, std::uint64_t seed,
                             unsigned workers) {
    if (runs < 1) fail(ErrorCode::InsufficientTrials, "runs must be >= 1");
    std::vector<char> extinct(runs, 0), truncated(runs, 0);
    parallel_for(runs, workers, [&](std::size_t r) {
        auto rep = dominating_gw_run(offspring, max_generations, population_cap, derive_seed(seed, "gw-run", r), false);
        extinct[r] = rep.extinct;
        truncated[r] = rep.truncated;
    });
    GWSummary s;
    s.runs = runs;
    for (std::uint32_t r = 0; r < runs; ++r) {
        s.extinct += extinct[r] ? 1u : 0u;
        s.truncated += truncated[r] ? 1u : 0u;
    }
    return s;
}

ExplorationReport component_exploration(const sampling::OrientationLaw& law, const geometry::SegmentView& seed_stick,
                                        const ExplorationParams& params) {
    check_seed_stick(seed_stick);
    if (params.max_generations < 1 || params.population_cap < 1) fail(ErrorCode::InvalidArgument, "caps must be positive");
    if (!(params.intensity > 0.0)) fail(ErrorCode::DomainError, "intensity must be positive");
    const std::size_t d = seed_stick.dim();
    const double length = seed_stick.length;
    const double half_width = params.max_generations * (length + 4.0);
    sampling::BoxRegion window;
    for (std::size_t k = 0; k < d; ++k) {
        window.low.push_back(seed_stick.center[k] - half_width);
        window.high.push_back(seed_stick.center[k] + half_width);
    }
    auto sampled = sampling::sample_configuration(d, length, params.intensity, law, window,
                                                  derive_seed(params.seed, "window"));
    // Node 0 is the seed stick.
    sampling::Configuration all = sampled;
    all.centers.clear();
    all.dirs.clear();
    all.push(seed_stick.center, seed_stick.dir);
    all.centers.insert(all.centers.end(), sampled.centers.begin(), sampled.centers.end());
    all.dirs.insert(all.dirs.end(), sampled.dirs.begin(), sampled.dirs.end());
    const std::size_t n = all.size();

    std::vector<std::vector<std::uint32_t>> adjacency(n);
    percolation::SpatialIndex index(all, length + 2.0 * geometry::kStickRadius);
    index.for_each_candidate_pair([&](std::uint32_t i, std::uint32_t j) {
        if (geometry::sticks_intersect(all.segment(i), all.segment(j))) {
            adjacency[i].push_back(j);
            adjacency[j].push_back(i);
        }
    });
    for (auto& a : adjacency) std::sort(a.begin(), a.end());

    ExplorationReport out;
    out.sticks_in_window = sampled.size();
    out.dominating.max_generations = params.max_generations;
    out.dominating.population_cap = params.population_cap;

    auto leaves_window = [&](const geometry::SegmentView& s) {
        const double reach = 0.5 * length + 2.0;
        for (std::size_t k = 0; k < d; ++k) {
            double r = std::abs(s.dir[k]) * 0.5 * length + reach;
            if (s.center[k] - r < window.low[k] || s.center[k] + r > window.high[k]) return true;
        }
        return false;
    };

    struct Node {
        std::int64_t actual = -1;  // index into `all`, or -1 for a phantom
        geometry::Segment geometry;
    };
    auto phantom_from = [&](const sampling::Configuration& c, std::size_t i) {
        Node node;
        node.geometry.center.assign(c.center(i).begin(), c.center(i).end());
        node.geometry.dir.assign(c.dir(i).begin(), c.dir(i).end());
        node.geometry.length = length;
        return node;
    };

    std::vector<char> discovered(n, 0);
    discovered[0] = 1;
    std::vector<std::uint32_t> processed;
    std::vector<Node> current(1);
    current[0].actual = 0;
    std::uint64_t phantom_serial = 0;
    std::uint64_t component = 1;

    for (std::uint32_t gen = 0;; ++gen) {
        if (gen >= params.max_generations) {
            out.truncated = out.dominating.truncated = true;
            break;
        }
        std::vector<Node> next;
        std::uint64_t actual_next = 0;
        for (const Node& node : current) {
            if (node.actual >= 0) {
                const auto v = static_cast<std::uint32_t>(node.actual);
                auto seg = all.segment(v);
                if (leaves_window(seg)) out.window_exceeded = true;
                for (std::uint32_t w : adjacency[v]) {
                    if (discovered[w]) continue;
                    discovered[w] = 1;
                    Node child;
                    child.actual = w;
                    next.push_back(std::move(child));
                    ++actual_next;
                }
                auto copy = sampling::sample_configuration(d, length, params.intensity, law, offspring_box(seg),
                                                           derive_seed(params.seed, "extras", v));
                for (std::size_t i = 0; i < copy.size(); ++i) {
                    auto s = copy.segment(i);
                    if (!geometry::sticks_intersect(s, seg)) continue;
                    bool earlier = std::any_of(processed.begin(), processed.end(), [&](std::uint32_t u) {
                        return geometry::sticks_intersect(s, all.segment(u));
                    });
                    if (earlier) next.push_back(phantom_from(copy, i));
                }
                processed.push_back(v);
            } else {
                auto seg = node.geometry.view();
                auto fresh = sampling::sample_configuration(d, length, params.intensity, law, offspring_box(seg),
                                                            derive_seed(params.seed, "phantom", phantom_serial++));
                for (std::size_t i = 0; i < fresh.size(); ++i) {
                    if (geometry::sticks_intersect(fresh.segment(i), seg)) next.push_back(phantom_from(fresh, i));
                }
            }
            if (next.size() > params.population_cap) break;
        }
        component += actual_next;
        out.generation_sizes.push_back(actual_next);
        out.dominating.generation_sizes.push_back(next.size());
        if (actual_next > next.size()) out.dominated = false;
        if (next.size() > params.population_cap) {
            out.truncated = out.dominating.truncated = true;
            break;
        }
        if (next.empty()) {
            out.dominating.extinct = true;
            break;
        }
        current = std::move(next);
    }
    out.component_size = component;
    return out;
}

std::string gw_report_json(const GWReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = kGWJsonSchemaVersion;
    j["kind"] = "gw_report";
    j["generation_sizes"] = report.generation_sizes;
    j["extinct"] = report.extinct;
    j["truncated"] = report.truncated;
    j["max_generations"] = report.max_generations;
    j["population_cap"] = report.population_cap;
    j["offspring_samples"] = report.offspring_samples;
    return j.dump(2);
}

std::string offspring_csv(const OffspringEstimate& estimate) {
    std::string out = "# stickperc offspring-samples v" + std::to_string(kOffspringCsvSchemaVersion) + "\n";
    out += "trial,offspring\n";
    for (std::size_t t = 0; t < estimate.samples.size(); ++t) {
        out += std::to_string(t) + "," + std::to_string(estimate.samples[t]) + "\n";
    }
    return out;
}

}  // namespace stickperc::branching
