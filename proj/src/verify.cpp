#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include <json.hpp>

#include "branching.hpp"
#include "measures.hpp"
#include "oriented.hpp"
#include "percolation.hpp"

namespace stickperc::verify {

namespace {

using Vec = std::vector<double>;

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Vec random_unit(std::size_t d, RngStream& s) {
    return sampling::sample_direction(sampling::OrientationLaw::uniform(), d, s);
}

Vec random_point(std::size_t d, RngStream& s, double scale) {
    Vec x(d);
    for (auto& v : x) v = s.uniform(-scale, scale);
    return x;
}

// Coarse-to-fine search over the parameter rectangle.
double grid_distance(const geometry::SegmentView& a, const geometry::SegmentView& b) {
    const std::size_t d = a.dim();
    auto dist = [&](double t, double u) {
        double s = 0;
        for (std::size_t k = 0; k < d; ++k) {
            double v = a.center[k] + t * a.dir[k] - b.center[k] - u * b.dir[k];
            s += v * v;
        }
        return std::sqrt(s);
    };
    double t_lo = -a.length / 2, t_hi = a.length / 2, u_lo = -b.length / 2, u_hi = b.length / 2;
    double best = dist(0, 0), bt = 0, bu = 0;
    const int n = 60;
    for (int round = 0; round < 6; ++round) {
        for (int i = 0; i <= n; ++i) {
            double t = t_lo + (t_hi - t_lo) * i / n;
            for (int j = 0; j <= n; ++j) {
                double u = u_lo + (u_hi - u_lo) * j / n;
                double v = dist(t, u);
                if (v < best) best = v, bt = t, bu = u;
            }
        }
        double wt = 2.0 * (t_hi - t_lo) / n, wu = 2.0 * (u_hi - u_lo) / n;
        t_lo = std::max(-a.length / 2, bt - wt);
        t_hi = std::min(a.length / 2, bt + wt);
        u_lo = std::max(-b.length / 2, bu - wu);
        u_hi = std::min(b.length / 2, bu + wu);
    }
    return best;
}

struct Runner {
    std::string suite;
    std::vector<CheckResult>& out;
    void add(const std::string& name, bool ok, const std::string& detail) { out.push_back({suite, name, ok, detail}); }
};

void geometry_suite(std::uint64_t seed, Runner& r) {
    RngStream s(derive_seed(seed, "verify-geometry"));
    {
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            std::size_t d = 2 + i % 4;
            Vec x = random_point(d, s, 10), y = random_point(d, s, 10), p = random_unit(d, s), q = random_unit(d, s);
            double pq = geometry::dot(p, q);
            if (1 - pq * pq < 1e-6) continue;
            double t0 = geometry::line_line_t_min(x, p, y, q);
            double a = s.uniform(-20, 20);
            double lhs = geometry::line_line_distance_profile(x, p, y, q, t0 + a) -
                         geometry::line_line_distance_profile(x, p, y, q, t0) - a * a * (1 - pq * pq);
            worst = std::max(worst, std::abs(lhs) / (1 + a * a));
        }
        r.add("quadratic_shift", worst <= 1e-9, fmt("max scaled residual %.3g", worst));
    }
    {
        int asym = 0;
        for (int i = 0; i < 1000; ++i) {
            std::size_t d = 2 + i % 4;
            Vec ca = random_point(d, s, 10), cb = random_point(d, s, 10), pa = random_unit(d, s), pb = random_unit(d, s);
            geometry::SegmentView a{ca, pa, s.uniform(0.5, 20)}, b{cb, pb, s.uniform(0.5, 20)};
            if (geometry::segment_segment_distance(a, b) != geometry::segment_segment_distance(b, a)) ++asym;
        }
        r.add("symmetry", asym == 0, fmt("%.0f asymmetric pairs of 1000", asym));
    }
    {
        double worst = 0;
        for (int i = 0; i < 300; ++i) {
            std::size_t d = 2 + i % 4;
            // Random orthogonal matrix from Gram-Schmidt on Gaussian columns.
            std::vector<Vec> basis;
            while (basis.size() < d) {
                Vec v(d);
                for (auto& e : v) e = s.normal();
                for (const auto& b : basis) {
                    double c = geometry::dot(v, b);
                    for (std::size_t k = 0; k < d; ++k) v[k] -= c * b[k];
                }
                double n = geometry::norm(v);
                if (n < 1e-6) continue;
                for (auto& e : v) e /= n;
                basis.push_back(v);
            }
            Vec shift = random_point(d, s, 50);
            auto move = [&](const Vec& v, bool translate) {
                Vec o(d, 0.0);
                for (std::size_t k = 0; k < d; ++k) {
                    for (std::size_t m = 0; m < d; ++m) o[k] += basis[m][k] * v[m];
                    if (translate) o[k] += shift[k];
                }
                return o;
            };
            Vec ca = random_point(d, s, 10), cb = random_point(d, s, 10), pa = random_unit(d, s), pb = random_unit(d, s);
            double la = s.uniform(0.5, 20), lb = s.uniform(0.5, 20);
            double before = geometry::segment_segment_distance({ca, pa, la}, {cb, pb, lb});
            Vec ca2 = move(ca, true), cb2 = move(cb, true), pa2 = move(pa, false), pb2 = move(pb, false);
            double after = geometry::segment_segment_distance({ca2, pa2, la}, {cb2, pb2, lb});
            worst = std::max(worst, std::abs(before - after));
        }
        r.add("rigid_motion_invariance", worst <= 1e-9, fmt("max change %.3g", worst));
    }
    {
        double worst = 0;
        for (int i = 0; i < 80; ++i) {
            std::size_t d = 2 + i % 4;
            Vec ca = random_point(d, s, 6), cb = random_point(d, s, 6), pa = random_unit(d, s), pb = random_unit(d, s);
            geometry::SegmentView a{ca, pa, s.uniform(0.5, 12)}, b{cb, pb, s.uniform(0.5, 12)};
            worst = std::max(worst, std::abs(geometry::segment_segment_distance(a, b) - grid_distance(a, b)));
        }
        r.add("grid_oracle", worst <= 1e-4, fmt("max abs error %.3g", worst));
    }
    {
        double smallest = 1e300;
        int violations = 0;
        for (int i = 0; i < 10000; ++i) {
            std::size_t d = 2 + i % 4;
            Vec p = random_unit(d, s), q = random_unit(d, s);
            if (std::abs(geometry::dot(p, q)) > 1.0 / std::numbers::sqrt2) continue;
            Vec x = random_point(d, s, 20);
            double t1 = s.uniform(-30, 30), tau1 = s.uniform(-30, 30);
            Vec off = random_unit(d, s);
            double len = 2.0 * s.uniform();
            Vec y(d);
            for (std::size_t k = 0; k < d; ++k) y[k] = x[k] + t1 * p[k] - tau1 * q[k] - len * off[k];
            double v = geometry::min_distance_outside_window(x, p, y, q, t1, tau1, 12.0);
            smallest = std::min(smallest, v);
            if (v < 6.0) ++violations;
        }
        r.add("window_separation", violations == 0, fmt("%.0f violations, min %.4f", violations, smallest));
    }
}

void measures_suite(std::uint64_t seed, unsigned workers, Runner& r) {
    RngStream s(derive_seed(seed, "verify-measures"));
    {
        auto mc = measures::mc_stick_hit_volume(2, 10.0, 2.0, sampling::OrientationLaw::uniform(), 200000,
                                                derive_seed(seed, "hit-volume"), workers);
        double exact = measures::stick_hit_volume(2, 10.0, 2.0);
        double z = std::abs(mc.estimate - exact) / mc.stderr_;
        r.add("stick_hit_volume_mc", z <= 3.0, fmt("z = %.3f, exact %.5f", z, exact));
    }
    {
        int violations = 0, non_monotone = 0;
        for (int i = 0; i < 10000; ++i) {
            int d = 2 + i % 7;
            double rr = s.uniform(0.1, 50);
            double rho = rr * s.uniform_open();
            double exact = measures::cap_hit_probability_exact(d, rho, rr);
            if (measures::cap_hit_lower_bound(d, rho, rr) > exact) ++violations;
            if (measures::cap_hit_probability_exact(d, rho * 0.9, rr) > exact) ++non_monotone;
            if (measures::cap_hit_probability_exact(d, rho, rr * 1.1) > exact) ++non_monotone;
        }
        r.add("cap_lower_bound", violations == 0, fmt("%.0f violations of 10000", violations));
        r.add("cap_monotone", non_monotone == 0, fmt("%.0f monotonicity failures", non_monotone));
    }
    {
        double worst = 0;
        for (int i = 0; i < 2000; ++i) {
            double z = s.uniform(), a = s.uniform(0.05, 20), b = s.uniform(0.05, 20);
            worst = std::max(worst, std::abs(measures::regularized_incomplete_beta(z, a, b) +
                                             measures::regularized_incomplete_beta(1 - z, b, a) - 1));
        }
        r.add("beta_reflection", worst <= 1e-11, fmt("max residual %.3g", worst));
    }
    {
        double worst = 0;
        for (int d = 2; d <= 8; ++d) {
            for (double L : {3.5, 10.0, 64.0, 1000.0}) {
                double lam = measures::bound_constants(d, measures::LawTag::Uniform).lower / (L * L);
                worst = std::max(worst, std::abs(measures::gw_offspring_bound(d, L, lam, measures::LawTag::Uniform) - 1));
            }
        }
        r.add("subcritical_pivot", worst <= 1e-12, fmt("max |bound - 1| %.3g", worst));
    }
    {
        bool ok = true;
        for (int d = 2; d <= 8; ++d) {
            for (auto law : {measures::LawTag::Uniform, measures::LawTag::Rigid}) {
                for (double L : {300.0 * std::sqrt(d), 5000.0}) {
                    auto b = measures::theorem_bounds(d, L, law);
                    ok = ok && b.lower > 0 && b.lower < b.upper && std::isfinite(b.upper);
                }
            }
        }
        r.add("bounds_ordered", ok, ok ? "lower < upper everywhere" : "ordering violated");
    }
}

void sampling_suite(std::uint64_t seed, Runner& r) {
    RngStream s(derive_seed(seed, "verify-sampling"));
    {
        const int d = 3, n = 200000;
        Vec v = random_unit(d, s);
        double sum = 0, sum2 = 0;
        for (int i = 0; i < n; ++i) {
            double c = geometry::dot(random_unit(d, s), v);
            sum += c * c;
            sum2 += c * c * c * c;
        }
        double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
        double z = std::abs(mean - 1.0 / d) / se;
        r.add("isotropy", z <= 3.0, fmt("z = %.3f", z));
    }
    {
        auto box = sampling::BoxRegion::cube(2, 0.0, 30.0);
        auto a = sampling::sample_configuration(2, 5.0, 0.3, sampling::OrientationLaw::uniform(), box, seed);
        auto b = sampling::sample_configuration(2, 5.0, 0.3, sampling::OrientationLaw::uniform(), box, seed);
        bool same = a.centers == b.centers && a.dirs == b.dirs;
        r.add("deterministic", same, same ? "identical configurations" : "configurations differ");
    }
}

void percolation_suite(std::uint64_t seed, unsigned workers, Runner& r) {
    {
        std::uint64_t misses = 0, pairs = 0;
        for (int k = 0; k < 10; ++k) {
            auto config = sampling::sample_windowed(2, 6.0, 0.15, sampling::OrientationLaw::uniform(), 40.0,
                                                    derive_seed(seed, "verify-index", k));
            percolation::SpatialIndex index(config, config.length + 2.0);
            auto cand = index.candidate_pairs();
            for (std::uint32_t i = 0; i < config.size(); ++i) {
                for (std::uint32_t j = i + 1; j < config.size(); ++j) {
                    if (!geometry::sticks_intersect(config.segment(i), config.segment(j))) continue;
                    ++pairs;
                    if (!std::binary_search(cand.begin(), cand.end(), std::make_pair(i, j))) ++misses;
                }
            }
        }
        r.add("index_completeness", misses == 0, fmt("%.0f misses among %.0f intersecting pairs", misses, pairs));
    }
    {
        percolation::CrossingParams p;
        p.d = 2;
        p.length = 8.0;
        p.side = 80.0;
        p.replicates = 20;
        p.seed = derive_seed(seed, "verify-coupled");
        p.workers = workers;
        std::vector<double> lams{0.02, 0.03, 0.04, 0.05, 0.07};
        auto curve = percolation::coupled_crossing_curve(lams, sampling::OrientationLaw::uniform(), p);
        int violations = 0;
        for (std::size_t m = 1; m < curve.size(); ++m) {
            for (std::size_t t = 0; t < p.replicates; ++t) {
                if (curve[m - 1].crossed[t] && !curve[m].crossed[t]) ++violations;
            }
        }
        r.add("coupled_monotone_crossing", violations == 0, fmt("%.0f decreasing replicates", violations));
    }
    {
        std::vector<percolation::ScalingPoint> pts;
        for (double L : {8.0, 16.0, 32.0, 64.0}) pts.push_back({L, 1.0 / (L * L), 1.0});
        auto fit = percolation::scaling_fit(pts);
        bool ok = std::abs(fit.slope + 2.0) <= 1e-12 && fit.slope_stderr <= 1e-12;
        r.add("scaling_fit_exact", ok, fmt("slope %.15g, stderr %.3g", fit.slope, fit.slope_stderr));
    }
}

void branching_suite(std::uint64_t seed, unsigned workers, Runner& r) {
    {
        Vec c{0.0, 0.0}, p{0.0, 1.0};
        geometry::SegmentView stick{c, p, 10.0};
        auto est = branching::offspring_mean_mc(0.1, sampling::OrientationLaw::rigid_e2(2), stick, 20000,
                                                derive_seed(seed, "verify-rigid"), workers);
        double exact = 0.1 * (2 * 10.0 * measures::ball_volume(1, 2.0) + measures::ball_volume(2, 2.0));
        double z = std::abs(est.mean - exact) / est.stderr_;
        r.add("rigid_offspring_mean", z <= 3.0, fmt("z = %.3f, exact %.4f", z, exact));
    }
    {
        Vec c{0.0, 0.0}, p{1.0, 0.0};
        const double L = 32.0;
        geometry::SegmentView stick{c, p, L};
        double lam = measures::bound_constants(2, measures::LawTag::Uniform).lower / (L * L);
        auto est = branching::offspring_mean_mc(lam, sampling::OrientationLaw::uniform(), stick, 20000,
                                                derive_seed(seed, "verify-uniform"), workers);
        double bound = measures::gw_offspring_bound(2, L, lam, measures::LawTag::Uniform);
        r.add("uniform_offspring_bound", est.mean <= bound + 3 * est.stderr_,
              fmt("mean %.4f vs bound %.4f", est.mean, bound));
        auto gw = branching::gw_extinction_runs(est.samples, 1000, 1000, 1000000, derive_seed(seed, "verify-gw"), workers);
        r.add("dominating_gw_extinct", gw.extinct == gw.runs, fmt("%.0f of %.0f extinct", gw.extinct, gw.runs));
    }
}

void oriented_suite(std::uint64_t seed, unsigned workers, Runner& r) {
    {
        auto f = oriented::Frontier::origin();
        bool ok = true;
        for (int n = 0; n < 50; ++n) {
            f = oriented::op_step(f, 1.0, oriented::Variant::Bond, derive_seed(seed, "full"));
            ok = ok && f.occupied.size() == f.level + 1 && f.occupied.front() == -static_cast<std::int64_t>(f.level);
        }
        r.add("alpha_one_fills", ok, ok ? "A_n = {-n, ..., n}" : "unexpected frontier");
    }
    {
        bool ok = oriented::op_step(oriented::Frontier{7, {}}, 0.7, oriented::Variant::Site, seed).empty();
        r.add("extinction_absorbing", ok, ok ? "empty maps to empty" : "empty frontier grew");
    }
    {
        std::uint64_t violations = 0;
        for (int t = 0; t < 200; ++t) {
            std::uint64_t key = derive_seed(seed, "order", t);
            oriented::Frontier f{10, {}};
            for (std::int64_t x = -10; x <= 10; x += 2) f.occupied.push_back(x);
            auto bond = oriented::op_step(f, 0.6, oriented::Variant::Bond, key);
            auto site = oriented::op_step(f, 0.6, oriented::Variant::Site, key);
            for (auto y : site.occupied) {
                if (y - 1 >= -10 && y + 1 <= 10 && !std::binary_search(bond.occupied.begin(), bond.occupied.end(), y))
                    ++violations;
            }
        }
        r.add("site_within_bond", violations == 0, fmt("%.0f violations", violations));
    }
    {
        std::vector<double> alphas{0.5, 0.7, 0.81, 0.95};
        auto rep = oriented::coupled_survival_monotonicity(alphas, oriented::Variant::Bond, 200, 50,
                                                           derive_seed(seed, "verify-op"), workers);
        r.add("coupled_survival_monotone", rep.monotone, fmt("%.0f violating trials", rep.violations));
    }
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"geometry", "measures", "sampling", "percolation", "branching", "oriented"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed, unsigned workers) {
    std::vector<CheckResult> out;
    auto one = [&](const std::string& name) {
        Runner r{name, out};
        if (name == "geometry") geometry_suite(seed, r);
        else if (name == "measures") measures_suite(seed, workers, r);
        else if (name == "sampling") sampling_suite(seed, r);
        else if (name == "percolation") percolation_suite(seed, workers, r);
        else if (name == "branching") branching_suite(seed, workers, r);
        else if (name == "oriented") oriented_suite(seed, workers, r);
        else fail(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
    };
    if (suite == "all") {
        for (const auto& n : suite_names()) one(n);
    } else {
        one(suite);
    }
    return out;
}

std::string results_json(const std::vector<CheckResult>& results, std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "verify_report";
    j["seed"] = seed;
    auto arr = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& c : results) {
        arr.push_back({{"suite", c.suite}, {"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        all = all && c.passed;
    }
    j["passed"] = all;
    j["checks"] = arr;
    return j.dump(2);
}

}  // namespace stickperc::verify
