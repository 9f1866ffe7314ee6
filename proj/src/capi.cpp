#include "stickperc/stickperc.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "branching.hpp"
#include "measures.hpp"
#include "oriented.hpp"
#include "percolation.hpp"
#include "verify.hpp"

using namespace stickperc;

struct sp_law {
    sampling::OrientationLaw law;
};
struct sp_config {
    sampling::Configuration config;
};
struct sp_string {
    std::string text;
};
struct sp_threshold {
    percolation::ThresholdEstimate estimate;
    int d;
    double length;
    double side;
    std::string law;
};
struct sp_offspring {
    branching::OffspringEstimate estimate;
};
struct sp_survival {
    oriented::SurvivalEstimate estimate;
};

namespace {

thread_local std::string last_error;

template <class Fn>
sp_status guard(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return SP_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return static_cast<sp_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SP_CAPACITY_EXCEEDED;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SP_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

std::size_t dim(int d) {
    if (d < 2 || d > 64) fail(ErrorCode::DomainError, "dimension must lie in [2, 64]");
    return static_cast<std::size_t>(d);
}

geometry::Vec vec(const double* p, std::size_t d, const char* what) {
    need(p, what);
    return {p, d};
}

geometry::Vec unit(const double* p, std::size_t d, const char* what) {
    auto v = vec(p, d, what);
    if (!geometry::is_unit(v)) fail(ErrorCode::DomainError, std::string(what) + " must be a unit vector");
    return v;
}

measures::LawTag tag(sp_law_tag t) {
    switch (t) {
        case SP_LAW_UNIFORM: return measures::LawTag::Uniform;
        case SP_LAW_RIGID: return measures::LawTag::Rigid;
        case SP_LAW_DENSITY: return measures::LawTag::Density;
    }
    fail(ErrorCode::InvalidArgument, "unknown law tag");
}

oriented::Variant variant(sp_variant v) {
    if (v == SP_VARIANT_BOND) return oriented::Variant::Bond;
    if (v == SP_VARIANT_SITE) return oriented::Variant::Site;
    fail(ErrorCode::InvalidArgument, "unknown variant");
}

const sampling::OrientationLaw& law_of(const sp_law* law) {
    need(law, "law");
    return law->law;
}

void put_string(sp_string** out, std::string text) {
    need(out, "out");
    *out = new sp_string{std::move(text)};
}

void copy_mc(const measures::McEstimate& e, sp_mc_estimate* out) {
    need(out, "out");
    *out = {e.estimate, e.stderr_, e.trials, e.hits};
}

void copy_crossing(const percolation::CrossingEstimate& e, sp_crossing_estimate* out) {
    *out = {e.lambda, e.frequency, e.ci.low, e.ci.high, e.replicates, e.crossings};
}

}  // namespace

extern "C" {

SP_API const char* sp_version(void) { return "1.0.0"; }

SP_API const char* sp_status_name(sp_status status) { return error_code_name(static_cast<ErrorCode>(status)); }

SP_API const char* sp_last_error(void) { return last_error.c_str(); }

SP_API const char* sp_string_data(const sp_string* s) { return s ? s->text.c_str() : ""; }
SP_API size_t sp_string_size(const sp_string* s) { return s ? s->text.size() : 0; }
SP_API void sp_string_destroy(sp_string* s) { delete s; }

SP_API sp_status sp_law_uniform(sp_law** out) {
    return guard([&] {
        need(out, "out");
        *out = new sp_law{sampling::OrientationLaw::uniform()};
    });
}

SP_API sp_status sp_law_rigid(int d, sp_law** out) {
    return guard([&] {
        need(out, "out");
        *out = new sp_law{sampling::OrientationLaw::rigid_e2(dim(d))};
    });
}

SP_API sp_status sp_law_rigid_axis(const double* axis, int d, sp_law** out) {
    return guard([&] {
        need(out, "out");
        auto a = vec(axis, dim(d), "axis");
        *out = new sp_law{sampling::OrientationLaw::rigid(std::vector<double>(a.begin(), a.end()))};
    });
}

SP_API sp_status sp_law_density(sp_density_fn fn, void* user, double delta, double bound, sp_law** out) {
    return guard([&] {
        need(out, "out");
        if (!fn) fail(ErrorCode::InvalidArgument, "density callback is null");
        auto phi = [fn, user](std::span<const double> p) { return fn(p.data(), static_cast<int>(p.size()), user); };
        *out = new sp_law{sampling::OrientationLaw::bounded_density(phi, delta, bound)};
    });
}

SP_API sp_law_tag sp_law_get_tag(const sp_law* law) {
    if (!law) return SP_LAW_UNIFORM;
    return static_cast<sp_law_tag>(measures::law_tag(law->law));
}

SP_API void sp_law_destroy(sp_law* law) { delete law; }

SP_API sp_status sp_segment_distance(int d, const double* ca, const double* pa, double la, const double* cb,
                                     const double* pb, double lb, double* out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        *out = geometry::segment_segment_distance({vec(ca, n, "ca"), unit(pa, n, "pa"), la},
                                                  {vec(cb, n, "cb"), unit(pb, n, "pb"), lb});
    });
}

SP_API sp_status sp_sticks_intersect(int d, const double* ca, const double* pa, double la, const double* cb,
                                     const double* pb, double lb, int* out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        *out = geometry::sticks_intersect({vec(ca, n, "ca"), unit(pa, n, "pa"), la},
                                          {vec(cb, n, "cb"), unit(pb, n, "pb"), lb});
    });
}

SP_API sp_status sp_line_point_distance_sq(int d, const double* x, const double* p, const double* y, double* out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        *out = geometry::line_point_distance_sq(vec(x, n, "x"), unit(p, n, "p"), vec(y, n, "y"));
    });
}

SP_API sp_status sp_line_line_profile(int d, const double* x, const double* p, const double* y, const double* q,
                                      double t, double* out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        *out = geometry::line_line_distance_profile(vec(x, n, "x"), unit(p, n, "p"), vec(y, n, "y"), unit(q, n, "q"), t);
    });
}

SP_API sp_status sp_line_line_t_min(int d, const double* x, const double* p, const double* y, const double* q,
                                    double* out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        *out = geometry::line_line_t_min(vec(x, n, "x"), unit(p, n, "p"), vec(y, n, "y"), unit(q, n, "q"));
    });
}

SP_API sp_status sp_segment_hits_ball(int d, const double* c, const double* p, double length, const double* ball,
                                      double rho, int* out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        *out = geometry::segment_hits_ball({vec(c, n, "c"), unit(p, n, "p"), length}, vec(ball, n, "ball"), rho);
    });
}

SP_API sp_status sp_min_distance_outside_window(int d, const double* x, const double* p, const double* y,
                                                const double* q, double t1, double tau1, double w, double* out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        *out = geometry::min_distance_outside_window(vec(x, n, "x"), unit(p, n, "p"), vec(y, n, "y"), unit(q, n, "q"),
                                                     t1, tau1, w);
    });
}

SP_API sp_status sp_log_gamma(double x, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::log_gamma(x);
    });
}

SP_API sp_status sp_incomplete_beta(double z, double a, double b, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::regularized_incomplete_beta(z, a, b);
    });
}

SP_API sp_status sp_ball_volume(int d, double rho, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::ball_volume(d, rho);
    });
}

SP_API sp_status sp_stick_hit_volume(int d, double length, double rho, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::stick_hit_volume(d, length, rho);
    });
}

SP_API sp_status sp_cap_hit_exact(int d, double rho, double r, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::cap_hit_probability_exact(d, rho, r);
    });
}

SP_API sp_status sp_cap_hit_lower_bound(int d, double rho, double r, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::cap_hit_lower_bound(d, rho, r);
    });
}

SP_API sp_status sp_c_d(int d, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::c_d(d);
    });
}

SP_API sp_status sp_c_d_prime(int d, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::c_d_prime(d);
    });
}

SP_API sp_status sp_bound_constants_get(int d, sp_law_tag law, double delta, sp_bound_constants* out) {
    return guard([&] {
        need(out, "out");
        auto k = measures::bound_constants(d, tag(law), delta);
        *out = {k.lower, k.upper, k.exponent, k.lower_min_length, k.upper_min_length};
    });
}

SP_API sp_status sp_theorem_bounds(int d, double length, sp_law_tag law, double delta, double* lower, double* upper) {
    return guard([&] {
        need(lower, "lower");
        need(upper, "upper");
        auto b = measures::theorem_bounds(d, length, tag(law), delta);
        *lower = b.lower;
        *upper = b.upper;
    });
}

SP_API sp_status sp_theorem_lower_bound(int d, double length, sp_law_tag law, double delta, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::theorem_lower_bound(d, length, tag(law), delta);
    });
}

SP_API sp_status sp_theorem_upper_bound(int d, double length, sp_law_tag law, double delta, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::theorem_upper_bound(d, length, tag(law), delta);
    });
}

SP_API sp_status sp_gw_offspring_bound(int d, double length, double intensity, sp_law_tag law, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::gw_offspring_bound(d, length, intensity, tag(law));
    });
}

SP_API sp_status sp_lattice_T_count(int d, double length, uint64_t* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::lattice_T_count(d, length);
    });
}

SP_API sp_status sp_lattice_T_count_bound(int d, double length, double* out) {
    return guard([&] {
        need(out, "out");
        *out = measures::lattice_T_count_bound(d, length);
    });
}

SP_API sp_status sp_mc_two_ball(int d, double length, double intensity, const double* gamma, const double* zeta,
                                const sp_law* law, uint64_t trials, uint64_t seed, unsigned workers,
                                sp_mc_estimate* out) {
    return guard([&] {
        auto n = dim(d);
        copy_mc(measures::mc_two_ball_measure(d, length, intensity, vec(gamma, n, "gamma"), vec(zeta, n, "zeta"),
                                              law_of(law), trials, seed, workers),
                out);
    });
}

SP_API sp_status sp_mc_stick_hit_volume(int d, double length, double rho, const sp_law* law, uint64_t trials,
                                        uint64_t seed, unsigned workers, sp_mc_estimate* out) {
    return guard([&] { copy_mc(measures::mc_stick_hit_volume(d, length, rho, law_of(law), trials, seed, workers), out); });
}

SP_API sp_status sp_mc_cap_hit(int d, double rho, double r, uint64_t trials, uint64_t seed, unsigned workers,
                               sp_mc_estimate* out) {
    return guard([&] { copy_mc(measures::mc_cap_hit_probability(d, rho, r, trials, seed, workers), out); });
}

SP_API sp_status sp_config_sample(int d, double length, double intensity, const sp_law* law, const double* low,
                                  const double* high, uint64_t seed, sp_config** out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        auto lo = vec(low, n, "low"), hi = vec(high, n, "high");
        sampling::BoxRegion box{{lo.begin(), lo.end()}, {hi.begin(), hi.end()}};
        *out = new sp_config{sampling::sample_configuration(n, length, intensity, law_of(law), box, seed)};
    });
}

SP_API sp_status sp_config_sample_windowed(int d, double length, double intensity, const sp_law* law, double side,
                                           uint64_t seed, sp_config** out) {
    return guard([&] {
        need(out, "out");
        *out = new sp_config{sampling::sample_windowed(dim(d), length, intensity, law_of(law), side, seed)};
    });
}

SP_API sp_status sp_config_create(int d, double length, const double* low, const double* high, sp_config** out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        if (!(length > 0.0)) fail(ErrorCode::DomainError, "stick length must be positive");
        auto lo = vec(low, n, "low"), hi = vec(high, n, "high");
        sampling::Configuration c;
        c.d = n;
        c.length = length;
        c.law = "custom";
        c.box = {{lo.begin(), lo.end()}, {hi.begin(), hi.end()}};
        c.box.validate();
        c.window = c.box;
        *out = new sp_config{std::move(c)};
    });
}

SP_API sp_status sp_config_push(sp_config* config, const double* center, const double* dir) {
    return guard([&] {
        need(config, "config");
        auto n = config->config.d;
        auto p = vec(dir, n, "dir");
        if (!geometry::is_unit(p)) fail(ErrorCode::InvalidArgument, "direction must be a unit vector");
        config->config.push(vec(center, n, "center"), p);
    });
}

SP_API sp_status sp_config_from_json(const char* text, sp_config** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new sp_config{sampling::configuration_from_json(text)};
    });
}

SP_API sp_status sp_config_to_json(const sp_config* config, sp_string** out) {
    return guard([&] {
        need(config, "config");
        put_string(out, sampling::to_json(config->config));
    });
}

SP_API size_t sp_config_size(const sp_config* config) { return config ? config->config.size() : 0; }

SP_API int sp_config_dim(const sp_config* config) { return config ? static_cast<int>(config->config.d) : 0; }

SP_API sp_status sp_config_stick(const sp_config* config, size_t i, double* center, double* dir) {
    return guard([&] {
        need(config, "config");
        if (i >= config->config.size()) fail(ErrorCode::InvalidArgument, "stick index out of range");
        auto c = config->config.center(i);
        auto p = config->config.dir(i);
        if (center) std::memcpy(center, c.data(), c.size() * sizeof(double));
        if (dir) std::memcpy(dir, p.data(), p.size() * sizeof(double));
    });
}

SP_API void sp_config_destroy(sp_config* config) { delete config; }

SP_API sp_status sp_config_cluster(const sp_config* config, int axis, double cell, sp_cluster_result* out) {
    return guard([&] {
        need(config, "config");
        need(out, "out");
        percolation::ClusterOptions options;
        options.axis = axis;
        options.cell = cell;
        auto res = percolation::cluster(config->config, options);
        uint64_t active = 0;
        for (char a : res.active) active += a ? 1 : 0;
        *out = {res.result.crossed ? 1 : 0, res.result.largest_cluster, res.result.cluster_count, res.result.pair_tests,
                active};
    });
}

SP_API sp_status sp_config_labels(const sp_config* config, int64_t* labels) {
    return guard([&] {
        need(config, "config");
        need(labels, "labels");
        auto res = percolation::cluster(config->config);
        for (std::size_t i = 0; i < config->config.size(); ++i) {
            labels[i] = res.active[i] ? static_cast<int64_t>(res.components.find(i)) : -1;
        }
    });
}

SP_API sp_status sp_crossing_probability(int d, double length, double intensity, const sp_law* law, double side,
                                         uint32_t replicates, uint64_t seed, unsigned workers, int axis,
                                         sp_crossing_estimate* out) {
    return guard([&] {
        need(out, "out");
        percolation::CrossingParams p;
        p.d = static_cast<int>(dim(d));
        p.length = length;
        p.side = side;
        p.replicates = replicates;
        p.seed = seed;
        p.workers = workers;
        p.axis = axis;
        copy_crossing(percolation::crossing_probability(intensity, law_of(law), p), out);
    });
}

SP_API void sp_threshold_params_init(sp_threshold_params* params) {
    if (!params) return;
    *params = {2, 8.0, 80.0, 200, 0, 1, -1, 12};
}

SP_API sp_status sp_threshold_estimate(const sp_law* law, const sp_threshold_params* params, sp_threshold** out) {
    return guard([&] {
        need(params, "params");
        need(out, "out");
        percolation::ThresholdParams p;
        p.d = static_cast<int>(dim(params->d));
        p.length = params->length;
        p.side = params->side;
        p.replicates = params->replicates;
        p.seed = params->seed;
        p.workers = params->workers;
        p.axis = params->axis;
        p.max_probes = params->max_probes;
        auto est = percolation::estimate_threshold(law_of(law), p);
        *out = new sp_threshold{std::move(est), p.d, p.length, p.side, law_of(law).tag()};
    });
}

SP_API sp_status sp_threshold_get(const sp_threshold* t, sp_threshold_summary* out) {
    return guard([&] {
        need(t, "threshold");
        need(out, "out");
        const auto& e = t->estimate;
        *out = {e.lambda_hat, e.ci.low, e.ci.high, e.bracket.low, e.bracket.high, e.replicates,
                static_cast<uint32_t>(e.trace.size()), e.logistic_fit ? 1 : 0, e.axis};
    });
}

SP_API sp_status sp_threshold_probe(const sp_threshold* t, uint32_t index, sp_crossing_estimate* out) {
    return guard([&] {
        need(t, "threshold");
        need(out, "out");
        if (index >= t->estimate.trace.size()) fail(ErrorCode::InvalidArgument, "probe index out of range");
        copy_crossing(t->estimate.trace[index], out);
    });
}

SP_API double sp_threshold_weight(const sp_threshold* t) { return t ? percolation::scaling_weight(t->estimate) : 0.0; }

SP_API sp_status sp_threshold_json(const sp_threshold* t, sp_string** out) {
    return guard([&] {
        need(t, "threshold");
        put_string(out, percolation::threshold_json(t->estimate, t->d, t->length, t->law, t->side));
    });
}

SP_API sp_status sp_threshold_csv(const sp_threshold* t, int header, sp_string** out) {
    return guard([&] {
        need(t, "threshold");
        put_string(out, percolation::probe_trace_csv(t->estimate, t->length, header != 0));
    });
}

SP_API void sp_threshold_destroy(sp_threshold* t) { delete t; }

SP_API sp_status sp_scaling_fit(const double* lengths, const double* lambdas, const double* weights, size_t n,
                                sp_scaling_result* out) {
    return guard([&] {
        need(out, "out");
        if (n > 0) {
            need(lengths, "lengths");
            need(lambdas, "lambdas");
        }
        std::vector<percolation::ScalingPoint> pts;
        for (size_t i = 0; i < n; ++i) pts.push_back({lengths[i], lambdas[i], weights ? weights[i] : 1.0});
        auto f = percolation::scaling_fit(pts);
        *out = {f.slope, f.intercept, f.slope_stderr, f.intercept_stderr, f.points};
    });
}

SP_API sp_status sp_offspring_mc(const sp_law* law, int d, const double* center, const double* dir, double length,
                                 double intensity, uint64_t trials, uint64_t seed, unsigned workers,
                                 sp_offspring** out) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        geometry::SegmentView s{vec(center, n, "center"), vec(dir, n, "dir"), length};
        *out = new sp_offspring{branching::offspring_mean_mc(intensity, law_of(law), s, trials, seed, workers)};
    });
}

SP_API double sp_offspring_mean(const sp_offspring* o) { return o ? o->estimate.mean : 0.0; }
SP_API double sp_offspring_stderr(const sp_offspring* o) { return o ? o->estimate.stderr_ : 0.0; }
SP_API size_t sp_offspring_count(const sp_offspring* o) { return o ? o->estimate.samples.size() : 0; }
SP_API const uint32_t* sp_offspring_samples(const sp_offspring* o) { return o ? o->estimate.samples.data() : nullptr; }

SP_API sp_status sp_offspring_csv(const sp_offspring* o, sp_string** out) {
    return guard([&] {
        need(o, "offspring");
        put_string(out, branching::offspring_csv(o->estimate));
    });
}

SP_API void sp_offspring_destroy(sp_offspring* o) { delete o; }

SP_API sp_status sp_gw_run(const uint32_t* offspring, size_t n, uint32_t max_generations, uint64_t population_cap,
                           uint64_t seed, sp_string** json) {
    return guard([&] {
        need(offspring, "offspring");
        auto rep = branching::dominating_gw_run({offspring, n}, max_generations, population_cap, seed);
        put_string(json, branching::gw_report_json(rep));
    });
}

SP_API sp_status sp_gw_extinction(const uint32_t* offspring, size_t n, uint32_t runs, uint32_t max_generations,
                                  uint64_t population_cap, uint64_t seed, unsigned workers, sp_gw_summary* out) {
    return guard([&] {
        need(offspring, "offspring");
        need(out, "out");
        auto s = branching::gw_extinction_runs({offspring, n}, runs, max_generations, population_cap, seed, workers);
        *out = {s.runs, s.extinct, s.truncated};
    });
}

SP_API sp_status sp_component_exploration(const sp_law* law, int d, const double* center, const double* dir,
                                          double length, double intensity, uint32_t max_generations,
                                          uint64_t population_cap, uint64_t seed, sp_exploration_result* out,
                                          sp_string** json) {
    return guard([&] {
        need(out, "out");
        auto n = dim(d);
        geometry::SegmentView s{vec(center, n, "center"), vec(dir, n, "dir"), length};
        branching::ExplorationParams p;
        p.intensity = intensity;
        p.max_generations = max_generations;
        p.population_cap = population_cap;
        p.seed = seed;
        auto rep = branching::component_exploration(law_of(law), s, p);
        *out = {rep.component_size,
                static_cast<uint32_t>(rep.generation_sizes.size()),
                rep.dominated ? 1 : 0,
                rep.window_exceeded ? 1 : 0,
                rep.truncated ? 1 : 0,
                rep.dominating.extinct ? 1 : 0,
                rep.sticks_in_window};
        if (json) {
            nlohmann::ordered_json j;
            j["schema_version"] = branching::kGWJsonSchemaVersion;
            j["kind"] = "component_exploration";
            j["component_size"] = rep.component_size;
            j["generation_sizes"] = rep.generation_sizes;
            j["dominating_generation_sizes"] = rep.dominating.generation_sizes;
            j["dominated"] = rep.dominated;
            j["window_exceeded"] = rep.window_exceeded;
            j["truncated"] = rep.truncated;
            j["sticks_in_window"] = rep.sticks_in_window;
            put_string(json, j.dump(2));
        }
    });
}

SP_API sp_status sp_op_survival(double alpha, sp_variant v, uint64_t n_max, uint32_t trials, uint64_t seed,
                                unsigned workers, sp_survival** out) {
    return guard([&] {
        need(out, "out");
        *out = new sp_survival{oriented::survival_probability(alpha, variant(v), n_max, trials, seed, workers)};
    });
}

SP_API double sp_survival_fraction(const sp_survival* s) { return s ? s->estimate.fraction : 0.0; }
SP_API uint32_t sp_survival_survived(const sp_survival* s) { return s ? s->estimate.survived : 0; }
SP_API uint32_t sp_survival_trials(const sp_survival* s) { return s ? s->estimate.trials : 0; }

SP_API sp_status sp_survival_ci(const sp_survival* s, double* low, double* high) {
    return guard([&] {
        need(s, "survival");
        need(low, "low");
        need(high, "high");
        *low = s->estimate.ci_low;
        *high = s->estimate.ci_high;
    });
}

SP_API const int64_t* sp_survival_levels(const sp_survival* s) {
    return s ? s->estimate.extinction_level.data() : nullptr;
}

SP_API void sp_survival_destroy(sp_survival* s) { delete s; }

SP_API sp_status sp_survival_csv(const double* alphas, const sp_survival* const* estimates, size_t n, sp_string** out) {
    return guard([&] {
        if (n > 0) {
            need(alphas, "alphas");
            need(estimates, "estimates");
        }
        std::vector<oriented::SurvivalEstimate> e;
        for (size_t i = 0; i < n; ++i) {
            need(estimates[i], "estimate");
            e.push_back(estimates[i]->estimate);
        }
        put_string(out, oriented::survival_csv({alphas, n}, e));
    });
}

SP_API sp_status sp_op_monotonicity(const double* alphas, size_t n, sp_variant v, uint64_t n_max, uint32_t trials,
                                    uint64_t seed, unsigned workers, int* monotone, uint32_t* survived) {
    return guard([&] {
        need(monotone, "monotone");
        if (n > 0) need(alphas, "alphas");
        auto rep = oriented::coupled_survival_monotonicity({alphas, n}, variant(v), n_max, trials, seed, workers);
        *monotone = rep.monotone ? 1 : 0;
        if (survived) std::copy(rep.survived.begin(), rep.survived.end(), survived);
    });
}

SP_API sp_status sp_op_step(uint64_t level, const int64_t* occupied, size_t count, double alpha, sp_variant v,
                            uint64_t key, int64_t* out, size_t* out_count) {
    return guard([&] {
        need(out_count, "out_count");
        if (count > 0) {
            need(occupied, "occupied");
            need(out, "out");
        }
        oriented::Frontier f{level, std::vector<std::int64_t>(occupied, occupied + count)};
        if (!f.valid()) fail(ErrorCode::InvalidArgument, "frontier violates parity, order or support");
        auto next = oriented::op_step(f, alpha, variant(v), key);
        std::copy(next.occupied.begin(), next.occupied.end(), out);
        *out_count = next.occupied.size();
    });
}

SP_API sp_status sp_verify(const char* suite, uint64_t seed, unsigned workers, int* all_passed, sp_string** json) {
    return guard([&] {
        need(suite, "suite");
        auto results = verify::run_suite(suite, seed, workers);
        bool ok = true;
        for (const auto& r : results) ok = ok && r.passed;
        if (all_passed) *all_passed = ok ? 1 : 0;
        if (json) put_string(json, verify::results_json(results, seed));
    });
}

}  // extern "C"
