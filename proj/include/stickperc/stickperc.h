#ifndef STICKPERC_H
#define STICKPERC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(STICKPERC_BUILDING)
#    define SP_API __declspec(dllexport)
#  else
#    define SP_API __declspec(dllimport)
#  endif
#else
#  define SP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sp_status {
    SP_OK = 0,
    SP_INVALID_ARGUMENT = 1,
    SP_DOMAIN_ERROR = 2,
    SP_PRECONDITION_VIOLATED = 3,
    SP_PARALLEL_LINES = 4,
    SP_INSUFFICIENT_TRIALS = 5,
    SP_REJECTION_STALL = 6,
    SP_CAPACITY_EXCEEDED = 7,
    SP_BRACKET_FAILURE = 8,
    SP_DEGENERATE_DESIGN = 9,
    SP_IO_ERROR = 10,
    SP_INTERNAL = 11
} sp_status;

typedef enum sp_law_tag { SP_LAW_UNIFORM = 0, SP_LAW_RIGID = 1, SP_LAW_DENSITY = 2 } sp_law_tag;
typedef enum sp_variant { SP_VARIANT_BOND = 0, SP_VARIANT_SITE = 1 } sp_variant;

typedef struct sp_law sp_law;
typedef struct sp_config sp_config;
typedef struct sp_string sp_string;
typedef struct sp_threshold sp_threshold;
typedef struct sp_offspring sp_offspring;
typedef struct sp_survival sp_survival;

/* Density of a bounded-density law w.r.t. normalised surface measure, evaluated at unit p. */
typedef double (*sp_density_fn)(const double* p, int d, void* user);

SP_API const char* sp_version(void);
SP_API const char* sp_status_name(sp_status status);
/* Message of the last failing call on this thread; "" after a success. */
SP_API const char* sp_last_error(void);

/* Strings returned by the library. */
SP_API const char* sp_string_data(const sp_string* s);
SP_API size_t sp_string_size(const sp_string* s);
SP_API void sp_string_destroy(sp_string* s);

/* Orientation laws. */
SP_API sp_status sp_law_uniform(sp_law** out);
/* Point mass on e_2 in dimension d. */
SP_API sp_status sp_law_rigid(int d, sp_law** out);
SP_API sp_status sp_law_rigid_axis(const double* axis, int d, sp_law** out);
/* `user` must outlive the law; fn may be called from several threads at once. */
SP_API sp_status sp_law_density(sp_density_fn fn, void* user, double delta, double bound, sp_law** out);
SP_API sp_law_tag sp_law_get_tag(const sp_law* law);
SP_API void sp_law_destroy(sp_law* law);

/* Geometry. Vectors are d doubles; directions must be unit. */
SP_API sp_status sp_segment_distance(int d, const double* ca, const double* pa, double la, const double* cb,
                                     const double* pb, double lb, double* out);
SP_API sp_status sp_sticks_intersect(int d, const double* ca, const double* pa, double la, const double* cb,
                                     const double* pb, double lb, int* out);
SP_API sp_status sp_line_point_distance_sq(int d, const double* x, const double* p, const double* y, double* out);
SP_API sp_status sp_line_line_profile(int d, const double* x, const double* p, const double* y, const double* q,
                                      double t, double* out);
SP_API sp_status sp_line_line_t_min(int d, const double* x, const double* p, const double* y, const double* q,
                                    double* out);
SP_API sp_status sp_segment_hits_ball(int d, const double* c, const double* p, double length, const double* ball,
                                      double rho, int* out);
SP_API sp_status sp_min_distance_outside_window(int d, const double* x, const double* p, const double* y,
                                                const double* q, double t1, double tau1, double w, double* out);

/* Closed-form measures and bounds. */
SP_API sp_status sp_log_gamma(double x, double* out);
SP_API sp_status sp_incomplete_beta(double z, double a, double b, double* out);
SP_API sp_status sp_ball_volume(int d, double rho, double* out);
SP_API sp_status sp_stick_hit_volume(int d, double length, double rho, double* out);
SP_API sp_status sp_cap_hit_exact(int d, double rho, double r, double* out);
SP_API sp_status sp_cap_hit_lower_bound(int d, double rho, double r, double* out);
SP_API sp_status sp_c_d(int d, double* out);
SP_API sp_status sp_c_d_prime(int d, double* out);

typedef struct sp_bound_constants {
    double lower;
    double upper;
    int exponent;
    double lower_min_length;
    double upper_min_length;
} sp_bound_constants;

/* Constants c, C of c L^-k <= lambda_c <= C L^-k; never checks L. */
SP_API sp_status sp_bound_constants_get(int d, sp_law_tag law, double delta, sp_bound_constants* out);
/* Bounds at L; SP_PRECONDITION_VIOLATED below the validity threshold of the requested bound. */
SP_API sp_status sp_theorem_bounds(int d, double length, sp_law_tag law, double delta, double* lower, double* upper);
SP_API sp_status sp_theorem_lower_bound(int d, double length, sp_law_tag law, double delta, double* out);
SP_API sp_status sp_theorem_upper_bound(int d, double length, sp_law_tag law, double delta, double* out);
SP_API sp_status sp_gw_offspring_bound(int d, double length, double intensity, sp_law_tag law, double* out);
SP_API sp_status sp_lattice_T_count(int d, double length, uint64_t* out);
SP_API sp_status sp_lattice_T_count_bound(int d, double length, double* out);

typedef struct sp_mc_estimate {
    double estimate;
    double stderr_;
    uint64_t trials;
    uint64_t hits;
} sp_mc_estimate;

SP_API sp_status sp_mc_two_ball(int d, double length, double intensity, const double* gamma, const double* zeta,
                                const sp_law* law, uint64_t trials, uint64_t seed, unsigned workers,
                                sp_mc_estimate* out);
SP_API sp_status sp_mc_stick_hit_volume(int d, double length, double rho, const sp_law* law, uint64_t trials,
                                        uint64_t seed, unsigned workers, sp_mc_estimate* out);
SP_API sp_status sp_mc_cap_hit(int d, double rho, double r, uint64_t trials, uint64_t seed, unsigned workers,
                               sp_mc_estimate* out);

/* Configurations. */
SP_API sp_status sp_config_sample(int d, double length, double intensity, const sp_law* law, const double* low,
                                  const double* high, uint64_t seed, sp_config** out);
/* Window [0, side]^d, centres from the window grown by L/2 + 1. */
SP_API sp_status sp_config_sample_windowed(int d, double length, double intensity, const sp_law* law, double side,
                                           uint64_t seed, sp_config** out);
/* Empty configuration with window [low, high]; fill with sp_config_push. */
SP_API sp_status sp_config_create(int d, double length, const double* low, const double* high, sp_config** out);
SP_API sp_status sp_config_push(sp_config* config, const double* center, const double* dir);
SP_API sp_status sp_config_from_json(const char* text, sp_config** out);
SP_API sp_status sp_config_to_json(const sp_config* config, sp_string** out);
SP_API size_t sp_config_size(const sp_config* config);
SP_API int sp_config_dim(const sp_config* config);
SP_API sp_status sp_config_stick(const sp_config* config, size_t i, double* center, double* dir);
SP_API void sp_config_destroy(sp_config* config);

typedef struct sp_cluster_result {
    int crossed;
    uint64_t largest_cluster;
    uint64_t cluster_count;
    uint64_t pair_tests;
    uint64_t active_sticks;
} sp_cluster_result;

/* cell <= 0 selects L + 2. */
SP_API sp_status sp_config_cluster(const sp_config* config, int axis, double cell, sp_cluster_result* out);
/* labels receives sp_config_size entries: the component root of each stick, or -1 outside the window. */
SP_API sp_status sp_config_labels(const sp_config* config, int64_t* labels);

/* Percolation. */
typedef struct sp_crossing_estimate {
    double lambda;
    double frequency;
    double ci_low;
    double ci_high;
    uint32_t replicates;
    uint32_t crossings;
} sp_crossing_estimate;

SP_API sp_status sp_crossing_probability(int d, double length, double intensity, const sp_law* law, double side,
                                         uint32_t replicates, uint64_t seed, unsigned workers, int axis,
                                         sp_crossing_estimate* out);

typedef struct sp_threshold_params {
    int d;
    double length;
    double side;
    uint32_t replicates;
    uint64_t seed;
    unsigned workers;
    int axis; /* -1 for the default axis */
    int max_probes;
} sp_threshold_params;

SP_API void sp_threshold_params_init(sp_threshold_params* params);
SP_API sp_status sp_threshold_estimate(const sp_law* law, const sp_threshold_params* params, sp_threshold** out);

typedef struct sp_threshold_summary {
    double lambda_hat;
    double ci_low;
    double ci_high;
    double bracket_low;
    double bracket_high;
    uint32_t replicates;
    uint32_t probes;
    int logistic_fit;
    int axis;
} sp_threshold_summary;

SP_API sp_status sp_threshold_get(const sp_threshold* t, sp_threshold_summary* out);
SP_API sp_status sp_threshold_probe(const sp_threshold* t, uint32_t index, sp_crossing_estimate* out);
/* 1 / var(ln lambda_hat) from the 95% interval. */
SP_API double sp_threshold_weight(const sp_threshold* t);
SP_API sp_status sp_threshold_json(const sp_threshold* t, sp_string** out);
SP_API sp_status sp_threshold_csv(const sp_threshold* t, int header, sp_string** out);
SP_API void sp_threshold_destroy(sp_threshold* t);

typedef struct sp_scaling_result {
    double slope;
    double intercept;
    double slope_stderr;
    double intercept_stderr;
    size_t points;
} sp_scaling_result;

/* weights may be NULL for unit weights. */
SP_API sp_status sp_scaling_fit(const double* lengths, const double* lambdas, const double* weights, size_t n,
                                sp_scaling_result* out);

/* Branching. */
SP_API sp_status sp_offspring_mc(const sp_law* law, int d, const double* center, const double* dir, double length,
                                 double intensity, uint64_t trials, uint64_t seed, unsigned workers,
                                 sp_offspring** out);
SP_API double sp_offspring_mean(const sp_offspring* o);
SP_API double sp_offspring_stderr(const sp_offspring* o);
SP_API size_t sp_offspring_count(const sp_offspring* o);
SP_API const uint32_t* sp_offspring_samples(const sp_offspring* o);
SP_API sp_status sp_offspring_csv(const sp_offspring* o, sp_string** out);
SP_API void sp_offspring_destroy(sp_offspring* o);

SP_API sp_status sp_gw_run(const uint32_t* offspring, size_t n, uint32_t max_generations, uint64_t population_cap,
                           uint64_t seed, sp_string** json);

typedef struct sp_gw_summary {
    uint32_t runs;
    uint32_t extinct;
    uint32_t truncated;
} sp_gw_summary;

SP_API sp_status sp_gw_extinction(const uint32_t* offspring, size_t n, uint32_t runs, uint32_t max_generations,
                                  uint64_t population_cap, uint64_t seed, unsigned workers, sp_gw_summary* out);

typedef struct sp_exploration_result {
    uint64_t component_size;
    uint32_t generations;
    int dominated;
    int window_exceeded;
    int truncated;
    int gw_extinct;
    uint64_t sticks_in_window;
} sp_exploration_result;

/* json (optional, may be NULL) receives the generation profiles. */
SP_API sp_status sp_component_exploration(const sp_law* law, int d, const double* center, const double* dir,
                                          double length, double intensity, uint32_t max_generations,
                                          uint64_t population_cap, uint64_t seed, sp_exploration_result* out,
                                          sp_string** json);

/* Oriented percolation. */
SP_API sp_status sp_op_survival(double alpha, sp_variant variant, uint64_t n_max, uint32_t trials, uint64_t seed,
                                unsigned workers, sp_survival** out);
SP_API double sp_survival_fraction(const sp_survival* s);
SP_API uint32_t sp_survival_survived(const sp_survival* s);
SP_API uint32_t sp_survival_trials(const sp_survival* s);
SP_API sp_status sp_survival_ci(const sp_survival* s, double* low, double* high);
/* Extinction level of each trial, -1 for survival. */
SP_API const int64_t* sp_survival_levels(const sp_survival* s);
SP_API void sp_survival_destroy(sp_survival* s);
/* CSV rows for several estimates, one alpha each. */
SP_API sp_status sp_survival_csv(const double* alphas, const sp_survival* const* estimates, size_t n, sp_string** out);

/* survived (optional) receives one count per alpha. */
SP_API sp_status sp_op_monotonicity(const double* alphas, size_t n, sp_variant variant, uint64_t n_max,
                                    uint32_t trials, uint64_t seed, unsigned workers, int* monotone,
                                    uint32_t* survived);

/* One op_step from the given frontier; out (capacity >= 2 * count) receives the next level. */
SP_API sp_status sp_op_step(uint64_t level, const int64_t* occupied, size_t count, double alpha, sp_variant variant,
                            uint64_t key, int64_t* out, size_t* out_count);

/* Property suites; suite is one of geometry, measures, sampling, percolation, branching, oriented, all. */
SP_API sp_status sp_verify(const char* suite, uint64_t seed, unsigned workers, int* all_passed, sp_string** json);

#ifdef __cplusplus
}
#endif

#endif
