#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stickperc/stickperc.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptance = 1;
constexpr int kExitInput = 2;

struct CliError {
    sp_status status;
    std::string message;
};

void check(sp_status s) {
    if (s != SP_OK) throw CliError{s, sp_last_error()};
}

std::string take(sp_string* s) {
    std::string out(sp_string_data(s), sp_string_size(s));
    sp_string_destroy(s);
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CliError{SP_IO_ERROR, "cannot open " + path + " for writing"};
    f << text;
}

struct Law {
    sp_law* handle = nullptr;
    ~Law() { sp_law_destroy(handle); }
};

sp_law_tag parse_tag(const std::string& name) {
    if (name == "uniform") return SP_LAW_UNIFORM;
    if (name == "rigid") return SP_LAW_RIGID;
    if (name == "density") return SP_LAW_DENSITY;
    throw CliError{SP_INVALID_ARGUMENT, "unknown law '" + name + "' (uniform|rigid|density)"};
}

// Simulation commands accept the uniform and rigid laws; a density law needs a callback.
void make_law(const std::string& name, int d, Law& law) {
    switch (parse_tag(name)) {
        case SP_LAW_UNIFORM: check(sp_law_uniform(&law.handle)); break;
        case SP_LAW_RIGID: check(sp_law_rigid(d, &law.handle)); break;
        default: throw CliError{SP_INVALID_ARGUMENT, "law '" + name + "' is not available for simulation from the CLI"};
    }
}

sp_variant parse_variant(const std::string& name) {
    if (name == "bond") return SP_VARIANT_BOND;
    if (name == "site") return SP_VARIANT_SITE;
    throw CliError{SP_INVALID_ARGUMENT, "unknown variant '" + name + "' (bond|site)"};
}

std::vector<double> unit(int d, int axis) {
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    v[static_cast<std::size_t>(axis)] = 1.0;
    return v;
}

struct Common {
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    cmd->add_option("--workers", c.workers, "Worker threads (output does not depend on it)")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1024u));
}

// JSON config: {"command": "...", "key": value, ...}; keys given on the command line win.
std::vector<std::string> merge_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    std::ifstream f(path);
    if (!f) throw CliError{SP_IO_ERROR, "cannot read config " + path};
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw CliError{SP_IO_ERROR, std::string("malformed config: ") + e.what()};
    }
    if (!j.is_object()) throw CliError{SP_IO_ERROR, "config must be a JSON object"};
    std::set<std::string> given;
    for (const auto& a : rest) {
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    }
    std::vector<std::string> out;
    bool has_command = !rest.empty() && rest.front().rfind("-", 0) != 0;
    if (has_command) {
        out.push_back(rest.front());
    } else if (j.contains("command")) {
        out.push_back(j["command"].get<std::string>());
    }
    auto scalar = [](const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
        return v.dump();
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "command" || given.count(key)) continue;
        out.push_back("--" + key);
        if (value.is_array()) {
            for (const auto& v : value) out.push_back(scalar(v));
        } else {
            out.push_back(scalar(value));
        }
    }
    for (std::size_t i = has_command ? 1 : 0; i < rest.size(); ++i) out.push_back(rest[i]);
    return out;
}

int cmd_bounds(int d, double L, const std::string& law, double delta) {
    sp_law_tag t = parse_tag(law);
    sp_bound_constants k{};
    check(sp_bound_constants_get(d, t, delta, &k));
    double lower = 0, upper = 0;
    // The lower bound is required; an upper bound below its own threshold is reported as null.
    check(sp_theorem_lower_bound(d, L, t, delta, &lower));
    sp_status su = sp_theorem_upper_bound(d, L, t, delta, &upper);
    if (su != SP_OK && su != SP_PRECONDITION_VIOLATED) check(su);
    json j;
    j["schema_version"] = 1;
    j["kind"] = "bounds";
    j["d"] = d;
    j["L"] = L;
    j["law"] = law;
    j["delta"] = delta;
    j["exponent"] = k.exponent;
    j["lower_constant"] = k.lower;
    j["upper_constant"] = k.upper;
    j["lower"] = lower;
    j["upper"] = su == SP_OK ? json(upper) : json(nullptr);
    j["lower_valid_above"] = k.lower_min_length;
    j["upper_valid_above"] = k.upper_min_length;
    j["upper_valid"] = su == SP_OK;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct ThresholdArgs {
    int d = 2;
    double L = 16;
    std::string law = "uniform";
    double s_factor = 10;
    std::uint32_t replicates = 200;
    int axis = -1;
    int max_probes = 12;
    std::string csv;
    std::string format = "json";
};

json threshold_summary(const sp_threshold* t, double L) {
    sp_threshold_summary s{};
    check(sp_threshold_get(t, &s));
    json j;
    j["L"] = L;
    j["lambda_hat"] = s.lambda_hat;
    j["ci_low"] = s.ci_low;
    j["ci_high"] = s.ci_high;
    j["probes"] = s.probes;
    j["logistic_fit"] = s.logistic_fit != 0;
    j["weight"] = sp_threshold_weight(t);
    return j;
}

// Bracket check: the estimate lies strictly inside the theorem bounds for its law, evaluated
// from the constants so it is reported also where L is below the validity thresholds.
json bracket_check(int d, double L, const std::string& law, double lambda_hat) {
    sp_bound_constants k{};
    check(sp_bound_constants_get(d, parse_tag(law), 1.0, &k));
    double scale = std::pow(L, -k.exponent);
    json j;
    j["lower"] = k.lower * scale;
    j["upper"] = k.upper * scale;
    j["inside"] = k.lower * scale < lambda_hat && lambda_hat < k.upper * scale;
    return j;
}

int cmd_threshold(const ThresholdArgs& a, const Common& c) {
    Law law;
    make_law(a.law, a.d, law);
    sp_threshold_params p;
    sp_threshold_params_init(&p);
    p.d = a.d;
    p.length = a.L;
    p.side = a.s_factor * a.L;
    p.replicates = a.replicates;
    p.seed = c.seed;
    p.workers = c.workers;
    p.axis = a.axis;
    p.max_probes = a.max_probes;
    sp_threshold* t = nullptr;
    check(sp_threshold_estimate(law.handle, &p, &t));
    sp_string* js = nullptr;
    sp_string* csv = nullptr;
    sp_status s1 = sp_threshold_json(t, &js);
    sp_status s2 = sp_threshold_csv(t, 1, &csv);
    sp_threshold_summary sum{};
    sp_threshold_get(t, &sum);
    sp_threshold_destroy(t);
    check(s1);
    check(s2);
    json j = json::parse(take(js));
    j["bracket_check"] = bracket_check(a.d, a.L, a.law, sum.lambda_hat);
    std::string csv_text = take(csv);
    if (!a.csv.empty()) write_file(a.csv, csv_text);
    if (a.format == "csv") {
        std::cout << csv_text;
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return kExitOk;
}

struct ScalingArgs {
    int d = 2;
    std::string law = "uniform";
    std::vector<double> lengths{8, 16, 32, 64};
    std::vector<double> inject;
    double s_factor = 10;
    std::uint32_t replicates = 200;
    int axis = -1;
    std::vector<double> expect;
    std::string csv;
};

int cmd_scaling(const ScalingArgs& a, const Common& c) {
    if (!a.inject.empty() && a.inject.size() != a.lengths.size()) {
        throw CliError{SP_INVALID_ARGUMENT, "--inject needs one lambda per L"};
    }
    if (!a.expect.empty() && a.expect.size() != 2) throw CliError{SP_INVALID_ARGUMENT, "--expect takes MIN MAX"};
    std::vector<double> lams, weights;
    json points = json::array();
    std::string csv_text;
    bool all_inside = true;
    if (a.inject.empty()) {
        Law law;
        make_law(a.law, a.d, law);
        for (std::size_t i = 0; i < a.lengths.size(); ++i) {
            double L = a.lengths[i];
            std::cerr << "scaling: estimating L = " << L << "\n";
            sp_threshold_params p;
            sp_threshold_params_init(&p);
            p.d = a.d;
            p.length = L;
            p.side = a.s_factor * L;
            p.replicates = a.replicates;
            p.seed = c.seed + i;
            p.workers = c.workers;
            p.axis = a.axis;
            sp_threshold* t = nullptr;
            check(sp_threshold_estimate(law.handle, &p, &t));
            json pt;
            sp_string* csv = nullptr;
            try {
                pt = threshold_summary(t, L);
                check(sp_threshold_csv(t, i == 0, &csv));
            } catch (...) {
                sp_threshold_destroy(t);
                throw;
            }
            sp_threshold_destroy(t);
            csv_text += take(csv);
            pt["bracket_check"] = bracket_check(a.d, L, a.law, pt["lambda_hat"].get<double>());
            all_inside = all_inside && pt["bracket_check"]["inside"].get<bool>();
            lams.push_back(pt["lambda_hat"].get<double>());
            weights.push_back(pt["weight"].get<double>());
            points.push_back(pt);
        }
    } else {
        for (std::size_t i = 0; i < a.lengths.size(); ++i) {
            lams.push_back(a.inject[i]);
            weights.push_back(1.0);
            points.push_back({{"L", a.lengths[i]}, {"lambda_hat", a.inject[i]}, {"weight", 1.0}});
        }
    }
    sp_scaling_result fit{};
    check(sp_scaling_fit(a.lengths.data(), lams.data(), weights.data(), a.lengths.size(), &fit));
    json j;
    j["schema_version"] = 1;
    j["kind"] = "scaling_fit";
    j["d"] = a.d;
    j["law"] = a.law;
    j["s_factor"] = a.s_factor;
    j["replicates"] = a.replicates;
    j["seed"] = c.seed;
    j["injected"] = !a.inject.empty();
    j["points"] = points;
    j["slope"] = fit.slope;
    j["slope_stderr"] = fit.slope_stderr;
    j["intercept"] = fit.intercept;
    j["intercept_stderr"] = fit.intercept_stderr;
    int code = kExitOk;
    if (!a.expect.empty()) {
        bool ok = a.expect[0] <= fit.slope && fit.slope <= a.expect[1];
        j["expected_slope"] = a.expect;
        j["slope_in_range"] = ok;
        if (!ok) code = kExitAcceptance;
    }
    if (a.inject.empty()) {
        j["all_inside_bracket"] = all_inside;
        if (!all_inside) code = kExitAcceptance;
    }
    if (!a.csv.empty() && !csv_text.empty()) write_file(a.csv, csv_text);
    std::cout << j.dump(2) << "\n";
    return code;
}

struct BranchingArgs {
    int d = 2;
    double L = 32;
    std::string law = "uniform";
    double lambda = 0;
    double lambda_factor = 1;
    std::uint64_t trials = 20000;
    std::uint32_t runs = 1000;
    std::uint32_t max_generations = 1000;
    std::uint64_t population_cap = 1000000;
    std::uint32_t explore_generations = 0;
    std::string csv;
};

int cmd_branching(const BranchingArgs& a, const Common& c) {
    Law law;
    make_law(a.law, a.d, law);
    double lambda = a.lambda;
    sp_law_tag tag = parse_tag(a.law);
    if (!(lambda > 0)) {
        sp_bound_constants k{};
        check(sp_bound_constants_get(a.d, tag, 1.0, &k));
        lambda = a.lambda_factor * k.lower * std::pow(a.L, -k.exponent);
    }
    auto center = std::vector<double>(static_cast<std::size_t>(a.d), 0.0);
    auto dir = unit(a.d, tag == SP_LAW_RIGID ? 1 : 0);
    sp_offspring* o = nullptr;
    check(sp_offspring_mc(law.handle, a.d, center.data(), dir.data(), a.L, lambda, a.trials, c.seed, c.workers, &o));
    double mean = sp_offspring_mean(o), se = sp_offspring_stderr(o);
    std::vector<std::uint32_t> samples(sp_offspring_samples(o), sp_offspring_samples(o) + sp_offspring_count(o));
    sp_string* csv = nullptr;
    sp_status sc = sp_offspring_csv(o, &csv);
    sp_offspring_destroy(o);
    check(sc);
    std::string csv_text = take(csv);

    json j;
    j["schema_version"] = 1;
    j["kind"] = "branching";
    j["d"] = a.d;
    j["L"] = a.L;
    j["law"] = a.law;
    j["lambda"] = lambda;
    j["trials"] = a.trials;
    j["offspring_mean"] = mean;
    j["offspring_stderr"] = se;
    double bound = 0;
    sp_status sb = sp_gw_offspring_bound(a.d, a.L, lambda, tag, &bound);
    j["offspring_bound"] = sb == SP_OK ? json(bound) : json(nullptr);
    if (tag == SP_LAW_RIGID) {
        double v1 = 0, v2 = 0;
        check(sp_ball_volume(a.d - 1, 2.0, &v1));
        check(sp_ball_volume(a.d, 2.0, &v2));
        j["rigid_exact_mean"] = lambda * (2 * a.L * v1 + v2);
    }
    sp_gw_summary gw{};
    check(sp_gw_extinction(samples.data(), samples.size(), a.runs, a.max_generations, a.population_cap,
                           c.seed ^ 0x5bd1e995ULL, c.workers, &gw));
    j["gw"] = {{"runs", gw.runs}, {"extinct", gw.extinct}, {"truncated", gw.truncated},
               {"max_generations", a.max_generations}, {"population_cap", a.population_cap}};
    sp_string* run = nullptr;
    check(sp_gw_run(samples.data(), samples.size(), a.max_generations, a.population_cap, c.seed, &run));
    auto report = json::parse(take(run));
    report.erase("offspring_samples");
    j["gw_example"] = report;
    if (a.explore_generations > 0) {
        sp_exploration_result ex{};
        sp_string* ej = nullptr;
        check(sp_component_exploration(law.handle, a.d, center.data(), dir.data(), a.L, lambda, a.explore_generations,
                                       a.population_cap, c.seed, &ex, &ej));
        j["exploration"] = json::parse(take(ej));
    }
    if (!a.csv.empty()) write_file(a.csv, csv_text);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct OrientedArgs {
    std::vector<double> alphas{0.81};
    std::string variant = "bond";
    std::uint64_t n_max = 500;
    std::uint32_t trials = 500;
    bool monotonicity = false;
    std::string csv;
};

int cmd_oriented(const OrientedArgs& a, const Common& c) {
    sp_variant v = parse_variant(a.variant);
    json j;
    j["schema_version"] = 1;
    j["kind"] = "oriented_survival";
    j["variant"] = a.variant;
    j["n_max"] = a.n_max;
    j["trials"] = a.trials;
    j["seed"] = c.seed;
    json rows = json::array();
    std::vector<sp_survival*> ests;
    try {
        for (double alpha : a.alphas) {
            sp_survival* s = nullptr;
            check(sp_op_survival(alpha, v, a.n_max, a.trials, c.seed, c.workers, &s));
            ests.push_back(s);
            double lo = 0, hi = 0;
            check(sp_survival_ci(s, &lo, &hi));
            rows.push_back({{"alpha", alpha}, {"survived", sp_survival_survived(s)}, {"fraction", sp_survival_fraction(s)},
                            {"ci", {lo, hi}}});
        }
        if (!a.csv.empty()) {
            sp_string* csv = nullptr;
            check(sp_survival_csv(a.alphas.data(), ests.data(), ests.size(), &csv));
            write_file(a.csv, take(csv));
        }
    } catch (...) {
        for (auto* s : ests) sp_survival_destroy(s);
        throw;
    }
    for (auto* s : ests) sp_survival_destroy(s);
    j["results"] = rows;
    if (a.monotonicity) {
        int mono = 0;
        std::vector<std::uint32_t> survived(a.alphas.size());
        check(sp_op_monotonicity(a.alphas.data(), a.alphas.size(), v, a.n_max, a.trials, c.seed, c.workers, &mono,
                                 survived.data()));
        j["coupled_monotone"] = mono != 0;
        j["coupled_survived"] = survived;
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct MeasureArgs {
    std::string what = "stick-hit";
    int d = 2;
    double L = 10;
    double rho = 2;
    double r = 4;
    double lambda = 1;
    std::string law = "uniform";
    std::uint64_t trials = 1000000;
    std::vector<double> gamma, zeta;
};

int cmd_measure(const MeasureArgs& a, const Common& c) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "measure_mc";
    j["what"] = a.what;
    j["d"] = a.d;
    j["trials"] = a.trials;
    j["seed"] = c.seed;
    sp_mc_estimate e{};
    double exact = NAN;
    if (a.what == "stick-hit") {
        Law law;
        make_law(a.law, a.d, law);
        check(sp_mc_stick_hit_volume(a.d, a.L, a.rho, law.handle, a.trials, c.seed, c.workers, &e));
        check(sp_stick_hit_volume(a.d, a.L, a.rho, &exact));
        j["L"] = a.L;
        j["rho"] = a.rho;
    } else if (a.what == "cap-hit") {
        check(sp_mc_cap_hit(a.d, a.rho, a.r, a.trials, c.seed, c.workers, &e));
        check(sp_cap_hit_exact(a.d, a.rho, a.r, &exact));
        double lb = 0;
        check(sp_cap_hit_lower_bound(a.d, a.rho, a.r, &lb));
        j["rho"] = a.rho;
        j["r"] = a.r;
        j["lower_bound"] = lb;
    } else if (a.what == "two-ball") {
        Law law;
        make_law(a.law, a.d, law);
        const auto n = static_cast<std::size_t>(a.d);
        const double h = a.L / (16.0 * std::sqrt(static_cast<double>(a.d)));
        std::vector<double> gamma = a.gamma, zeta = a.zeta;
        if (gamma.empty()) {
            gamma.assign(n, 0.0);
            gamma[0] = -2.0 * a.L / 4.0;
        }
        if (zeta.empty()) {
            zeta.assign(n, 0.0);
            zeta[0] = h;
        }
        if (gamma.size() != n || zeta.size() != n) throw CliError{SP_INVALID_ARGUMENT, "--gamma/--zeta need d values"};
        check(sp_mc_two_ball(a.d, a.L, a.lambda, gamma.data(), zeta.data(), law.handle, a.trials, c.seed, c.workers, &e));
        double cd = 0;
        check(sp_c_d(a.d, &cd));
        j["L"] = a.L;
        j["lambda"] = a.lambda;
        j["gamma"] = gamma;
        j["zeta"] = zeta;
        j["lower_bound"] = a.lambda * cd * std::pow(a.L, 2 - a.d);
    } else {
        throw CliError{SP_INVALID_ARGUMENT, "unknown measurement '" + a.what + "' (stick-hit|cap-hit|two-ball)"};
    }
    j["estimate"] = e.estimate;
    j["stderr"] = e.stderr_;
    j["hits"] = e.hits;
    if (!std::isnan(exact)) {
        j["exact"] = exact;
        j["z"] = e.stderr_ > 0 ? (e.estimate - exact) / e.stderr_ : 0.0;
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, const Common& c) {
    int passed = 0;
    sp_string* js = nullptr;
    check(sp_verify(suite.c_str(), c.seed, c.workers, &passed, &js));
    std::string text = take(js);
    auto j = json::parse(text);
    for (const auto& check_row : j["checks"]) {
        std::cerr << (check_row["passed"].get<bool>() ? "PASS " : "FAIL ") << check_row["suite"].get<std::string>()
                  << "/" << check_row["check"].get<std::string>() << "  " << check_row["detail"].get<std::string>()
                  << "\n";
    }
    std::cout << text << "\n";
    return passed ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuum stick percolation: thresholds, bounds, branching and oriented percolation"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--config", "JSON file of options; command-line flags take precedence");

    Common common;

    int b_d = 2;
    double b_L = 100, b_delta = 1;
    std::string b_law = "uniform";
    auto* bounds = app.add_subcommand("bounds", "Theorem bounds on the critical intensity");
    bounds->add_option("--d", b_d)->capture_default_str();
    bounds->add_option("--L", b_L)->required();
    bounds->add_option("--law", b_law)->capture_default_str();
    bounds->add_option("--delta", b_delta)->capture_default_str();
    add_common(bounds, common);

    ThresholdArgs ta;
    auto* threshold = app.add_subcommand("threshold", "Estimate the critical intensity at one L");
    threshold->add_option("--d", ta.d)->capture_default_str();
    threshold->add_option("--L", ta.L)->capture_default_str();
    threshold->add_option("--law", ta.law)->capture_default_str();
    threshold->add_option("--s-factor", ta.s_factor, "Window side / L (>= 8)")->capture_default_str();
    threshold->add_option("--replicates", ta.replicates)->capture_default_str();
    threshold->add_option("--axis", ta.axis, "Crossing axis, -1 for the default")->capture_default_str();
    threshold->add_option("--max-probes", ta.max_probes)->capture_default_str();
    threshold->add_option("--csv", ta.csv, "Write the probe trace CSV here");
    threshold->add_option("--format", ta.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    add_common(threshold, common);

    ScalingArgs sa;
    auto* scaling = app.add_subcommand("scaling", "Fit the log-log slope of the threshold against L");
    scaling->add_option("--d", sa.d)->capture_default_str();
    scaling->add_option("--law", sa.law)->capture_default_str();
    scaling->add_option("--L", sa.lengths)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    scaling->add_option("--inject", sa.inject, "Fit these lambdas instead of estimating")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    scaling->add_option("--s-factor", sa.s_factor)->capture_default_str();
    scaling->add_option("--replicates", sa.replicates)->capture_default_str();
    scaling->add_option("--axis", sa.axis)->capture_default_str();
    scaling->add_option("--expect", sa.expect, "MIN MAX; exit 1 when the slope falls outside")
        ->expected(2)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    scaling->add_option("--csv", sa.csv, "Write all probe traces here");
    add_common(scaling, common);

    BranchingArgs ba;
    auto* branching = app.add_subcommand("branching", "Offspring measure and dominating Galton-Watson runs");
    branching->add_option("--d", ba.d)->capture_default_str();
    branching->add_option("--L", ba.L)->capture_default_str();
    branching->add_option("--law", ba.law)->capture_default_str();
    branching->add_option("--lambda", ba.lambda, "Intensity; default is lambda-factor x lower bound");
    branching->add_option("--lambda-factor", ba.lambda_factor)->capture_default_str();
    branching->add_option("--trials", ba.trials)->capture_default_str();
    branching->add_option("--runs", ba.runs)->capture_default_str();
    branching->add_option("--max-generations", ba.max_generations)->capture_default_str();
    branching->add_option("--population-cap", ba.population_cap)->capture_default_str();
    branching->add_option("--explore", ba.explore_generations, "Also explore one component to this depth");
    branching->add_option("--csv", ba.csv, "Write offspring samples here");
    add_common(branching, common);

    OrientedArgs oa;
    auto* oriented = app.add_subcommand("oriented", "Oriented percolation survival on the half-plane lattice");
    oriented->add_option("--alpha", oa.alphas)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    oriented->add_option("--variant", oa.variant)->capture_default_str();
    oriented->add_option("--n-max", oa.n_max)->capture_default_str();
    oriented->add_option("--trials", oa.trials)->capture_default_str();
    oriented->add_flag("--monotonicity", oa.monotonicity, "Check coupled monotonicity across the alphas");
    oriented->add_option("--csv", oa.csv);
    add_common(oriented, common);

    MeasureArgs ma;
    auto* measure = app.add_subcommand("measure-mc", "Monte Carlo checks of the closed-form measures");
    measure->add_option("--what", ma.what)->check(CLI::IsMember({"stick-hit", "cap-hit", "two-ball"}))->capture_default_str();
    measure->add_option("--d", ma.d)->capture_default_str();
    measure->add_option("--L", ma.L)->capture_default_str();
    measure->add_option("--rho", ma.rho)->capture_default_str();
    measure->add_option("--r", ma.r)->capture_default_str();
    measure->add_option("--lambda", ma.lambda)->capture_default_str();
    measure->add_option("--law", ma.law)->capture_default_str();
    measure->add_option("--trials", ma.trials)->capture_default_str();
    measure->add_option("--gamma", ma.gamma)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    measure->add_option("--zeta", ma.zeta)->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    add_common(measure, common);

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run the property suites");
    verify->add_option("--suite", suite)
        ->check(CLI::IsMember({"geometry", "measures", "sampling", "percolation", "branching", "oriented", "all"}))
        ->capture_default_str();
    add_common(verify, common);

    try {
        std::vector<std::string> args = merge_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
        if (*bounds) return cmd_bounds(b_d, b_L, b_law, b_delta);
        if (*threshold) return cmd_threshold(ta, common);
        if (*scaling) return cmd_scaling(sa, common);
        if (*branching) return cmd_branching(ba, common);
        if (*oriented) return cmd_oriented(oa, common);
        if (*measure) return cmd_measure(ma, common);
        if (*verify) return cmd_verify(suite, common);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    } catch (const CliError& e) {
        std::cerr << "error (" << sp_status_name(e.status) << "): " << e.message << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
