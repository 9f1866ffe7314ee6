#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(STICKPERC_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

std::string tmp(const std::string& name) { return std::string(STICKPERC_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const double kSqrtPi = std::sqrt(std::numbers::pi);

}  // namespace

TEST_CASE("bounds command") {
    auto r = run("bounds --d 2 --L 100 --law rigid");
    REQUIRE(r.code == 0);
    auto j = parse(r);
    CHECK(j.at("lower").get<double>() == doctest::Approx(7.0523e-4).epsilon(1e-4));
    CHECK(j.at("upper").get<double>() == doctest::Approx(0.141796).epsilon(1e-5));
    CHECK(j.at("schema_version") == 1);
    CHECK(run("bounds --d 2 --L 100 --law rigid --seed 4 --workers 2").out == r.out);
    CHECK(run("bounds --d 2 --L 3 --law rigid").code == 2);
    auto u = run("bounds --d 2 --L 100 --law uniform --delta 1");
    REQUIRE(u.code == 0);
    CHECK(parse(u).at("lower").get<double>() == doctest::Approx(1.25e-5));
    CHECK(parse(u).at("upper").is_null());
    CHECK(run("bounds --d 2 --L 100 --law sideways").code == 2);
    CHECK(run("bounds --d 2").code == 2);
    CHECK(run("frobnicate").code == 2);
}

TEST_CASE("threshold command") {
    auto r = run("threshold --d 2 --L 16 --law rigid --replicates 60 --seed 5");
    REQUIRE(r.code == 0);
    auto j = parse(r);
    double lam = j.at("lambda_hat").get<double>();
    CHECK(lam > 1 / (8 * kSqrtPi) / 16);
    CHECK(lam < 8 * kSqrtPi / 16);
    CHECK(j.at("bracket_check").at("inside") == true);

    std::string csv = tmp("cli_trace.csv");
    std::remove(csv.c_str());
    auto u = run("threshold --d 2 --L 16 --law uniform --replicates 60 --seed 5 --csv " + csv);
    REQUIRE(u.code == 0);
    double lu = parse(u).at("lambda_hat").get<double>();
    CHECK(lu > 0.125 / 256);
    CHECK(lu < 3.95e7 / 256);
    CHECK(slurp(csv).rfind("# stickperc probe-trace v1\nL,lambda,crossed,replicate,seed\n", 0) == 0);

    CHECK(run("threshold --d 2 --L 16 --law uniform --replicates 60 --seed 5 --workers 3").out == u.out);
    CHECK(run("threshold --d 2 --L 16 --law uniform --replicates 60 --seed 6").out != u.out);
    auto f = run("threshold --d 2 --L 16 --law uniform --replicates 60 --seed 5 --format csv");
    CHECK(f.out == slurp(csv));
    CHECK(run("threshold --d 2 --L 16 --s-factor 4").code == 2);
}

TEST_CASE("scaling command") {
    auto r = run("scaling --d 2 --L 8,16,32,64 --inject 0.015625,0.00390625,0.0009765625,0.000244140625");
    REQUIRE(r.code == 0);
    auto j = parse(r);
    CHECK(j.at("slope").get<double>() == doctest::Approx(-2).epsilon(1e-12));
    CHECK(j.at("injected") == true);
    CHECK(run("scaling --d 2 --L 8,16,32 --inject 0.015625,0.00390625,0.0009765625 --expect -2.1 -1.9").code == 0);
    CHECK(run("scaling --d 2 --L 8,16,32 --inject 0.015625,0.00390625,0.0009765625 --expect -1.5 -1.2").code == 1);
    CHECK(run("scaling --d 2 --L 8,16 --inject 0.1,0.2").code == 2);
    CHECK(run("scaling --d 2 --L 8,16,32 --inject 0.1,0.2").code == 2);

    auto e = run("scaling --d 2 --law rigid --L 8,12,16 --replicates 40 --seed 2");
    REQUIRE(e.code == 0);
    auto je = parse(e);
    CHECK(je.at("points").size() == 3);
    CHECK(je.at("slope").get<double>() < 0);
}

TEST_CASE("branching command") {
    auto r = run("branching --d 2 --L 10 --law rigid --lambda 0.1 --trials 4000 --runs 50 --seed 3");
    REQUIRE(r.code == 0);
    auto j = parse(r);
    double mean = j.at("offspring_mean").get<double>(), se = j.at("offspring_stderr").get<double>();
    CHECK(std::abs(mean - 0.1 * (80 + 4 * std::numbers::pi)) <= 3 * se);
    CHECK(j.at("rigid_exact_mean").get<double>() == doctest::Approx(9.257).epsilon(1e-3));
    auto sub = run("branching --d 2 --L 32 --law uniform --trials 2000 --runs 300 --explore 5 --seed 3");
    REQUIRE(sub.code == 0);
    auto js = parse(sub);
    CHECK(js.at("gw").at("extinct") == 300);
    CHECK(js.contains("exploration"));
    std::string csv = tmp("cli_offspring.csv");
    CHECK(run("branching --d 2 --L 10 --trials 100 --runs 5 --csv " + csv).code == 0);
    CHECK(slurp(csv).find("trial,offspring") != std::string::npos);
}

TEST_CASE("oriented command") {
    auto r = run("oriented --alpha 0.5,0.81 --n-max 200 --trials 100 --monotonicity --seed 2");
    REQUIRE(r.code == 0);
    auto j = parse(r);
    CHECK(j.at("results").size() == 2);
    CHECK(j.at("coupled_monotone") == true);
    CHECK(run("oriented --alpha 0.5 --variant hex").code == 2);
    CHECK(run("oriented --alpha 1.5").code == 2);
}

TEST_CASE("measure-mc command") {
    auto r = run("measure-mc --what stick-hit --d 2 --L 10 --rho 2 --trials 200000 --seed 1");
    REQUIRE(r.code == 0);
    auto j = parse(r);
    CHECK(std::abs(j.at("z").get<double>()) <= 3);
    auto c = run("measure-mc --what cap-hit --d 3 --rho 1 --r 2 --trials 100000 --seed 1");
    REQUIRE(c.code == 0);
    CHECK(parse(c).at("exact").get<double>() == doctest::Approx(1 - std::sqrt(3.0) / 2));
    CHECK(run("measure-mc --what two-ball --d 2 --L 256 --trials 100").code == 2);
    CHECK(run("measure-mc --what stick-hit --trials 0").code == 2);
}

TEST_CASE("verify command") {
    auto r = run("verify --suite oriented --seed 1");
    CHECK(r.code == 0);
    CHECK(parse(r).at("passed") == true);
    CHECK(run("verify --suite oriented --seed 1 --workers 2").out == r.out);
    CHECK(run("verify --suite astrology").code == 2);
}

TEST_CASE("config files") {
    std::string path = tmp("cli_config.json");
    {
        std::ofstream f(path);
        f << R"({"command": "bounds", "d": 2, "L": 100, "law": "rigid"})";
    }
    auto a = run("--config " + path);
    REQUIRE(a.code == 0);
    CHECK(a.out == run("bounds --d 2 --L 100 --law rigid").out);
    auto b = run("--config " + path + " --L 200");
    REQUIRE(b.code == 0);
    CHECK(parse(b).at("lower").get<double>() == doctest::Approx(1 / (8 * kSqrtPi) / 200));
    CHECK(run("--config " + tmp("missing.json")).code == 2);
}
