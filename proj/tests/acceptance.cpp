// Acceptance suite. Prints one PASS/FAIL line per criterion; exits nonzero
// if any selected criterion fails. `--criterion N` runs a single one.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "popcheck/popcheck.hpp"
#include "popcheck/report_json.hpp"

using namespace popcheck;
using convexity::HSpec;
using report::Json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) { return report::format_double(v); }

struct CliRun {
    int code = -1;
    Json json;
    double seconds = 0.0;
};

CliRun cli(const std::string& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string cmd = std::string(POPCHECK_CLI_PATH) + " " + args;
    CliRun r;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe) {
        std::array<char, 4096> buf{};
        while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
        const int status = pclose(pipe);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    r.seconds = seconds_since(t0);
    r.json = Json::parse(out, nullptr, false);
    return r;
}

// Minimum residual over `samples` seeded triples in the cube [lo, hi]^3.
double sweep_min(const search::Objective& obj, double lo, double hi, std::size_t samples, std::uint64_t seed) {
    return search::property_sweep(obj, search::SearchRegion::cube(lo, hi).box, samples, seed).min_residual;
}

Outcome criterion_1() {
    const auto r = cli("eval --ineq al-gap --fn gamma --triple 1.40 1.46 1.47");
    if (r.json.is_discarded()) return {false, "cli produced no JSON (exit " + std::to_string(r.code) + ")"};
    const double first = r.json["lhs"].get<double>();
    const double second = r.json["rhs"].get<double>();
    const double residual = r.json["residual"].get<double>();
    const bool pass = std::abs(first - 65.92090117) <= 1e-4 && std::abs(second - 108.64) <= 1e-2 &&
                      residual < 0.0 && r.seconds < 1.0;
    return {pass, "first=" + num(first) + " second=" + num(second) + " residual=" + num(residual) +
                      " (expected 65.92090117, 108.64, < 0) " + num(r.seconds) + "s"};
}

Outcome criterion_2() {
    const auto r = cli("eval --ineq al-gap --fn gamma --triple 0.30 0.34 0.35");
    if (r.json.is_discarded()) return {false, "cli produced no JSON (exit " + std::to_string(r.code) + ")"};
    const double first = r.json["lhs"].get<double>();
    const double second = r.json["rhs"].get<double>();
    const double residual = r.json["residual"].get<double>();
    const bool pass = std::abs(first - 2.711369453) <= 1e-5 && std::abs(second - 2.709270) <= 1e-4 &&
                      residual > 0.0 && r.seconds < 1.0;
    return {pass, "first=" + num(first) + " second=" + num(second) + " residual=" + num(residual) + " " +
                      num(r.seconds) + "s"};
}

Outcome criterion_3() {
    const auto neg = cli("search --ineq al-gap --fn gamma --region 1.35 1.5");
    const auto pos = cli("search --ineq al-gap --fn gamma --region 0.25 0.4");
    if (neg.json.is_discarded() || pos.json.is_discarded()) return {false, "cli produced no JSON"};
    const std::string neg_status = neg.json["certificate"]["status"].get<std::string>();
    const std::string pos_status = pos.json["certificate"]["status"].get<std::string>();
    const double neg_res = neg.json["residual"].get<double>();
    const bool neg_ok = neg_status == "violation_certified" && neg_res <= -42.7 && neg.seconds < 10.0;
    const bool pos_ok = pos_status == "no_violation_found" && pos.seconds < 10.0;
    return {neg_ok && pos_ok, "[1.35,1.5]^3: " + neg_status + " residual=" + num(neg_res) + " " +
                                  num(neg.seconds) + "s (needs certified, <= -42.7); [0.25,0.4]^3: " +
                                  pos_status + " " + num(pos.seconds) + "s"};
}

Outcome criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    const std::pair<const char*, FunctionSpec> fns[] = {{"power:2", FunctionSpec::power(2)},
                                                        {"power:4", FunctionSpec::power(4)},
                                                        {"exp", FunctionSpec::exp()},
                                                        {"abs", FunctionSpec::abs()}};
    std::uint64_t seed = 101;
    for (const auto& [name, f] : fns) {
        const auto s = search::property_sweep(
            [&f](const Triple& t) { return ineq::popoviciu_residual(f, t); },
            search::SearchRegion::cube(-5, 5).box, 100000, seed++);
        pass = pass && s.min_residual >= -1e-10;
        detail += std::string(name) + " min=" + num(s.min_residual) + "; ";
    }
    SeededSampler rng(105);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Triple t = rng.triple(-5, 5);
        worst = std::max(worst, std::abs(ineq::popoviciu_residual(FunctionSpec::power(2), t).residual -
                                         t.spread() / 18.0));
    }
    pass = pass && worst <= 1e-10;
    const double secs = seconds_since(t0);
    pass = pass && secs < 5.0;
    return {pass, detail + "max |D - S/18|=" + num(worst) + "; " + num(secs) + "s"};
}

Outcome criterion_5() {
    bool pass = true;
    std::string detail;
    const std::tuple<const char*, FunctionSpec, double, double> cases[] = {
        {"exp on [0,2]", FunctionSpec::exp(), 0.0, 2.0}, {"power:3 on [-1,1]", FunctionSpec::power(3), -1.0, 1.0}};
    std::uint64_t seed = 201;
    for (const auto& [name, f, lo, hi] : cases) {
        const auto bounds = specfun::curvature_bounds(f, Interval::closed(lo, hi), 201);
        SeededSampler rng(seed++);
        double min_upper = kInf;
        double min_lower = kInf;
        for (int i = 0; i < 10000; ++i) {
            const auto g = ineq::semiconvex_sandwich(f, rng.triple(lo, hi), bounds);
            min_upper = std::min(min_upper, g.upper_gap);
            min_lower = std::min(min_lower, g.lower_gap);
        }
        pass = pass && min_upper >= -1e-6 && min_lower >= -1e-6;
        detail += std::string(name) + " m=" + num(bounds.m) + " M=" + num(bounds.M) + " min gaps " +
                  num(min_lower) + ", " + num(min_upper) + "; ";
    }
    return {pass, detail};
}

Outcome criterion_6() {
    const double m = sweep_min([](const Triple& t) { return ineq::agm_log_corollary(t.x, t.y, t.z); }, 1, 50,
                               100000, 301);
    return {m >= -1e-10, "min residual=" + num(m)};
}

Outcome criterion_7() {
    const auto gam = FunctionSpec::gamma();
    const double m1 = sweep_min(
        [&](const Triple& t) { return ineq::qa_popoviciu(gam, Generator::identity(), Generator::log(), t); }, 1.1,
        2.0, 10000, 401);
    const auto hyp = FunctionSpec::hyp2f1({0.5, 0.5, 0.75});
    const double m2 = sweep_min(
        [&](const Triple& t) { return ineq::qa_popoviciu(hyp, Generator::identity(), Generator::power(-1), t); },
        0.05, 0.95, 10000, 402);
    SeededSampler rng(403);
    double worst = 0.0;
    const auto A = Generator::identity();
    for (int i = 0; i < 10000; ++i) {
        const Triple t = rng.triple(-2, 2);
        for (const auto& f : {FunctionSpec::exp(), FunctionSpec::power(2)}) {
            const double classic = ineq::popoviciu_residual(f, t).residual;
            worst = std::max(worst, std::abs(ineq::qa_popoviciu(f, A, A, t).residual - classic / 2.0));
        }
    }
    return {m1 >= -1e-10 && m2 >= -1e-10 && worst <= 1e-12,
            "gamma (A,G) min=" + num(m1) + "; 2F1 (A,H) min=" + num(m2) + "; reduction max err=" + num(worst)};
}

Outcome criterion_8() {
    const double mh = sweep_min(
        [](const Triple& t) { return ineq::hypergeometric_popoviciu({0.5, 0.5, 0.75}, t); }, 0.05, 0.95, 10000, 501);
    const double m2 = sweep_min([](const Triple& t) { return ineq::volume_popoviciu(2.0, t); }, 0.25, 8.0, 10000, 502);
    const double m3 = sweep_min([](const Triple& t) { return ineq::volume_popoviciu(3.0, t); }, 0.25, 8.0, 10000, 503);
    return {mh >= -1e-9 && m2 >= -1e-9 && m3 >= -1e-9,
            "hyp min=" + num(mh) + "; vol alpha=2 min=" + num(m2) + "; alpha=3 min=" + num(m3)};
}

Outcome criterion_9() {
    bool pass = true;
    std::string detail;
    std::uint64_t seed = 601;
    for (double s : {0.25, 0.5, 0.75}) {
        const auto f = FunctionSpec::power(s);
        const auto h = HSpec::power(s);
        const double m =
            sweep_min([&](const Triple& t) { return ineq::hpop_residual(f, h, t); }, 0.0, 10.0, 10000, seed++);
        pass = pass && m >= -1e-10;
        detail += "s=" + num(s) + " min=" + num(m) + "; ";
    }
    SeededSampler rng(604);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Triple t = rng.triple(0, 2);
        const double classic = ineq::popoviciu_residual(FunctionSpec::exp(), t).residual;
        worst = std::max(worst,
                         std::abs(ineq::hpop_residual(FunctionSpec::exp(), HSpec::identity(), t).residual - 1.5 * classic));
    }
    pass = pass && worst <= 1e-12;
    return {pass, detail + "identity h vs 3/2 classic max err=" + num(worst)};
}

Outcome criterion_10() {
    const auto f = FunctionSpec::power(0.5);
    const auto h = HSpec::power(0.5);
    const double m = sweep_min(
        [&](const Triple& t) { return ineq::h_ratio_popoviciu(f, h, t, ineq::HRatioMode::convex_i); }, 0.0, 10.0,
        10000, 701);
    const double k = ineq::h_ratio_coefficient(h, ineq::HRatioMode::convex_i);
    const double want = (1.0 - std::sqrt(1.0 / 3.0)) / (2.0 * std::sqrt(0.5));
    return {m >= -1e-10 && std::abs(k - want) <= 1e-12,
            "min=" + num(m) + "; coefficient=" + num(k) + " vs " + num(want) + "; h(1/3)=" + num(h(1.0 / 3.0))};
}

Outcome criterion_11() {
    const double g5 = specfun::gamma(5.0);
    const double gh = specfun::gamma(0.5);
    double worst_f = 0.0;
    for (int i = 0; i <= 1800; ++i) {
        const double x = -0.9 + 0.001 * i;
        worst_f = std::max(worst_f, std::abs(specfun::hyp2f1({1, 1, 1}, x) - 1.0 / (1.0 - x)));
    }
    const double v = specfun::lp_ball_volume(2, 2);
    const bool pass = std::abs(g5 - 24.0) <= 1e-10 && std::abs(gh - std::sqrt(std::numbers::pi)) <= 1e-10 &&
                      worst_f <= 1e-10 && std::abs(v - std::numbers::pi) <= 1e-9;
    return {pass, "Gamma(5)-24=" + num(g5 - 24.0) + "; Gamma(1/2)-sqrt(pi)=" + num(gh - std::sqrt(std::numbers::pi)) +
                      "; max 2F1 err=" + num(worst_f) + "; V(2,2)-pi=" + num(v - std::numbers::pi)};
}

Outcome criterion_12() {
    SeededSampler rng(801);
    const double orders[] = {-kInf, -10, -2, -1, -0.5, 0, 0.5, 1, 2, 10, kInf};
    std::size_t mono_fail = 0;
    std::size_t chain_fail = 0;
    std::size_t sym_fail = 0;
    for (int i = 0; i < 10000; ++i) {
        const PointSet pts{rng.uniform(0.01, 100), rng.uniform(0.01, 100), rng.uniform(0.01, 100)};
        double prev = -kInf;
        for (double p : orders) {
            const double m = means::power_mean(p, pts);
            if (m < prev - 1e-12 * std::max(1.0, prev)) ++mono_fail;
            prev = m;
        }
        const double a = rng.uniform(0.01, 100);
        const double b = rng.uniform(0.01, 100);
        const double slack = 1e-12 * std::max({1.0, a, b});
        const double g = std::sqrt(a * b);
        const double l = means::log_mean2(a, b);
        const double id = means::identric_mean(a, b);
        if (g > l + slack || l > id + slack || id > 0.5 * (a + b) + slack) ++chain_fail;
        const double x = pts.values[0];
        const double y = pts.values[1];
        const double z = pts.values[2];
        const double ref = means::log_mean3(x, y, z);
        for (const auto& perm : {std::array{x, z, y}, std::array{y, x, z}, std::array{y, z, x}, std::array{z, x, y},
                                 std::array{z, y, x}}) {
            if (std::abs(means::log_mean3(perm[0], perm[1], perm[2]) - ref) > 1e-12 * std::max(1.0, ref)) ++sym_fail;
        }
    }
    return {mono_fail == 0 && chain_fail == 0 && sym_fail == 0,
            "monotonicity failures=" + std::to_string(mono_fail) + "; G<=L<=I<=A failures=" +
                std::to_string(chain_fail) + "; L3 symmetry failures=" + std::to_string(sym_fail)};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "al-gap counterexample, negative side", criterion_1},
        {2, "al-gap counterexample, positive side", criterion_2},
        {3, "al-gap search reproduction", criterion_3},
        {4, "Popoviciu property suite", criterion_4},
        {5, "semiconvex sandwich", criterion_5},
        {6, "AGM-log corollary", criterion_6},
        {7, "quasi-arithmetic Popoviciu", criterion_7},
        {8, "hypergeometric and volume corollaries", criterion_8},
        {9, "h-convex Popoviciu", criterion_9},
        {10, "h-ratio Popoviciu (i)", criterion_10},
        {11, "special-function accuracy", criterion_11},
        {12, "mean-algebra properties", criterion_12},
    };
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::stoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--criterion N]\n";
            return 1;
        }
    }
    int failures = 0;
    int ran = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << ", "
                  << num(seconds_since(t0)) << "s): " << o.detail << "\n";
    }
    if (ran == 0) {
        std::cerr << "no criterion " << only << "\n";
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
