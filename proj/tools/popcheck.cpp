// popcheck: evaluate, sweep, search and classify Popoviciu-type inequalities.
//
// Exit codes: 0 inequality holds / no violation, 1 usage or domain error,
// 2 violation (eval verdict violated, sweep with violations, certified
// counterexample from search).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "popcheck/popcheck.hpp"
#include "popcheck/report_json.hpp"

namespace {

using popcheck::FunctionSpec;
using popcheck::Generator;
using popcheck::Interval;
using popcheck::PointSet;
using popcheck::Triple;
using popcheck::convexity::HSpec;
using popcheck::report::Json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

struct Options {
    std::string ineq;
    std::string fn = "exp";
    std::string gfn;
    std::string phi = "identity";
    std::string psi = "identity";
    std::string h;
    std::string mean;
    std::string mode = "convex_super";
    std::vector<double> triple;
    std::vector<double> points;
    std::vector<double> weights;
    std::vector<double> region;
    std::vector<double> interval;
    std::size_t grid = 0;
    std::size_t samples = 10000;
    std::size_t starts = 5;
    std::size_t random_restarts = 0;
    std::size_t max_iter = 600;
    std::uint64_t seed = 42;
    double tol = popcheck::ineq::kDefaultTolerance;
    double strong_c = 1.0;
    std::string out;
    std::string format = "json";
    unsigned threads = 0;
};

class Clock {
public:
    [[nodiscard]] double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::optional<Interval> interval_option(const Options& o) {
    if (o.interval.empty()) return std::nullopt;
    if (o.interval.size() != 2 || !(o.interval[0] <= o.interval[1])) {
        throw popcheck::RegistryError("--interval expects two numbers lo <= hi");
    }
    return Interval::closed(o.interval[0], o.interval[1]);
}

FunctionSpec function_option(const std::string& spec, const Options& o) {
    FunctionSpec f = FunctionSpec::parse(spec);
    if (auto iv = interval_option(o)) f = f.with_domain(*iv);
    return f;
}

std::array<Interval, 3> region_box(const Options& o, const FunctionSpec& f) {
    if (o.region.empty()) {
        if (!f.domain().bounded()) {
            throw popcheck::RegistryError("--region is required: the domain of " + f.name() +
                                          " is unbounded");
        }
        const Interval d = popcheck::convexity::grid_interval(f.domain(), 1000);
        return {d, d, d};
    }
    if (o.region.size() == 2) {
        const auto iv = Interval::closed(o.region[0], o.region[1]);
        return {iv, iv, iv};
    }
    if (o.region.size() == 6) {
        return {Interval::closed(o.region[0], o.region[1]), Interval::closed(o.region[2], o.region[3]),
                Interval::closed(o.region[4], o.region[5])};
    }
    throw popcheck::RegistryError("--region expects lo hi (cube) or lo hi lo hi lo hi");
}

popcheck::ineq::EvaluationTarget build_target(const Options& o) {
    if (o.ineq.empty()) throw popcheck::RegistryError("--ineq is required");
    if (!popcheck::ineq::is_known_inequality(o.ineq)) {
        throw popcheck::RegistryError("unknown inequality '" + o.ineq + "'");
    }
    popcheck::ineq::EvaluationTarget t;
    t.f = function_option(o.fn, o);
    if (!o.gfn.empty()) t.g = function_option(o.gfn, o);
    t.phi = Generator::parse(o.phi);
    t.psi = Generator::parse(o.psi);
    if (!o.h.empty()) t.h = HSpec::parse(o.h);
    t.strong_c = o.strong_c;
    if (o.grid > 0) t.curvature_grid = o.grid;
    if (o.mode == "convex_super") {
        t.jensen_mode = popcheck::ineq::HJensenMode::convex_super;
    } else if (o.mode == "concave_sub") {
        t.jensen_mode = popcheck::ineq::HJensenMode::concave_sub;
    } else {
        throw popcheck::RegistryError("--mode must be convex_super or concave_sub");
    }
    return t;
}

Json inputs_json(const Options& o, const std::string& command) {
    Json in;
    if (!o.fn.empty() && o.ineq != "agm-log") in["fn"] = o.fn;
    if (!o.gfn.empty()) in["g"] = o.gfn;
    if (o.ineq == "qa-pop" || command == "classify") {
        in["phi"] = o.phi;
        in["psi"] = o.psi;
    }
    if (!o.h.empty()) in["h"] = o.h;
    if (!o.triple.empty()) in["triple"] = o.triple;
    if (!o.points.empty()) in["points"] = o.points;
    if (!o.weights.empty()) in["weights"] = o.weights;
    if (!o.region.empty()) in["region"] = o.region;
    if (!o.interval.empty()) in["interval"] = o.interval;
    if (o.grid > 0) in["grid"] = o.grid;
    if (command == "sweep") in["samples"] = o.samples;
    if (command == "sweep" || command == "search") in["seed"] = o.seed;
    if (o.ineq == "strong") in["C"] = o.strong_c;
    if (o.ineq == "h-jensen") in["mode"] = o.mode;
    in["tol"] = o.tol;
    return in;
}

void emit(const Options& o, const std::vector<Json>& rows) {
    std::string text;
    if (o.format == "csv") {
        text = popcheck::report::csv_header() + "\n";
        for (const auto& r : rows) text += popcheck::report::csv_row(r) + "\n";
    } else {
        text = popcheck::report::to_text(rows.front()) + "\n";
    }
    std::cout << text;
    if (!o.out.empty()) {
        std::ofstream file(o.out);
        if (!file) throw std::runtime_error("cannot write " + o.out);
        file << text;
    }
}

int cmd_eval(const Options& o) {
    const Clock clock;
    const auto target = build_target(o);
    popcheck::ineq::ResidualReport r;
    if (!o.points.empty() && o.ineq == "h-jensen") {
        const PointSet pts = o.weights.empty() ? PointSet(o.points) : PointSet(o.points, o.weights);
        const auto& h = target.h ? *target.h : throw popcheck::RegistryError("h-jensen needs --h");
        r = popcheck::ineq::h_jensen(target.f, h, pts, target.jensen_mode);
    } else {
        if (o.triple.size() != 3) throw popcheck::RegistryError("--triple expects exactly three numbers");
        r = popcheck::ineq::evaluate(o.ineq, target, {o.triple[0], o.triple[1], o.triple[2]});
    }
    r.rescore(o.tol);
    Json j = popcheck::report::base("eval", o.ineq, inputs_json(o, "eval"));
    popcheck::report::fill_residual(j, r);
    j["timing_ms"] = clock.elapsed_ms();
    emit(o, {j});
    return r.holds() ? kExitOk : kExitViolation;
}

int cmd_sweep(const Options& o) {
    const Clock clock;
    auto target = build_target(o);
    const auto box = region_box(o, target.f);
    if (o.ineq == "semiconvex" && !target.bounds) {
        const double lo = std::min({box[0].lo, box[1].lo, box[2].lo});
        const double hi = std::max({box[0].hi, box[1].hi, box[2].hi});
        target.bounds = popcheck::specfun::curvature_bounds(target.f, Interval::closed(lo, hi),
                                                            target.curvature_grid);
    }
    const popcheck::search::Objective objective = [&](const Triple& t) {
        return popcheck::ineq::evaluate(o.ineq, target, t);
    };
    std::vector<popcheck::ineq::ResidualReport> all;
    const auto summary = popcheck::search::property_sweep(objective, box, o.samples, o.seed, o.tol,
                                                          o.threads, o.format == "csv" ? &all : nullptr);
    const Json inputs = inputs_json(o, "sweep");
    std::vector<Json> rows;
    if (o.format == "csv") {
        for (const auto& r : all) {
            Json j = popcheck::report::base("sweep", o.ineq, inputs);
            popcheck::report::fill_residual(j, r);
            rows.push_back(std::move(j));
        }
    } else {
        Json j = popcheck::report::base("sweep", o.ineq, inputs);
        popcheck::report::fill_residual(j, summary.worst);
        j["verdict"] = summary.violations == 0 ? "holds" : "violated";
        j["summary"] = {{"samples", summary.samples},
                        {"violations", summary.violations},
                        {"min_residual", summary.min_residual},
                        {"mean_residual", summary.mean_residual}};
        j["timing_ms"] = clock.elapsed_ms();
        rows.push_back(std::move(j));
    }
    emit(o, rows);
    return summary.violations == 0 ? kExitOk : kExitViolation;
}

int cmd_search(const Options& o) {
    const Clock clock;
    const auto target = build_target(o);
    if (o.region.empty()) throw popcheck::RegistryError("search needs --region");
    popcheck::search::SearchRegion region;
    region.box = region_box(o, target.f);
    const std::size_t res = o.grid > 0 ? o.grid : 15;
    region.resolution = {res, res, res};
    region.seed = o.seed;
    popcheck::search::SearchConfig config;
    config.starts = o.starts;
    config.random_restarts = o.random_restarts;
    config.max_iter = o.max_iter;
    config.base_tolerance = o.tol;
    config.threads = o.threads;
    const popcheck::search::Objective objective = [&](const Triple& t) {
        return popcheck::ineq::evaluate(o.ineq, target, t);
    };
    const auto cert = popcheck::search::find_counterexample(objective, region, config);
    Json j = popcheck::report::base("search", o.ineq, inputs_json(o, "search"));
    popcheck::report::fill_certificate(j, cert);
    j["timing_ms"] = clock.elapsed_ms();
    emit(o, {j});
    return cert.status == popcheck::search::CertificateStatus::violation_certified ? kExitViolation
                                                                                  : kExitOk;
}

int cmd_classify(const Options& o) {
    const Clock clock;
    const FunctionSpec f = function_option(o.fn, o);
    Json j = popcheck::report::base("classify", "", inputs_json(o, "classify"));
    if (!o.h.empty()) {
        const HSpec h = HSpec::parse(o.h);
        const std::size_t grid = o.grid > 0 ? o.grid : 41;
        const auto d = popcheck::convexity::h_convexity_defect(f, h, grid);
        j["inequality_id"] = "h-convexity";
        j["lhs"] = d.value;
        j["rhs"] = 0.0;
        j["residual"] = d.value;
        j["verdict"] = d.holds ? "h-convex" : "not h-convex";
        j["tolerance"] = d.tolerance;
        j["witness"] = Json::array({d.x, d.y, d.lambda});
        j["classification"] = {{"kind", "h-convexity"}, {"h", h.name()}, {"grid_n", d.grid_n}};
    } else {
        const Generator phi = Generator::parse(o.phi);
        const Generator psi = Generator::parse(o.psi);
        const std::size_t grid = o.grid > 0 ? o.grid : 101;
        const auto r = popcheck::convexity::mn_convexity_check(f, phi, psi, grid);
        j["inequality_id"] = "mn-convexity";
        j["lhs"] = r.transform_defect.min_defect;
        j["rhs"] = 0.0;
        j["residual"] = r.transform_defect.min_defect;
        j["verdict"] = popcheck::convexity::to_string(r.verdict);
        j["tolerance"] = r.tolerance;
        j["witness"] = Json::array({r.transform_defect.min_u, r.transform_defect.min_v});
        j["classification"] = {
            {"kind", "mn-convexity"},
            {"transform_verdict", popcheck::convexity::to_string(r.transform_verdict)},
            {"affine", r.affine},
            {"psi_increasing", r.psi_increasing},
            {"transform_min_defect", r.transform_defect.min_defect},
            {"transform_max_defect", r.transform_defect.max_defect},
            {"transform_domain", Json::array({r.transform_domain.lo, r.transform_domain.hi})},
            {"grid_n", r.grid_n}};
    }
    j["timing_ms"] = clock.elapsed_ms();
    emit(o, {j});
    return kExitOk;
}

int cmd_means(const Options& o) {
    const Clock clock;
    if (o.points.empty()) throw popcheck::RegistryError("means needs --points");
    if (o.mean.empty()) throw popcheck::RegistryError("means needs --mean");
    const PointSet pts = o.weights.empty() ? PointSet(o.points) : PointSet(o.points, o.weights);
    const auto parts = popcheck::split_registry(o.mean);
    const std::string& kind = parts.front();
    double value = 0.0;
    if (kind == "qa") {
        const std::string gen = o.mean.substr(3);
        value = popcheck::means::qa_mean(Generator::parse(gen), pts);
    } else if (kind == "power") {
        const auto params = popcheck::parse_params(parts);
        popcheck::expect_param_count(kind, params, 1);
        value = popcheck::means::power_mean(params[0], pts);
    } else if (kind == "log" || kind == "identric") {
        if (!o.weights.empty()) throw popcheck::RegistryError(kind + " mean takes no weights");
        const auto& v = o.points;
        if (kind == "identric") {
            if (v.size() != 2) throw popcheck::RegistryError("identric mean takes two points");
            value = popcheck::means::identric_mean(v[0], v[1]);
        } else if (v.size() == 2) {
            value = popcheck::means::log_mean2(v[0], v[1]);
        } else if (v.size() == 3) {
            value = popcheck::means::log_mean3(v[0], v[1], v[2]);
        } else {
            throw popcheck::RegistryError("log mean takes two or three points");
        }
    } else {
        throw popcheck::RegistryError("unknown mean '" + o.mean + "' (qa:<generator>, power:p, log, identric)");
    }
    Json inputs;
    inputs["mean"] = o.mean;
    inputs["points"] = o.points;
    if (!o.weights.empty()) inputs["weights"] = o.weights;
    Json j = popcheck::report::base("means", "", inputs);
    j["value"] = value;
    j["timing_ms"] = clock.elapsed_ms();
    emit(o, {j});
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"popcheck: numerical checks of Popoviciu-type inequalities"};
    app.set_help_flag("--help", "print this help and exit");
    app.set_config("--config", "", "flat key=value file with option defaults");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--ineq", o.ineq, "inequality id (popoviciu, semiconvex, strong, agm-log, qa-pop, "
                                      "hyp-pop, vol-pop, al-gap, hpop, h-ratio-i, h-ratio-ii, "
                                      "h-jensen, h-pair-pop)");
    app.add_option("--fn", o.fn, "function, name[:param...]");
    app.add_option("--g", o.gfn, "partner function for h-pair-pop");
    app.add_option("--phi", o.phi, "generator on the domain (identity, power:p, log, exp)");
    app.add_option("--psi", o.psi, "generator on the range");
    app.add_option("--h", o.h, "h function (identity, power:s, reciprocal, one)");
    app.add_option("--mean", o.mean, "mean for the means command (qa:<gen>, power:p, log, identric)");
    app.add_option("--mode", o.mode, "h-jensen mode: convex_super or concave_sub");
    app.add_option("--triple", o.triple, "evaluation point x y z")->expected(3);
    app.add_option("--points", o.points, "point list")->expected(1, 1 << 20);
    app.add_option("--weights", o.weights, "weights summing to 1")->expected(1, 1 << 20);
    app.add_option("--region", o.region, "lo hi (cube) or lo hi lo hi lo hi")->expected(2, 6);
    app.add_option("--interval", o.interval, "restrict the function domain to [lo, hi]")->expected(2);
    app.add_option("--grid", o.grid, "grid size (curvature, classification, search resolution)");
    app.add_option("--samples", o.samples, "sweep sample count")->check(CLI::PositiveNumber);
    app.add_option("--starts", o.starts, "search refinement starts");
    app.add_option("--restarts", o.random_restarts, "extra seeded random search starts");
    app.add_option("--max-iter", o.max_iter, "Nelder-Mead iteration cap per start");
    app.add_option("--seed", o.seed, "64-bit seed")->envname("POPCHECK_SEED");
    app.add_option("--tol", o.tol, "base verdict tolerance (scaled by max(1,|lhs|,|rhs|))")
        ->check(CLI::PositiveNumber);
    app.add_option("--C", o.strong_c, "strong convexity constant");
    app.add_option("--out", o.out, "also write the report to this path");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", o.threads, "worker threads (0 = hardware)");

    auto* eval = app.add_subcommand("eval", "evaluate one inequality at one point");
    auto* sweep = app.add_subcommand("sweep", "evaluate at seeded random triples");
    auto* search = app.add_subcommand("search", "grid scan + Nelder-Mead counterexample search");
    auto* classify = app.add_subcommand("classify", "grid (M_phi, M_psi)- or h-convexity check");
    auto* means = app.add_subcommand("means", "evaluate a mean");
    for (auto* sub : {eval, sweep, search, classify, means}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*eval) return cmd_eval(o);
        if (*sweep) return cmd_sweep(o);
        if (*search) return cmd_search(o);
        if (*classify) return cmd_classify(o);
        if (*means) return cmd_means(o);
    } catch (const popcheck::RegistryError& e) {
        std::cerr << "popcheck: usage error: " << e.what() << "\n";
        return kExitError;
    } catch (const popcheck::DomainError& e) {
        std::cerr << "popcheck: domain error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "popcheck: error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
