#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "popcheck/error.hpp"
#include "popcheck/inequalities.hpp"
#include "popcheck/interval.hpp"
#include "popcheck/means.hpp"
#include "popcheck/parallel.hpp"
#include "popcheck/random.hpp"

namespace popcheck::search {

using ineq::ResidualReport;

/// Residual of one inequality as a function of the evaluation point.
using Objective = std::function<ResidualReport(const Triple&)>;

/// A closed box of triples with a per-axis grid resolution.
struct SearchRegion {
    std::array<Interval, 3> box;
    std::array<std::size_t, 3> resolution = {15, 15, 15};
    std::uint64_t seed = 0;

    static SearchRegion cube(double lo, double hi, std::size_t resolution = 15, std::uint64_t seed = 0) {
        const auto iv = Interval::closed(lo, hi);
        return {{iv, iv, iv}, {resolution, resolution, resolution}, seed};
    }

    void validate() const {
        for (std::size_t i = 0; i < 3; ++i) {
            if (!box[i].bounded() || box[i].lo > box[i].hi) {
                throw DomainError("search region: axis " + std::to_string(i) +
                                  " must be a bounded nonempty interval");
            }
            if (resolution[i] < 1) throw DomainError("search region: resolution must be >= 1");
        }
    }

    [[nodiscard]] bool contains(const Triple& t) const {
        for (std::size_t i = 0; i < 3; ++i) {
            if (t[i] < box[i].lo || t[i] > box[i].hi) return false;
        }
        return true;
    }

    [[nodiscard]] Triple clamp(const Triple& t) const {
        return {std::clamp(t.x, box[0].lo, box[0].hi), std::clamp(t.y, box[1].lo, box[1].hi),
                std::clamp(t.z, box[2].lo, box[2].hi)};
    }

    [[nodiscard]] std::size_t node_count() const {
        return resolution[0] * resolution[1] * resolution[2];
    }

    /// Node coordinates for flat index i = (i0 * r1 + i1) * r2 + i2.
    [[nodiscard]] Triple node(std::size_t index) const {
        const std::size_t i2 = index % resolution[2];
        const std::size_t i1 = (index / resolution[2]) % resolution[1];
        const std::size_t i0 = index / (resolution[1] * resolution[2]);
        return {axis_value(0, i0), axis_value(1, i1), axis_value(2, i2)};
    }

private:
    [[nodiscard]] double axis_value(std::size_t axis, std::size_t i) const {
        const Interval& iv = box[axis];
        if (resolution[axis] == 1) return 0.5 * (iv.lo + iv.hi);
        if (i + 1 == resolution[axis]) return iv.hi;
        return iv.lo + static_cast<double>(i) * ((iv.hi - iv.lo) / static_cast<double>(resolution[axis] - 1));
    }
};

struct Candidate {
    Triple point;
    double residual = 0.0;
    std::size_t index = 0;
};

struct SkippedNode {
    std::size_t index = 0;
    Triple point;
    std::string reason;
};

struct ScanResult {
    std::vector<Candidate> ranked;  ///< ascending residual, ties by node index
    std::vector<SkippedNode> skipped;
};

/// Evaluates the residual at every grid node. Nodes whose evaluation throws
/// are recorded as skipped. Output is independent of the thread count.
inline ScanResult grid_scan(const Objective& objective, const SearchRegion& region, unsigned threads = 0) {
    region.validate();
    const std::size_t n = region.node_count();
    std::vector<std::optional<double>> residuals(n);
    std::vector<std::string> reasons(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            try {
                residuals[i] = objective(region.node(i)).residual;
                if (std::isnan(*residuals[i])) {
                    residuals[i].reset();
                    reasons[i] = "residual is NaN";
                }
            } catch (const std::exception& e) {
                reasons[i] = e.what();
            }
        },
        threads);
    ScanResult out;
    for (std::size_t i = 0; i < n; ++i) {
        if (residuals[i]) {
            out.ranked.push_back({region.node(i), *residuals[i], i});
        } else {
            out.skipped.push_back({i, region.node(i), reasons[i]});
        }
    }
    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [](const Candidate& a, const Candidate& b) { return a.residual < b.residual; });
    return out;
}

struct RefineResult {
    Triple point;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool error = false;  ///< every initial vertex failed to evaluate
};

inline constexpr double kSimplexDiameterTol = 1e-10;

/// Nelder-Mead minimisation of `objective` inside the region box. Trial
/// points are clamped to the box; evaluation failures count as +inf so the
/// simplex contracts away from them. The returned residual never exceeds the
/// residual at `start`.
template <class F>
RefineResult refine(const F& objective, const Triple& start, const SearchRegion& region,
                    std::size_t max_iter) {
    region.validate();
    using Point = std::array<double, 3>;
    const auto to_point = [](const Triple& t) { return Point{t.x, t.y, t.z}; };
    const auto to_triple = [](const Point& p) { return Triple{p[0], p[1], p[2]}; };
    const auto eval = [&](const Point& p) {
        try {
            const double v = static_cast<double>(objective(to_triple(p)));
            return std::isnan(v) ? kInf : v;
        } catch (const std::exception&) {
            return kInf;
        }
    };
    const auto clamp = [&](Point p) { return to_point(region.clamp(to_triple(p))); };

    std::array<Point, 4> simplex;
    std::array<double, 4> values;
    simplex[0] = clamp(to_point(start));
    for (std::size_t axis = 0; axis < 3; ++axis) {
        Point p = simplex[0];
        const Interval& iv = region.box[axis];
        double step = 0.05 * (iv.hi - iv.lo);
        if (step == 0.0) step = 1e-3 * std::max(1.0, std::abs(p[axis]));
        p[axis] = p[axis] + step <= iv.hi ? p[axis] + step : p[axis] - step;
        simplex[axis + 1] = clamp(p);
    }
    for (std::size_t i = 0; i < 4; ++i) values[i] = eval(simplex[i]);

    RefineResult out;
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == kInf; })) {
        out.point = start;
        out.residual = kInf;
        out.error = true;
        return out;
    }

    std::array<std::size_t, 4> order = {0, 1, 2, 3};
    const auto sort_simplex = [&] {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    };
    const auto diameter = [&] {
        double d = 0.0;
        const Point& best = simplex[order[0]];
        for (std::size_t i = 1; i < 4; ++i) {
            const Point& p = simplex[order[i]];
            d = std::max(d, std::sqrt((p[0] - best[0]) * (p[0] - best[0]) +
                                      (p[1] - best[1]) * (p[1] - best[1]) +
                                      (p[2] - best[2]) * (p[2] - best[2])));
        }
        return d;
    };
    const auto along = [&](const Point& from, const Point& to, double t) {
        return clamp({from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1]),
                      from[2] + t * (to[2] - from[2])});
    };

    std::size_t iter = 0;
    sort_simplex();
    for (; iter < max_iter && diameter() >= kSimplexDiameterTol; ++iter) {
        const std::size_t worst = order[3];
        Point centroid = {0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t k = 0; k < 3; ++k) centroid[k] += simplex[order[i]][k] / 3.0;
        }
        const Point reflected = along(simplex[worst], centroid, 2.0);
        const double fr = eval(reflected);
        if (fr < values[order[0]]) {
            const Point expanded = along(simplex[worst], centroid, 3.0);
            const double fe = eval(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if (fr < values[order[2]]) {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            // Outside contraction when the reflection beat the worst vertex,
            // inside contraction otherwise.
            const bool outside = fr < values[worst];
            const Point contracted = outside ? along(centroid, reflected, 0.5)
                                             : along(centroid, simplex[worst], 0.5);
            const double fc = eval(contracted);
            if (fc < (outside ? fr : values[worst])) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                const Point best = simplex[order[0]];
                for (std::size_t i = 1; i < 4; ++i) {
                    simplex[order[i]] = along(best, simplex[order[i]], 0.5);
                    values[order[i]] = eval(simplex[order[i]]);
                }
            }
        }
        sort_simplex();
    }
    out.point = to_triple(simplex[order[0]]);
    out.residual = values[order[0]];
    out.iterations = iter;
    return out;
}

enum class CertificateStatus { violation_certified, no_violation_found };

inline std::string to_string(CertificateStatus s) {
    return s == CertificateStatus::violation_certified ? "violation_certified" : "no_violation_found";
}

struct Certificate {
    std::string inequality_id;
    Triple point;
    double residual = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    CertificateStatus status = CertificateStatus::no_violation_found;
    std::vector<std::string> hypothesis_flags;
    // Evidence for no_violation_found, which makes no completeness claim.
    double scanned_min = 0.0;
    Triple scanned_witness;
    std::size_t nodes_evaluated = 0;
    std::size_t nodes_skipped = 0;
    std::size_t refinements = 0;
};

struct SearchConfig {
    std::size_t starts = 5;           ///< refinements from the best grid nodes
    std::size_t random_restarts = 0;  ///< extra starts drawn from the region seed
    std::size_t max_iter = 600;
    double base_tolerance = ineq::kDefaultTolerance;
    unsigned threads = 0;
};

/// Grid scan, Nelder-Mead refinement from the best nodes (and optional seeded
/// random starts), then a fresh re-evaluation at the best point found.
inline Certificate find_counterexample(const Objective& objective, const SearchRegion& region,
                                       const SearchConfig& config = {}) {
    const ScanResult scan = grid_scan(objective, region, config.threads);
    if (scan.ranked.empty()) {
        throw std::runtime_error("find_counterexample: every grid node failed to evaluate" +
                                 (scan.skipped.empty() ? std::string()
                                                       : " (" + scan.skipped.front().reason + ")"));
    }
    std::vector<Triple> starts;
    for (std::size_t i = 0; i < std::min(config.starts, scan.ranked.size()); ++i) {
        starts.push_back(scan.ranked[i].point);
    }
    SeededSampler sampler(region.seed);
    for (std::size_t i = 0; i < config.random_restarts; ++i) starts.push_back(sampler.triple(region.box));

    std::vector<RefineResult> refined(starts.size());
    const auto residual_of = [&](const Triple& t) { return objective(t).residual; };
    parallel_for(
        starts.size(),
        [&](std::size_t i) { refined[i] = refine(residual_of, starts[i], region, config.max_iter); },
        config.threads == 0 ? static_cast<unsigned>(starts.size()) : config.threads);

    Triple best = scan.ranked.front().point;
    double best_value = scan.ranked.front().residual;
    for (const auto& r : refined) {
        if (!r.error && r.residual < best_value) {
            best_value = r.residual;
            best = r.point;
        }
    }

    ResidualReport fresh = objective(best);
    fresh.rescore(config.base_tolerance);
    Certificate cert;
    cert.inequality_id = fresh.inequality_id;
    cert.point = best;
    cert.residual = fresh.residual;
    cert.lhs = fresh.lhs;
    cert.rhs = fresh.rhs;
    cert.tolerance = fresh.tolerance;
    cert.hypothesis_flags = fresh.hypothesis_flags;
    cert.status = fresh.residual < -fresh.tolerance ? CertificateStatus::violation_certified
                                                    : CertificateStatus::no_violation_found;
    cert.scanned_min = scan.ranked.front().residual;
    cert.scanned_witness = scan.ranked.front().point;
    cert.nodes_evaluated = scan.ranked.size();
    cert.nodes_skipped = scan.skipped.size();
    cert.refinements = refined.size();
    return cert;
}

struct SweepSummary {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double min_residual = kInf;
    double mean_residual = 0.0;
    ResidualReport worst;
};

/// Evaluates the objective at `samples` seeded uniform triples in the box.
/// Aggregation is sequential over the sample index, so results do not depend
/// on the thread count. Evaluation errors propagate.
inline SweepSummary property_sweep(const Objective& objective, const std::array<Interval, 3>& box,
                                   std::size_t samples, std::uint64_t seed,
                                   double base_tolerance = ineq::kDefaultTolerance,
                                   unsigned threads = 0,
                                   std::vector<ResidualReport>* all = nullptr) {
    if (samples == 0) throw DomainError("sweep: sample count must be >= 1");
    SeededSampler sampler(seed);
    std::vector<Triple> points(samples);
    for (auto& p : points) p = sampler.triple(box);
    std::vector<ResidualReport> reports(samples);
    parallel_for(
        samples,
        [&](std::size_t i) {
            reports[i] = objective(points[i]);
            reports[i].rescore(base_tolerance);
        },
        threads);
    SweepSummary out;
    out.samples = samples;
    double total = 0.0;
    for (const auto& r : reports) {
        total += r.residual;
        if (!r.holds()) ++out.violations;
        if (r.residual < out.min_residual) {
            out.min_residual = r.residual;
            out.worst = r;
        }
    }
    out.mean_residual = total / static_cast<double>(samples);
    if (all) *all = std::move(reports);
    return out;
}

} // namespace popcheck::search
