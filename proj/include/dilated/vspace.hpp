#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "dilated/errors.hpp"
#include "dilated/quantale.hpp"

namespace dilated {

/// Quantale-valued distance structure over an abstract point type.
/// Reflexive and symmetric by contract; no triangle inequality is assumed.
template <class Point>
struct MetricStructure {
    Quantale quantale;
    std::function<double(const Point&, const Point&)> distance;
};

enum class FixedPointStatus { Converged, MaxIterations };

template <class Point>
struct FixedPointReport {
    Point fixed_point;
    std::vector<std::pair<int, Point>> iterates_kept;  // (iteration index, point)
    std::vector<double> successive_distances;          // d(x_n, x_{n+1})
    double empirical_ratio = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    int iterations_used = 0;
    FixedPointStatus status = FixedPointStatus::MaxIterations;
};

struct IterationOptions {
    int keep_every = 5;   // retain first 4, last 4, and every keep_every-th iterate
    int burn_in = 2;      // iterations skipped by the empirical-ratio estimate
};

/// Iterates x_{n+1} = f(x_n) until d(x_n, x_{n+1}) <= tolerance or max_iter.
/// Throws DivergenceDetected when a successive distance hits top or grows by
/// more than factor 1 + 1e-6 for 3 consecutive steps. Does not throw on
/// hitting max_iter; see banach_fixed_point for the throwing wrapper.
template <class Point>
FixedPointReport<Point> iterate_fixed_point(
    const std::function<Point(const Point&)>& f, Point x0, const MetricStructure<Point>& m,
    double tolerance, int max_iter, const IterationOptions& opts = {},
    const std::function<void(const Point&, int)>& observer = nullptr) {
    if (max_iter < 1) throw ConfigError("iterate_fixed_point: max_iter must be >= 1");
    const Quantale& q = m.quantale;
    FixedPointReport<Point> report;
    std::deque<std::pair<int, Point>> tail;

    auto keep = [&](int n, const Point& p) {
        if (n < 4 || (opts.keep_every > 0 && n % opts.keep_every == 0))
            report.iterates_kept.emplace_back(n, p);
        tail.emplace_back(n, p);
        if (tail.size() > 4) tail.pop_front();
    };

    keep(0, x0);
    Point current = std::move(x0);
    int growth_streak = 0;
    bool stopped_by_tolerance = false;
    for (int n = 1; n <= max_iter; ++n) {
        Point next = f(current);
        double d = m.distance(current, next);
        report.successive_distances.push_back(d);
        report.iterations_used = n;
        if (observer) observer(next, n);
        keep(n, next);
        if (q.eq(d, q.top)) throw DivergenceDetected("successive distance reached top at step " +
                                                     std::to_string(n));
        if (report.successive_distances.size() >= 2) {
            double prev = report.successive_distances[report.successive_distances.size() - 2];
            bool grew = (q.instance == QuantaleInstance::ExtRealMul)
                            ? (d > prev * (1.0 + 1e-6))
                            : q.lt(prev, d);
            growth_streak = grew ? growth_streak + 1 : 0;
            if (growth_streak >= 3)
                throw DivergenceDetected("successive distances increased for 3 consecutive steps");
        }
        current = std::move(next);
        if (q.leq(d, tolerance)) {
            stopped_by_tolerance = true;
            break;
        }
    }

    // Non-increasing after burn-in is required for the converged flag.
    bool monotone = true;
    for (std::size_t i = static_cast<std::size_t>(opts.burn_in) + 1;
         i < report.successive_distances.size(); ++i)
        if (q.lt(report.successive_distances[i - 1], report.successive_distances[i])) {
            monotone = false;
            break;
        }

    // Empirical contraction ratio: max of residual(d_n, d_{n+1}) past burn-in.
    bool have_ratio = false;
    double ratio = q.bottom;
    for (std::size_t i = static_cast<std::size_t>(opts.burn_in) + 1;
         i < report.successive_distances.size(); ++i) {
        double prev = report.successive_distances[i - 1];
        if (q.eq(prev, q.bottom)) continue;
        double r = q.residual(prev, report.successive_distances[i]);
        if (!have_ratio || q.leq(ratio, r)) ratio = r;
        have_ratio = true;
    }
    if (have_ratio) report.empirical_ratio = ratio;

    report.converged = stopped_by_tolerance && monotone;
    report.status = report.converged ? FixedPointStatus::Converged : FixedPointStatus::MaxIterations;
    report.fixed_point = std::move(current);
    return report;
}

/// Spec-facing wrapper: throws MaxIterationsExceeded on non-convergence.
template <class Point>
FixedPointReport<Point> banach_fixed_point(const std::function<Point(const Point&)>& f, Point x0,
                                           const MetricStructure<Point>& m, double tolerance,
                                           int max_iter, const IterationOptions& opts = {}) {
    auto report = iterate_fixed_point<Point>(f, std::move(x0), m, tolerance, max_iter, opts);
    if (!report.converged)
        throw MaxIterationsExceeded("no convergence within " + std::to_string(max_iter) +
                                    " iterations");
    return report;
}

/// Max over pairs of residual(d(x, y), d(f x, f y)): a sampled lower bound on
/// the Lipschitz seminorm of f. Pairs with degenerate distance (bottom or
/// top) are skipped; throws NoValidPairs if all are.
template <class Point>
double estimate_lipschitz(const std::function<Point(const Point&)>& f,
                          const std::vector<std::pair<Point, Point>>& pairs,
                          const MetricStructure<Point>& m) {
    const Quantale& q = m.quantale;
    bool any = false;
    double best = q.bottom;
    for (const auto& [x, y] : pairs) {
        double d = m.distance(x, y);
        if (q.eq(d, q.bottom) || q.eq(d, q.top)) continue;
        double r = q.residual(d, m.distance(f(x), f(y)));
        if (!any || q.leq(best, r)) best = r;
        any = true;
    }
    if (!any) throw NoValidPairs("estimate_lipschitz: every pair degenerate");
    return best;
}

/// True iff d_i <= tensor(r^i, q0) for every successive distance d_i.
inline bool check_geometric(const std::vector<double>& successive_distances, double r, double q0,
                            const Quantale& q) {
    if (!q.lt(r, q.unit)) throw ConfigError("check_geometric: need r < e");
    if (!q.lt(q0, q.top)) throw ConfigError("check_geometric: need q < top");
    for (std::size_t i = 0; i < successive_distances.size(); ++i) {
        double bound = q.tensor(q.tensor_power(r, static_cast<int>(i)), q0);
        if (!q.leq(successive_distances[i], bound)) return false;
    }
    return true;
}

}  // namespace dilated
