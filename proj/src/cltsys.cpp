#include "dilated/cltsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dilated/errors.hpp"
#include "dilated/vspace.hpp"

namespace dilated {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFibreTol = 1e-8;

}  // namespace

std::string kind_name(Kind k) { return k == Kind::LLN ? "lln" : "clt"; }

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Converged: return "converged";
        case Verdict::Diverged: return "diverged";
        default: return "inconclusive";
    }
}

CltSystem CltSystem::make(Kind kind, double l, DualGrid grid) {
    if (kind == Kind::LLN && !(l > 1.0 && l < 2.0))
        throw ConfigError("CltSystem: LLN requires l in (1, 2)");
    if (kind == Kind::CLT && !(l > 2.0 && l < 3.0))
        throw ConfigError("CltSystem: CLT requires l in (2, 3)");
    CltSystem sys;
    sys.kind = kind;
    sys.l = l;
    sys.grading_constant = (kind == Kind::LLN) ? 2.0 : std::sqrt(2.0);
    sys.rescale = 1.0 / sys.grading_constant;
    sys.rescale_squared = (kind == Kind::LLN) ? 0.25 : 0.5;
    sys.grid = std::move(grid);
    return sys;
}

double grading_distance(const GradingPoint& a, const GradingPoint& b) {
    if (a.kind != b.kind) throw ConfigError("grading_distance: kind mismatch");
    if (a.kind == Kind::LLN) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.vec.size(); ++i) {
            double d = a.vec[i] - b.vec[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    return bures_wasserstein(a.mat, b.mat);
}

Measure theta(const CltSystem& sys, const Measure& mu) {
    if (mu.is_lattice()) return dilate(sys.rescale, Measure(convolve(mu.lattice(), mu.lattice())));
    // Gaussian handled analytically: convolution doubles mean and covariance,
    // dilation scales them by rescale and rescale^2. Using the exact squared
    // rescale keeps the Gaussian fixed point of the CLT operator exact.
    const auto& g = mu.gaussian();
    GaussianMeasure out;
    out.mean.resize(g.mean.size());
    for (std::size_t i = 0; i < g.mean.size(); ++i) out.mean[i] = 2.0 * sys.rescale * g.mean[i];
    out.covariance = g.covariance.scaled(2.0 * sys.rescale_squared);
    return Measure(out);
}

GradingPoint grading(const CltSystem& sys, const Measure& mu) {
    GradingPoint p;
    p.kind = sys.kind;
    if (sys.kind == Kind::LLN) {
        p.vec = expectation(mu);
        return p;
    }
    auto mean = expectation(mu);
    for (double m : mean)
        if (std::abs(m) > kFibreTol)
            throw NotInDomain("grading: CLT fibre requires expectation zero, got " +
                              std::to_string(m));
    p.mat = variance_matrix(mu);
    return p;
}

GradingCheck check_grading_preserved(const CltSystem& sys, const Measure& mu, double tol) {
    GradingPoint before = grading(sys, mu);
    GradingPoint after = grading(sys, theta(sys, mu));
    GradingCheck out;
    out.drift = grading_distance(before, after);
    out.preserved = out.drift <= tol;
    return out;
}

double estimate_contraction(const CltSystem& sys,
                            const std::vector<std::pair<Measure, Measure>>& fibre_pairs) {
    bool any = false;
    double best = 0.0;
    for (const auto& [mu, nu] : fibre_pairs) {
        if (grading_distance(grading(sys, mu), grading(sys, nu)) > kFibreTol)
            throw NotInDomain("estimate_contraction: pair does not share a grading point");
        double d0 = fourier_l_distance(mu, nu, sys.l, sys.grid);
        if (d0 == 0.0 || std::isinf(d0)) continue;
        double d1 = fourier_l_distance(theta(sys, mu), theta(sys, nu), sys.l, sys.grid);
        best = std::max(best, d1 / d0);
        any = true;
    }
    if (!any) throw NoValidPairs("estimate_contraction: no pair with finite nonzero distance");
    return best;
}

Measure analytic_target(const CltSystem& sys, const GradingPoint& p) {
    if (sys.kind == Kind::LLN) return Measure(dirac(p.vec));
    GaussianMeasure g;
    g.mean.assign(p.mat.order(), 0.0);
    g.covariance = p.mat;
    return Measure(g);
}

double theoretical_ratio(const CltSystem& sys) {
    return (sys.kind == Kind::LLN) ? std::pow(2.0, 1.0 / sys.l - 1.0)
                                   : std::pow(2.0, 1.0 / sys.l - 0.5);
}

ConvergenceReport central_limit(const CltSystem& sys, const Measure& mu0, int max_iter,
                                const CentralLimitOptions& opts) {
    ConvergenceReport report;
    report.kind = sys.kind;
    report.l = sys.l;
    report.theoretical_ratio = theoretical_ratio(sys);

    GradingPoint g0 = grading(sys, mu0);
    Measure target = analytic_target(sys, g0);

    auto dist = [&](const Measure& a, const Measure& b) {
        return fourier_l_distance(a, b, sys.l, sys.grid);
    };
    report.distance_to_target.push_back(dist(mu0, target));
    report.grading_drift.push_back(0.0);

    MetricStructure<Measure> metric{make_quantale(QuantaleInstance::ExtRealMul), dist};
    std::function<Measure(const Measure&)> step = [&](const Measure& m) { return theta(sys, m); };
    auto observe = [&](const Measure& x, int) {
        report.distance_to_target.push_back(dist(x, target));
        report.grading_drift.push_back(grading_distance(g0, grading(sys, x)));
    };

    bool diverged = false;
    try {
        auto engine = iterate_fixed_point<Measure>(step, mu0, metric, opts.stop_tol, max_iter, {},
                                                   observe);
        report.successive_distance = engine.successive_distances;
        report.iterations = engine.iterations_used;
        report.empirical_ratio = engine.empirical_ratio;
        report.final_measure = engine.fixed_point;
    } catch (const DivergenceDetected&) {
        diverged = true;
        report.iterations = static_cast<int>(report.distance_to_target.size()) - 1;
    }

    double max_drift = *std::max_element(report.grading_drift.begin(), report.grading_drift.end());
    double final_d = report.distance_to_target.back();
    if (diverged)
        report.verdict = Verdict::Diverged;
    else if (final_d <= opts.target_tol && max_drift <= opts.grading_tol)
        report.verdict = Verdict::Converged;
    else
        report.verdict = Verdict::Inconclusive;
    return report;
}

FunctorialityReport functoriality_check(const CltSystem& sys, const std::vector<double>& f_diag,
                                        const Measure& mu0, double tol, int max_iter) {
    if (sys.kind != Kind::CLT) throw ConfigError("functoriality_check: CLT systems only");
    const std::size_t n = f_diag.size();
    if (n != static_cast<std::size_t>(mu0.dim()))
        throw ConfigError("functoriality_check: f must be scalar or diagonal of matching dim");
    std::vector<double> f(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) f[i * n + i] = f_diag[i];

    FunctorialityReport out;
    out.run = central_limit(sys, mu0, max_iter);
    Measure pushed = pushforward_linear(f, n, out.run.final_measure);
    GradingPoint pushed_grading;
    pushed_grading.kind = Kind::CLT;
    pushed_grading.mat = psd_pushforward(f, n, grading(sys, mu0).mat);
    Measure target = analytic_target(sys, pushed_grading);
    out.distance = fourier_l_distance(pushed, target, sys.l, sys.grid);
    out.ok = out.distance <= tol;
    return out;
}

LatticeMeasure empirical_pushforward(const std::function<double()>& base_sampler,
                                     const std::function<double(double)>& H, std::size_t n_samples,
                                     std::size_t n_bins, double h_bound) {
    if (n_samples == 0 || n_bins < 2) throw ConfigError("empirical_pushforward: bad sizes");
    std::vector<double> hs(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        double h = H(base_sampler());
        if (!(std::abs(h) <= h_bound))
            throw UnboundedObservable("observable exceeded bound " + std::to_string(h_bound));
        hs[i] = h;
    }
    double lo = *std::min_element(hs.begin(), hs.end());
    double hi = *std::max_element(hs.begin(), hs.end());
    if (!(hi > lo)) throw NotInDomain("empirical_pushforward: degenerate (constant) observable");

    LatticeMeasure m;
    m.dim = 1;
    double width = (hi - lo) / static_cast<double>(n_bins);
    m.spacing = {width};
    m.offset = {lo + width / 2.0};  // bin centers
    m.shape = {n_bins};
    m.weights.assign(n_bins, 0.0);
    const double w1 = 1.0 / static_cast<double>(n_samples);
    for (double h : hs) {
        auto idx = static_cast<std::size_t>((h - lo) / width);
        m.weights[std::min(idx, n_bins - 1)] += w1;
    }
    m.truncate(0.0);
    // Exact mean-centering by an offset shift (the pointed fibre).
    m.offset[0] -= expectation(Measure(m))[0];
    return m;
}

ConvergenceReport observable_clt(const std::function<double()>& base_sampler,
                                 const std::function<double(double)>& H, std::size_t n_samples,
                                 std::size_t n_bins, const CltSystem& sys, int max_iter,
                                 const ObservableOptions& opts) {
    if (sys.kind != Kind::CLT) throw ConfigError("observable_clt: CLT systems only");
    LatticeMeasure m = empirical_pushforward(base_sampler, H, n_samples, n_bins, opts.h_bound);
    if (variance_matrix(Measure(m))(0, 0) < opts.min_variance)
        throw NotInDomain("observable_clt: variance below minimum");
    return central_limit(sys, Measure(m), max_iter, opts.run);
}

}  // namespace dilated
