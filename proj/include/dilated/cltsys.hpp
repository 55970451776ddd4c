#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dilated/measure.hpp"
#include "dilated/psd.hpp"

namespace dilated {

enum class Kind { LLN, CLT };

std::string kind_name(Kind k);

/// A rescaled self-convolution system: theta(mu) = rescale * (mu conv mu)
/// with grading constant 2 (expectation, LLN) or sqrt(2) (variance, CLT).
struct CltSystem {
    Kind kind = Kind::CLT;
    double l = 2.5;
    double grading_constant = 0.0;
    double rescale = 0.0;          // residual [c, e] in the multiplicative quantale
    double rescale_squared = 0.0;  // exact (1/c)^2: 1/2 for CLT, 1/4 for LLN
    DualGrid grid;

    /// Validates l against the kind's interval ((1,2) for LLN, (2,3) for
    /// CLT) and fills in the grading constant and rescale.
    static CltSystem make(Kind kind, double l, DualGrid grid);
};

/// Expectation vector (LLN) or variance matrix (CLT).
struct GradingPoint {
    Kind kind = Kind::CLT;
    std::vector<double> vec;  // LLN
    PsdMatrix mat;            // CLT
};

double grading_distance(const GradingPoint& a, const GradingPoint& b);

enum class Verdict { Converged, Diverged, Inconclusive };

std::string verdict_name(Verdict v);

struct ConvergenceReport {
    Kind kind = Kind::CLT;
    double l = 0.0;
    int iterations = 0;
    std::vector<double> distance_to_target;  // d_l(mu_n, analytic target), n = 0..iterations
    std::vector<double> successive_distance;
    std::vector<double> grading_drift;       // distance of grading(mu_n) from grading(mu_0)
    double empirical_ratio = 0.0;
    double theoretical_ratio = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    Measure final_measure;
};

Measure theta(const CltSystem& sys, const Measure& mu);

/// Throws NotInDomain when the CLT fibre precondition (mean within 1e-8 of
/// zero) fails.
GradingPoint grading(const CltSystem& sys, const Measure& mu);

struct GradingCheck {
    bool preserved = false;
    double drift = 0.0;
};
GradingCheck check_grading_preserved(const CltSystem& sys, const Measure& mu, double tol);

/// Max over pairs of d_l(theta mu, theta nu) / d_l(mu, nu). Pairs must share
/// a grading point within 1e-8 and have finite nonzero d_l; identical pairs
/// are excluded. Throws NoValidPairs if nothing survives.
double estimate_contraction(const CltSystem& sys,
                            const std::vector<std::pair<Measure, Measure>>& fibre_pairs);

/// Dirac at the expectation (LLN) or N(0, variance matrix) (CLT).
Measure analytic_target(const CltSystem& sys, const GradingPoint& p);

double theoretical_ratio(const CltSystem& sys);

struct CentralLimitOptions {
    double target_tol = 0.02;
    double grading_tol = 1e-8;
    double stop_tol = 1e-13;  // successive-distance stop for the engine
};

ConvergenceReport central_limit(const CltSystem& sys, const Measure& mu0, int max_iter,
                                const CentralLimitOptions& opts = {});

struct FunctorialityReport {
    bool ok = false;
    double distance = 0.0;
    ConvergenceReport run;
};

/// Compares pushforward_linear(f, limit) against the analytic target of the
/// pushed grading f * M * f^T in d_l. f must be scalar or diagonal; CLT only.
FunctorialityReport functoriality_check(const CltSystem& sys, const std::vector<double>& f_diag,
                                        const Measure& mu0, double tol, int max_iter = 20);

struct ObservableOptions {
    double h_bound = 1e6;      // abort when |H(sample)| exceeds this
    double min_variance = 1e-12;
    CentralLimitOptions run;
};

/// Empirical pushforward of a sampler along a bounded observable H, binned
/// into n_bins uniform bins, mean-centered by an exact offset shift, then
/// run through central_limit.
ConvergenceReport observable_clt(const std::function<double()>& base_sampler,
                                 const std::function<double(double)>& H, std::size_t n_samples,
                                 std::size_t n_bins, const CltSystem& sys, int max_iter,
                                 const ObservableOptions& opts = {});

/// The binned, centered empirical measure used by observable_clt.
LatticeMeasure empirical_pushforward(const std::function<double()>& base_sampler,
                                     const std::function<double(double)>& H, std::size_t n_samples,
                                     std::size_t n_bins, double h_bound = 1e6);

}  // namespace dilated
