#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dilated {

/// The three shipped quantale carriers.
///
/// Boolean    -- {bot, top} with tensor = meet and unit = top.
/// ExtRealMul -- [0, inf] with the numeric order, tensor = *, unit = 1.
/// Lawvere    -- [0, inf] with the *reversed* numeric order (so bot = inf,
///               top = 0, joins are numeric infima), tensor = +, unit = 0.
enum class QuantaleInstance { Boolean, ExtRealMul, Lawvere };

/// A complete-lattice-with-tensor carrier, restricted to finite joins/meets.
/// Values live in double; Boolean uses {0, 1}. The operation slots are
/// std::functions so tests can inject deliberately broken instances.
struct Quantale {
    QuantaleInstance instance = QuantaleInstance::ExtRealMul;
    double bottom = 0.0;
    double top = 0.0;
    double unit = 0.0;
    bool contractive = false;
    double tolerance = 0.0;  // absolute comparison tolerance; 0 = exact

    std::function<bool(double, double)> leq_fn;
    std::function<double(double, double)> tensor_fn;
    std::function<double(double, double)> residual_fn;

    bool leq(double a, double b) const { return leq_fn(a, b); }
    bool eq(double a, double b) const;
    bool lt(double a, double b) const { return leq(a, b) && !eq(a, b); }

    double tensor(double a, double b) const { return tensor_fn(a, b); }
    double residual(double r, double t) const { return residual_fn(r, t); }

    /// n-fold tensor power; n = 0 gives the unit.
    double tensor_power(double a, int n) const;

    double join(std::span<const double> xs) const;
    double meet(std::span<const double> xs) const;
};

Quantale make_quantale(QuantaleInstance instance);

double tensor(QuantaleInstance q, double a, double b);
double residual(QuantaleInstance q, double r, double t);

struct LawResult {
    std::string law;
    bool passed = true;
    std::string witness;  // counterexample description when failed
};

struct LawReport {
    std::vector<LawResult> laws;
    bool all_passed() const;
    const LawResult* first_failure() const;
};

/// Checks the quantale axioms (unit, commutativity, associativity,
/// absorption, join-distributivity, residuation adjunction, and the
/// contractivity property when flagged) on all sampled triples, randomly
/// subsampled past a cap.
LawReport check_laws(const Quantale& q, std::vector<double> samples, unsigned seed);

/// Default carrier samples: {bot, top} for Boolean; log-spaced values plus
/// {0, 1, inf} for the real carriers.
std::vector<double> default_samples(QuantaleInstance instance, std::size_t n = 100);

}  // namespace dilated
