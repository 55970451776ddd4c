#include "dilated/quantale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace dilated {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string show(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

bool Quantale::eq(double a, double b) const {
    if (a == b) return true;
    if (std::isinf(a) || std::isinf(b)) return false;  // inf compared exactly
    return std::abs(a - b) <= tolerance;
}

double Quantale::tensor_power(double a, int n) const {
    double acc = unit;
    for (int i = 0; i < n; ++i) acc = tensor(acc, a);
    return acc;
}

double Quantale::join(std::span<const double> xs) const {
    double acc = bottom;
    for (double x : xs)
        if (leq(acc, x)) acc = x;
    return acc;
}

double Quantale::meet(std::span<const double> xs) const {
    double acc = top;
    for (double x : xs)
        if (leq(x, acc)) acc = x;
    return acc;
}

Quantale make_quantale(QuantaleInstance instance) {
    Quantale q;
    q.instance = instance;
    switch (instance) {
        case QuantaleInstance::Boolean:
            q.bottom = 0.0;
            q.top = 1.0;
            q.unit = 1.0;
            q.contractive = true;
            q.tolerance = 0.0;
            q.leq_fn = [](double a, double b) { return a <= b; };
            q.tensor_fn = [](double a, double b) { return std::min(a, b); };
            // Boolean implication.
            q.residual_fn = [](double r, double t) { return (r <= t) ? 1.0 : 0.0; };
            break;
        case QuantaleInstance::ExtRealMul:
            q.bottom = 0.0;
            q.top = kInf;
            q.unit = 1.0;
            q.contractive = true;
            q.tolerance = 1e-12;
            q.leq_fn = [](double a, double b) { return a <= b; };
            q.tensor_fn = [](double a, double b) {
                // 0 * inf = 0 so that bot absorbs.
                if (a == 0.0 || b == 0.0) return 0.0;
                return a * b;
            };
            q.residual_fn = [](double r, double t) {
                if (r == 0.0) return kInf;
                if (std::isinf(r)) return std::isinf(t) ? kInf : 0.0;
                if (std::isinf(t)) return kInf;
                return t / r;
            };
            break;
        case QuantaleInstance::Lawvere:
            // Reversed order: leq(a, b) means a >= b numerically.
            q.bottom = kInf;
            q.top = 0.0;
            q.unit = 0.0;
            q.contractive = true;
            q.tolerance = 1e-12;
            q.leq_fn = [](double a, double b) { return a >= b; };
            q.tensor_fn = [](double a, double b) { return a + b; };
            // Truncated subtraction.
            q.residual_fn = [](double r, double t) {
                if (std::isinf(r)) return 0.0;
                if (std::isinf(t)) return kInf;
                return std::max(t - r, 0.0);
            };
            break;
    }
    return q;
}

double tensor(QuantaleInstance q, double a, double b) {
    return make_quantale(q).tensor(a, b);
}

double residual(QuantaleInstance q, double r, double t) {
    return make_quantale(q).residual(r, t);
}

bool LawReport::all_passed() const {
    return std::all_of(laws.begin(), laws.end(), [](const LawResult& r) { return r.passed; });
}

const LawResult* LawReport::first_failure() const {
    for (const auto& r : laws)
        if (!r.passed) return &r;
    return nullptr;
}

LawReport check_laws(const Quantale& q, std::vector<double> samples, unsigned seed) {
    LawReport report;
    auto add = [&](std::string law, bool passed, std::string witness) {
        report.laws.push_back({std::move(law), passed, std::move(witness)});
    };

    const std::size_t n = samples.size();
    // Cap the number of triples so large sample sets stay cheap.
    constexpr std::size_t kMaxTriples = 20000;
    std::vector<std::array<double, 3>> triples;
    if (n * n * n <= kMaxTriples) {
        for (double a : samples)
            for (double b : samples)
                for (double c : samples) triples.push_back({a, b, c});
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t i = 0; i < kMaxTriples; ++i)
            triples.push_back({samples[pick(rng)], samples[pick(rng)], samples[pick(rng)]});
    }

    {  // unit law
        bool ok = true;
        std::string w;
        for (double a : samples) {
            if (!q.eq(q.tensor(q.unit, a), a)) {
                ok = false;
                w = "tensor(e, " + show(a) + ") = " + show(q.tensor(q.unit, a));
                break;
            }
        }
        add("unit", ok, w);
    }
    {  // commutativity
        bool ok = true;
        std::string w;
        for (const auto& t : triples) {
            if (!q.eq(q.tensor(t[0], t[1]), q.tensor(t[1], t[0]))) {
                ok = false;
                w = "(" + show(t[0]) + ", " + show(t[1]) + ")";
                break;
            }
        }
        add("commutativity", ok, w);
    }
    {  // associativity
        bool ok = true;
        std::string w;
        for (const auto& t : triples) {
            double lhs = q.tensor(t[0], q.tensor(t[1], t[2]));
            double rhs = q.tensor(q.tensor(t[0], t[1]), t[2]);
            if (!q.eq(lhs, rhs)) {
                ok = false;
                w = "(" + show(t[0]) + ", " + show(t[1]) + ", " + show(t[2]) + ")";
                break;
            }
        }
        add("associativity", ok, w);
    }
    {  // absorption
        bool ok = true;
        std::string w;
        for (double a : samples) {
            if (!q.eq(q.tensor(q.bottom, a), q.bottom)) {
                ok = false;
                w = "tensor(bot, " + show(a) + ") = " + show(q.tensor(q.bottom, a));
                break;
            }
        }
        add("absorption", ok, w);
    }
    {  // join-distributivity: tensor(r, join{s1, s2}) = join{tensor(r, s1), tensor(r, s2)}
        bool ok = true;
        std::string w;
        for (const auto& t : triples) {
            const double ss[2] = {t[1], t[2]};
            double lhs = q.tensor(t[0], q.join(ss));
            const double ts[2] = {q.tensor(t[0], t[1]), q.tensor(t[0], t[2])};
            double rhs = q.join(ts);
            if (!q.eq(lhs, rhs)) {
                ok = false;
                w = "(" + show(t[0]) + ", {" + show(t[1]) + ", " + show(t[2]) + "})";
                break;
            }
        }
        add("join-distributivity", ok, w);
    }
    {  // residuation adjunction; leq taken up to the comparison tolerance
        auto leq_tol = [&](double a, double b) { return q.leq(a, b) || q.eq(a, b); };
        bool ok = true;
        std::string w;
        for (const auto& t : triples) {
            bool lhs = leq_tol(q.tensor(t[0], t[1]), t[2]);
            bool rhs = leq_tol(t[1], q.residual(t[0], t[2]));
            if (lhs != rhs) {
                ok = false;
                w = "(r=" + show(t[0]) + ", s=" + show(t[1]) + ", t=" + show(t[2]) + ")";
                break;
            }
        }
        add("residuation-adjunction", ok, w);
    }
    if (q.contractive) {
        bool ok = true;
        std::string w;
        for (double a : samples) {
            if (!q.lt(a, q.unit)) continue;
            for (double x : samples) {
                if (q.eq(x, q.top) || q.eq(x, q.bottom)) continue;
                if (!q.lt(q.tensor(a, x), x)) {
                    ok = false;
                    w = "(q=" + show(a) + ", x=" + show(x) + ")";
                    break;
                }
            }
            if (!ok) break;
        }
        add("contractivity", ok, w);
    }
    return report;
}

std::vector<double> default_samples(QuantaleInstance instance, std::size_t n) {
    if (instance == QuantaleInstance::Boolean) return {0.0, 1.0};
    std::vector<double> xs = {0.0, 1.0, kInf};
    // Log-spaced values spanning [1e-3, 1e1]; triple products stay small
    // enough that rounding sits below the 1e-12 comparison tolerance.
    const std::size_t m = (n > 3) ? n - 3 : 1;
    for (std::size_t i = 0; i < m; ++i) {
        double t = (m == 1) ? 0.5 : static_cast<double>(i) / static_cast<double>(m - 1);
        xs.push_back(std::pow(10.0, -3.0 + 4.0 * t));
    }
    return xs;
}

}  // namespace dilated
