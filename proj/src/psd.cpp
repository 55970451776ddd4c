#include "dilated/psd.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>

#include "dilated/errors.hpp"

namespace dilated {

namespace {

std::atomic<long> g_clamp_count{0};

// C = A * B for order-n row-major square matrices.
std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    std::vector<double> c(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double aik = a[i * n + k];
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
        }
    return c;
}

}  // namespace

PsdMatrix::PsdMatrix(std::size_t order) : order_(order), entries_(order * order, 0.0) {}

PsdMatrix::PsdMatrix(std::size_t order, std::vector<double> entries) : order_(order) {
    if (entries.size() != order * order) throw ConfigError("PsdMatrix: entry count mismatch");
    entries_.resize(order * order);
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t j = 0; j < order; ++j)
            entries_[i * order + j] = 0.5 * (entries[i * order + j] + entries[j * order + i]);
}

PsdMatrix PsdMatrix::identity(std::size_t order) {
    PsdMatrix m(order);
    for (std::size_t i = 0; i < order; ++i) m.at(i, i) = 1.0;
    return m;
}

PsdMatrix PsdMatrix::diagonal(std::vector<double> diag) {
    PsdMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.at(i, i) = diag[i];
    return m;
}

double PsdMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < order_; ++i) t += (*this)(i, i);
    return t;
}

void PsdMatrix::validate() const {
    auto eig = jacobi_eigen(*this);
    for (double w : eig.eigenvalues)
        if (w < -1e-10) throw NotPsd("eigenvalue " + std::to_string(w) + " below -1e-10");
}

PsdMatrix PsdMatrix::operator+(const PsdMatrix& other) const {
    if (order_ != other.order_) throw ConfigError("PsdMatrix: order mismatch");
    PsdMatrix out(order_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] + other.entries_[i];
    return out;
}

PsdMatrix PsdMatrix::scaled(double s) const {
    PsdMatrix out(order_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = s * entries_[i];
    return out;
}

double PsdMatrix::max_abs_diff(const PsdMatrix& other) const {
    if (order_ != other.order_) throw ConfigError("PsdMatrix: order mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        m = std::max(m, std::abs(entries_[i] - other.entries_[i]));
    return m;
}

SymmetricEigen jacobi_eigen(const PsdMatrix& a) {
    const std::size_t n = a.order();
    std::vector<double> m = a.entries();
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    constexpr double kOffThreshold = 1e-12;
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::abs(m[p * n + q]);
        if (off <= kOffThreshold) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = m[p * n + q];
                if (std::abs(apq) <= kOffThreshold / (n * n)) continue;
                double app = m[p * n + p];
                double aqq = m[q * n + q];
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double mkp = m[k * n + p];
                    double mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double mpk = m[p * n + k];
                    double mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k * n + p];
                    double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    SymmetricEigen out;
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = m[i * n + i];
    out.eigenvectors = std::move(v);
    return out;
}

PsdMatrix sqrt_psd(const PsdMatrix& a) {
    a.validate();
    const std::size_t n = a.order();
    auto eig = jacobi_eigen(a);
    // V * diag(sqrt(max(w, 0))) * V^T
    std::vector<double> roots(n);
    for (std::size_t j = 0; j < n; ++j) roots[j] = std::sqrt(std::max(eig.eigenvalues[j], 0.0));
    std::vector<double> res(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eig.eigenvectors[i * n + k] * roots[k] * eig.eigenvectors[j * n + k];
            res[i * n + j] = s;
        }
    return PsdMatrix(n, std::move(res));
}

double bures_wasserstein(const PsdMatrix& a, const PsdMatrix& b) {
    if (a.order() != b.order()) throw ConfigError("bures_wasserstein: order mismatch");
    const std::size_t n = a.order();
    if (a.entries() == b.entries()) return 0.0;
    if (n == 1) {
        // 1-d closed form; avoids the cancellation in the trace formula.
        double x = std::max(a(0, 0), 0.0);
        double y = std::max(b(0, 0), 0.0);
        return std::abs(std::sqrt(x) - std::sqrt(y));
    }
    // Canonical argument order makes the result bit-exactly symmetric.
    const PsdMatrix& x = (a.entries() <= b.entries()) ? a : b;
    const PsdMatrix& y = (a.entries() <= b.entries()) ? b : a;
    PsdMatrix sx = sqrt_psd(x);
    std::vector<double> inner = matmul(matmul(sx.entries(), y.entries(), n), sx.entries(), n);
    PsdMatrix cross = sqrt_psd(PsdMatrix(n, std::move(inner)));
    double radicand = x.trace() + y.trace() - 2.0 * cross.trace();
    if (radicand < 0.0) {
        ++g_clamp_count;
        radicand = 0.0;
    }
    return std::sqrt(radicand);
}

PsdMatrix psd_pushforward(const std::vector<double>& f, std::size_t rows, const PsdMatrix& m) {
    const std::size_t n = m.order();
    if (f.size() != rows * n) throw ConfigError("psd_pushforward: shape mismatch");
    // f * m
    std::vector<double> fm(rows * n, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) fm[i * n + j] += f[i * n + k] * m(k, j);
    // (f * m) * f^T
    std::vector<double> out(rows * rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < rows; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += fm[i * n + k] * f[j * n + k];
            out[i * rows + j] = s;
        }
    return PsdMatrix(rows, std::move(out));
}

PsdMatrix psd_dilate(double r, const PsdMatrix& m) { return m.scaled(r * r); }

PsdMatrix block_diag(const PsdMatrix& m, const PsdMatrix& n) {
    const std::size_t a = m.order();
    const std::size_t b = n.order();
    PsdMatrix out(a + b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < a; ++j) out.at(i, j) = m(i, j);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j) out.at(a + i, a + j) = n(i, j);
    return out;
}

long psd_clamp_count() { return g_clamp_count.load(); }

}  // namespace dilated
