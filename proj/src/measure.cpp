#include "dilated/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "dilated/errors.hpp"

namespace dilated {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-10;
constexpr double kMomentTol = 1e-8;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Iterative radix-2 complex FFT, in place. sign = -1 forward, +1 inverse
// (inverse is unscaled).
void fft_inplace(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

bool spacing_compatible(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(a, b);
}

bool offsets_commensurable(double oa, double ob, double spacing) {
    double d = (oa - ob) / spacing;
    return std::abs(d - std::round(d)) <= 1e-9 * (1.0 + std::abs(d));
}

}  // namespace

double LatticeMeasure::atom(std::size_t flat_index, int axis) const {
    if (dim == 1) return offset[0] + static_cast<double>(flat_index) * spacing[0];
    std::size_t i = flat_index / shape[1];
    std::size_t j = flat_index % shape[1];
    return axis == 0 ? offset[0] + static_cast<double>(i) * spacing[0]
                     : offset[1] + static_cast<double>(j) * spacing[1];
}

double LatticeMeasure::total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

void LatticeMeasure::validate() const {
    if (dim != 1 && dim != 2) throw ConfigError("LatticeMeasure: dim must be 1 or 2");
    for (double s : spacing)
        if (!(s > 0.0)) throw ConfigError("LatticeMeasure: spacing must be positive");
    for (double w : weights)
        if (w < 0.0) throw ConfigError("LatticeMeasure: negative weight");
    double m = total_mass();
    if (std::abs(m - 1.0) > kMassTol) throw ConfigError("LatticeMeasure: mass " + std::to_string(m));
}

void LatticeMeasure::normalize() {
    double m = total_mass();
    if (m <= 0.0) throw ConfigError("LatticeMeasure: cannot normalize zero mass");
    for (double& w : weights) w /= m;
}

void LatticeMeasure::truncate(double threshold) {
    for (double& w : weights)
        if (w < threshold) w = 0.0;
    if (dim == 1) {
        std::size_t lo = 0;
        std::size_t hi = weights.size();
        while (lo < hi && weights[lo] == 0.0) ++lo;
        while (hi > lo && weights[hi - 1] == 0.0) --hi;
        if (lo == hi) throw ConfigError("LatticeMeasure: truncation removed all mass");
        if (lo > 0 || hi < weights.size()) {
            weights = std::vector<double>(weights.begin() + lo, weights.begin() + hi);
            offset[0] += static_cast<double>(lo) * spacing[0];
            shape = {weights.size()};
        }
    } else {
        std::size_t r0 = shape[0], r1 = 0, c0 = shape[1], c1 = 0;
        for (std::size_t i = 0; i < shape[0]; ++i)
            for (std::size_t j = 0; j < shape[1]; ++j)
                if (weights[i * shape[1] + j] != 0.0) {
                    r0 = std::min(r0, i);
                    r1 = std::max(r1, i + 1);
                    c0 = std::min(c0, j);
                    c1 = std::max(c1, j + 1);
                }
        if (r0 >= r1) throw ConfigError("LatticeMeasure: truncation removed all mass");
        std::vector<double> cropped((r1 - r0) * (c1 - c0));
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = c0; j < c1; ++j)
                cropped[(i - r0) * (c1 - c0) + (j - c0)] = weights[i * shape[1] + j];
        weights = std::move(cropped);
        offset[0] += static_cast<double>(r0) * spacing[0];
        offset[1] += static_cast<double>(c0) * spacing[1];
        shape = {r1 - r0, c1 - c0};
    }
    normalize();
}

int Measure::dim() const {
    return is_lattice() ? lattice().dim : gaussian().dim();
}

LatticeMeasure dirac(std::vector<double> point) {
    LatticeMeasure m;
    m.dim = static_cast<int>(point.size());
    m.offset = std::move(point);
    m.spacing.assign(m.dim, 1.0);
    m.shape.assign(m.dim, 1);
    m.weights = {1.0};
    return m;
}

LatticeMeasure rademacher() {
    LatticeMeasure m;
    m.dim = 1;
    m.spacing = {2.0};
    m.offset = {-1.0};
    m.shape = {2};
    m.weights = {0.5, 0.5};
    return m;
}

LatticeMeasure bernoulli(double p) {
    if (p < 0.0 || p > 1.0) throw ConfigError("bernoulli: p outside [0, 1]");
    LatticeMeasure m;
    m.dim = 1;
    m.spacing = {1.0};
    m.offset = {0.0};
    m.shape = {2};
    m.weights = {1.0 - p, p};
    return m;
}

LatticeMeasure uniform_lattice(double a, double b, std::size_t n) {
    if (n < 1 || !(b > a)) throw ConfigError("uniform_lattice: need b > a and n >= 1");
    LatticeMeasure m;
    m.dim = 1;
    m.spacing = {n > 1 ? (b - a) / static_cast<double>(n - 1) : 1.0};
    m.offset = {a};
    m.shape = {n};
    m.weights.assign(n, 1.0 / static_cast<double>(n));
    return m;
}

LatticeMeasure product(const LatticeMeasure& mx, const LatticeMeasure& my) {
    if (mx.dim != 1 || my.dim != 1) throw ConfigError("product: factors must be 1-d");
    LatticeMeasure m;
    m.dim = 2;
    m.spacing = {mx.spacing[0], my.spacing[0]};
    m.offset = {mx.offset[0], my.offset[0]};
    m.shape = {mx.shape[0], my.shape[0]};
    m.weights.resize(mx.shape[0] * my.shape[0]);
    for (std::size_t i = 0; i < mx.shape[0]; ++i)
        for (std::size_t j = 0; j < my.shape[0]; ++j)
            m.weights[i * my.shape[0] + j] = mx.weights[i] * my.weights[j];
    return m;
}

std::complex<double> char_fn(const Measure& mu, std::span<const double> t) {
    using namespace std::complex_literals;
    if (mu.is_lattice()) {
        const auto& m = mu.lattice();
        if (static_cast<int>(t.size()) != m.dim) throw ConfigError("char_fn: dim mismatch");
        std::complex<double> acc = 0.0;
        if (m.dim == 1) {
            for (std::size_t j = 0; j < m.weights.size(); ++j) {
                double phase = -t[0] * (m.offset[0] + static_cast<double>(j) * m.spacing[0]);
                acc += m.weights[j] * std::complex<double>(std::cos(phase), std::sin(phase));
            }
        } else {
            for (std::size_t i = 0; i < m.shape[0]; ++i)
                for (std::size_t j = 0; j < m.shape[1]; ++j) {
                    double x0 = m.offset[0] + static_cast<double>(i) * m.spacing[0];
                    double x1 = m.offset[1] + static_cast<double>(j) * m.spacing[1];
                    double phase = -(t[0] * x0 + t[1] * x1);
                    acc += m.weights[i * m.shape[1] + j] *
                           std::complex<double>(std::cos(phase), std::sin(phase));
                }
        }
        return acc;
    }
    const auto& g = mu.gaussian();
    if (static_cast<int>(t.size()) != g.dim()) throw ConfigError("char_fn: dim mismatch");
    double dot = 0.0;
    double quad = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        dot += t[i] * g.mean[i];
        for (int j = 0; j < g.dim(); ++j) quad += t[i] * g.covariance(i, j) * t[j];
    }
    // exp(-i<t, m> - t^T Sigma t / 2)
    double amp = std::exp(-0.5 * quad);
    return {amp * std::cos(dot), -amp * std::sin(dot)};
}

namespace detail {

std::vector<double> conv_direct(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double ai = a[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
}

std::vector<double> conv_fft(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t out_n = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(out_n);
    std::vector<std::complex<double>> fa(n, 0.0), fb(n, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fft_inplace(fa, -1);
    fft_inplace(fb, -1);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_inplace(fa, +1);
    std::vector<double> out(out_n);
    for (std::size_t i = 0; i < out_n; ++i) out[i] = std::max(fa[i].real() / static_cast<double>(n), 0.0);
    return out;
}

}  // namespace detail

LatticeMeasure convolve(const LatticeMeasure& mu, const LatticeMeasure& nu) {
    if (mu.dim != nu.dim) throw IncommensurableLattices("convolve: dim mismatch");
    std::vector<double> spacing(mu.dim);
    for (int a = 0; a < mu.dim; ++a) {
        // A one-atom axis is a Dirac factor: its spacing is arbitrary, so it
        // is commensurable with anything and inherits the other spacing.
        bool mu_point = mu.shape[a] == 1;
        bool nu_point = nu.shape[a] == 1;
        spacing[a] = mu_point ? nu.spacing[a] : mu.spacing[a];
        if (mu_point || nu_point) continue;
        if (!spacing_compatible(mu.spacing[a], nu.spacing[a]))
            throw IncommensurableLattices("convolve: spacing mismatch on axis " + std::to_string(a));
        if (!offsets_commensurable(mu.offset[a], nu.offset[a], mu.spacing[a]))
            throw IncommensurableLattices("convolve: offsets not commensurable on axis " +
                                          std::to_string(a));
    }
    LatticeMeasure out;
    out.dim = mu.dim;
    out.spacing = std::move(spacing);
    out.offset.resize(mu.dim);
    for (int a = 0; a < mu.dim; ++a) out.offset[a] = mu.offset[a] + nu.offset[a];
    if (mu.dim == 1) {
        // Direct convolution for small supports, FFT past ~4M products.
        constexpr std::size_t kDirectLimit = std::size_t{1} << 22;
        if (mu.weights.size() * nu.weights.size() <= kDirectLimit)
            out.weights = detail::conv_direct(mu.weights, nu.weights);
        else
            out.weights = detail::conv_fft(mu.weights, nu.weights);
        out.shape = {out.weights.size()};
    } else {
        std::size_t r = mu.shape[0] + nu.shape[0] - 1;
        std::size_t c = mu.shape[1] + nu.shape[1] - 1;
        out.shape = {r, c};
        out.weights.assign(r * c, 0.0);
        for (std::size_t i = 0; i < mu.shape[0]; ++i)
            for (std::size_t j = 0; j < mu.shape[1]; ++j) {
                double w = mu.weights[i * mu.shape[1] + j];
                if (w == 0.0) continue;
                for (std::size_t k = 0; k < nu.shape[0]; ++k)
                    for (std::size_t l = 0; l < nu.shape[1]; ++l)
                        out.weights[(i + k) * c + (j + l)] += w * nu.weights[k * nu.shape[1] + l];
            }
    }
    out.truncate();
    return out;
}

Measure dilate(double c, const Measure& mu) {
    if (!(c > 0.0)) throw ConfigError("dilate: c must be positive");
    if (mu.is_lattice()) {
        LatticeMeasure m = mu.lattice();
        for (int a = 0; a < m.dim; ++a) {
            m.spacing[a] *= c;
            m.offset[a] *= c;
        }
        return m;
    }
    GaussianMeasure g = mu.gaussian();
    for (double& x : g.mean) x *= c;
    g.covariance = g.covariance.scaled(c * c);
    return g;
}

namespace {

bool is_diagonal(const std::vector<double>& f, std::size_t rows, std::size_t cols) {
    if (rows != cols) return false;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (i != j && f[i * cols + j] != 0.0) return false;
    return true;
}

// Rescales one lattice axis by factor d (possibly negative or zero).
// Zero collapses the axis to the single coordinate 0.
void scale_axis(LatticeMeasure& m, int axis, double d) {
    if (d == 0.0) {
        if (m.dim == 1) {
            m = dirac({0.0});
        } else {
            // Sum out the collapsed axis.
            std::size_t keep = (axis == 0) ? m.shape[1] : m.shape[0];
            std::vector<double> w(keep, 0.0);
            for (std::size_t i = 0; i < m.shape[0]; ++i)
                for (std::size_t j = 0; j < m.shape[1]; ++j)
                    w[(axis == 0) ? j : i] += m.weights[i * m.shape[1] + j];
            if (axis == 0) {
                m.shape = {1, keep};
                m.offset[0] = 0.0;
                m.spacing[0] = 1.0;
            } else {
                m.shape = {keep, 1};
                m.offset[1] = 0.0;
                m.spacing[1] = 1.0;
            }
            m.weights = std::move(w);
        }
        return;
    }
    double last = m.offset[axis] + static_cast<double>(m.shape[axis] - 1) * m.spacing[axis];
    if (d > 0.0) {
        m.offset[axis] *= d;
    } else {
        m.offset[axis] = d * last;
        // Reverse the weight array along this axis.
        if (m.dim == 1) {
            std::reverse(m.weights.begin(), m.weights.end());
        } else {
            std::vector<double> w(m.weights.size());
            for (std::size_t i = 0; i < m.shape[0]; ++i)
                for (std::size_t j = 0; j < m.shape[1]; ++j) {
                    std::size_t si = (axis == 0) ? m.shape[0] - 1 - i : i;
                    std::size_t sj = (axis == 1) ? m.shape[1] - 1 - j : j;
                    w[i * m.shape[1] + j] = m.weights[si * m.shape[1] + sj];
                }
            m.weights = std::move(w);
        }
    }
    m.spacing[axis] *= std::abs(d);
}

double smallest_singular_value(const std::vector<double>& f, std::size_t rows, std::size_t cols) {
    // Singular values of f = sqrt of eigenvalues of f^T f (cols x cols).
    PsdMatrix ftf(cols);
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < rows; ++k) s += f[k * cols + i] * f[k * cols + j];
            ftf.at(i, j) = s;
        }
    auto eig = jacobi_eigen(ftf);
    double mn = kInf;
    for (double w : eig.eigenvalues) mn = std::min(mn, std::sqrt(std::max(w, 0.0)));
    return mn;
}

}  // namespace

Measure pushforward_linear(const std::vector<double>& f, std::size_t rows, const Measure& mu) {
    const std::size_t cols = static_cast<std::size_t>(mu.dim());
    if (f.size() != rows * cols) throw ConfigError("pushforward_linear: shape mismatch");
    if (!mu.is_lattice()) {
        const auto& g = mu.gaussian();
        GaussianMeasure out;
        out.mean.assign(rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) out.mean[i] += f[i * cols + j] * g.mean[j];
        out.covariance = psd_pushforward(f, rows, g.covariance);
        return out;
    }
    const LatticeMeasure& m = mu.lattice();
    bool all_zero = std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; });
    if (all_zero) return dirac(std::vector<double>(rows, 0.0));
    if (is_diagonal(f, rows, cols)) {
        LatticeMeasure out = m;
        for (std::size_t a = 0; a < rows; ++a) scale_axis(out, static_cast<int>(a), f[a * cols + a]);
        return out;
    }
    // General map: map atoms and re-bin by nearest-node assignment. Approximate.
    std::vector<std::vector<double>> ys(rows);
    for (auto& y : ys) y.resize(m.atom_count());
    for (std::size_t k = 0; k < m.atom_count(); ++k)
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += f[i * cols + j] * m.atom(k, static_cast<int>(j));
            ys[i][k] = s;
        }
    double in_spacing = *std::min_element(m.spacing.begin(), m.spacing.end());
    double sv = smallest_singular_value(f, rows, cols);
    double bin = in_spacing * std::max(sv, 1e-6);
    LatticeMeasure out;
    out.dim = static_cast<int>(rows);
    out.spacing.assign(rows, bin);
    out.offset.resize(rows);
    std::vector<std::size_t> counts(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        double lo = *std::min_element(ys[i].begin(), ys[i].end());
        double hi = *std::max_element(ys[i].begin(), ys[i].end());
        out.offset[i] = lo;
        counts[i] = static_cast<std::size_t>(std::floor((hi - lo) / bin + 0.5)) + 1;
    }
    if (rows == 1) {
        out.shape = {counts[0]};
        out.weights.assign(counts[0], 0.0);
        for (std::size_t k = 0; k < m.atom_count(); ++k) {
            auto idx = static_cast<std::size_t>(std::floor((ys[0][k] - out.offset[0]) / bin + 0.5));
            out.weights[std::min(idx, counts[0] - 1)] += m.weights[k];
        }
    } else {
        out.shape = {counts[0], counts[1]};
        out.weights.assign(counts[0] * counts[1], 0.0);
        for (std::size_t k = 0; k < m.atom_count(); ++k) {
            auto i = static_cast<std::size_t>(std::floor((ys[0][k] - out.offset[0]) / bin + 0.5));
            auto j = static_cast<std::size_t>(std::floor((ys[1][k] - out.offset[1]) / bin + 0.5));
            i = std::min(i, counts[0] - 1);
            j = std::min(j, counts[1] - 1);
            out.weights[i * counts[1] + j] += m.weights[k];
        }
    }
    out.normalize();
    return out;
}

std::vector<double> expectation(const Measure& mu) {
    if (!mu.is_lattice()) return mu.gaussian().mean;
    const auto& m = mu.lattice();
    std::vector<double> mean(m.dim, 0.0);
    for (std::size_t k = 0; k < m.atom_count(); ++k)
        for (int a = 0; a < m.dim; ++a) mean[a] += m.weights[k] * m.atom(k, a);
    return mean;
}

PsdMatrix variance_matrix(const Measure& mu) {
    if (!mu.is_lattice()) return mu.gaussian().covariance;
    const auto& m = mu.lattice();
    std::vector<double> mean = expectation(mu);
    PsdMatrix cov(m.dim);
    for (std::size_t k = 0; k < m.atom_count(); ++k)
        for (int a = 0; a < m.dim; ++a)
            for (int b = 0; b < m.dim; ++b)
                cov.at(a, b) += m.weights[k] * (m.atom(k, a) - mean[a]) * (m.atom(k, b) - mean[b]);
    return cov;
}

PsdMatrix second_moment(const Measure& mu) {
    if (!mu.is_lattice()) {
        const auto& g = mu.gaussian();
        PsdMatrix out = g.covariance;
        for (int a = 0; a < g.dim(); ++a)
            for (int b = 0; b < g.dim(); ++b) out.at(a, b) += g.mean[a] * g.mean[b];
        return out;
    }
    const auto& m = mu.lattice();
    PsdMatrix out(m.dim);
    for (std::size_t k = 0; k < m.atom_count(); ++k)
        for (int a = 0; a < m.dim; ++a)
            for (int b = 0; b < m.dim; ++b) out.at(a, b) += m.weights[k] * m.atom(k, a) * m.atom(k, b);
    return out;
}

double abs_moment(const Measure& mu, double l) {
    if (!mu.is_lattice()) {
        const auto& g = mu.gaussian();
        if (g.dim() != 1) throw NotInDomain("abs_moment: Gaussian closed form implemented in 1-d only");
        if (g.mean[0] != 0.0) throw NotInDomain("abs_moment: Gaussian closed form requires mean 0");
        double sigma = std::sqrt(g.covariance(0, 0));
        return std::pow(sigma, l) * std::pow(2.0, l / 2.0) * std::tgamma((l + 1.0) / 2.0) /
               std::sqrt(std::numbers::pi);
    }
    const auto& m = mu.lattice();
    double acc = 0.0;
    for (std::size_t k = 0; k < m.atom_count(); ++k) {
        double nrm = 0.0;
        for (int a = 0; a < m.dim; ++a) nrm = std::max(nrm, std::abs(m.atom(k, a)));
        acc += m.weights[k] * std::pow(nrm, l);
    }
    return acc;
}

DualGrid DualGrid::make(int dim, double r_min, double r_max, std::size_t n_radii,
                        std::size_t extra_dirs, unsigned seed) {
    if (!(r_min > 0.0) || !(r_max > r_min) || n_radii < 2)
        throw ConfigError("DualGrid: invalid radius range");
    DualGrid g;
    g.radii.resize(n_radii);
    const double lo = std::log(r_min);
    const double hi = std::log(r_max);
    for (std::size_t i = 0; i < n_radii; ++i)
        g.radii[i] =
            std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_radii - 1));
    if (dim == 1) {
        g.directions = {{1.0}, {-1.0}};
    } else if (dim == 2) {
        g.directions = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
        std::mt19937_64 rng(seed);
        for (std::size_t k = 0; k < extra_dirs; ++k) {
            double u = static_cast<double>(rng() >> 11) * 0x1p-53;
            double ang = 2.0 * std::numbers::pi * u;
            double c = std::cos(ang);
            double s = std::sin(ang);
            double l1 = std::abs(c) + std::abs(s);
            g.directions.push_back({c / l1, s / l1});
        }
    } else {
        throw ConfigError("DualGrid: dim must be 1 or 2");
    }
    return g;
}

namespace {

bool moments_match(const Measure& mu, const Measure& nu, double l) {
    if (l > 1.0) {
        auto ma = expectation(mu);
        auto mb = expectation(nu);
        for (std::size_t i = 0; i < ma.size(); ++i)
            if (std::abs(ma[i] - mb[i]) > kMomentTol) return false;
    }
    if (l > 2.0) {
        PsdMatrix sa = second_moment(mu);
        PsdMatrix sb = second_moment(nu);
        if (sa.max_abs_diff(sb) > kMomentTol) return false;
    }
    return true;
}

}  // namespace

double fourier_l_distance(const Measure& mu, const Measure& nu, double l, const DualGrid& grid) {
    if (l < 1.0) throw ConfigError("fourier_l_distance: l must be >= 1");
    if (mu.dim() != nu.dim()) throw ConfigError("fourier_l_distance: dim mismatch");
    if (!moments_match(mu, nu, l)) return kInf;

    struct Point {
        double radius;
        const std::vector<double>* dir;
    };
    std::vector<Point> points;
    points.reserve(grid.radii.size() * grid.directions.size());
    for (const auto& d : grid.directions)
        for (double r : grid.radii) points.push_back({r, &d});

    auto eval_max = [&](std::size_t begin, std::size_t end) {
        double best = 0.0;
        std::vector<double> t(mu.dim());
        for (std::size_t k = begin; k < end; ++k) {
            const auto& p = points[k];
            for (int a = 0; a < mu.dim(); ++a) t[a] = p.radius * (*p.dir)[a];
            double num = std::abs(char_fn(mu, t) - char_fn(nu, t));
            best = std::max(best, num / std::pow(p.radius, l));
        }
        return best;
    };

    double sup = 0.0;
    const int threads = std::max(grid.threads, 1);
    if (threads == 1 || points.size() < 64) {
        sup = eval_max(0, points.size());
    } else {
        std::vector<double> partial(threads, 0.0);
        std::vector<std::thread> pool;
        const std::size_t chunk = (points.size() + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            std::size_t b = std::min(points.size(), w * chunk);
            std::size_t e = std::min(points.size(), (w + 1) * chunk);
            pool.emplace_back([&, w, b, e] { partial[w] = eval_max(b, e); });
        }
        for (auto& th : pool) th.join();
        sup = *std::max_element(partial.begin(), partial.end());
    }
    return std::pow(sup, 1.0 / l);
}

}  // namespace dilated
