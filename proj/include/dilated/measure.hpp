#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "dilated/psd.hpp"

namespace dilated {

/// Discrete probability measure supported on a uniform lattice in R^d,
/// d in {1, 2}. Atom coordinate along axis a of index j is
/// offset[a] + j * spacing[a]. Weights are row-major (shape[0] x shape[1]).
struct LatticeMeasure {
    int dim = 1;
    std::vector<double> spacing;                // per axis, > 0
    std::vector<double> offset;                 // per axis
    std::vector<std::size_t> shape;             // per axis atom counts
    std::vector<double> weights;                // row-major, nonnegative

    std::size_t atom_count() const { return weights.size(); }
    double atom(std::size_t flat_index, int axis) const;
    double total_mass() const;

    /// Checks weight nonnegativity and total mass within 1e-10 of 1.
    void validate() const;
    void normalize();
    /// Drops atoms with weight < threshold, trims empty borders, renormalizes.
    void truncate(double threshold = 1e-15);
};

struct GaussianMeasure {
    std::vector<double> mean;
    PsdMatrix covariance;

    int dim() const { return static_cast<int>(mean.size()); }
};

/// A probability measure on R^d: lattice-supported or analytic Gaussian.
/// Diracs are one-atom lattices.
struct Measure {
    std::variant<LatticeMeasure, GaussianMeasure> value;

    Measure() = default;
    Measure(LatticeMeasure m) : value(std::move(m)) {}
    Measure(GaussianMeasure m) : value(std::move(m)) {}

    bool is_lattice() const { return std::holds_alternative<LatticeMeasure>(value); }
    const LatticeMeasure& lattice() const { return std::get<LatticeMeasure>(value); }
    const GaussianMeasure& gaussian() const { return std::get<GaussianMeasure>(value); }
    int dim() const;
};

// Constructors for the standard test measures.
LatticeMeasure dirac(std::vector<double> point);
LatticeMeasure rademacher();                        // atoms +-1, weights 1/2
LatticeMeasure bernoulli(double p);                 // atoms {0: 1-p, 1: p}
LatticeMeasure uniform_lattice(double a, double b, std::size_t n);
/// Independent product of two 1-d lattices (result is 2-d).
LatticeMeasure product(const LatticeMeasure& mx, const LatticeMeasure& my);

std::complex<double> char_fn(const Measure& mu, std::span<const double> t);

/// Exact convolution; requires equal dims, spacing matching to relative 1e-9
/// and offsets commensurable (difference an integer multiple of the spacing
/// within 1e-9). Throws IncommensurableLattices otherwise.
LatticeMeasure convolve(const LatticeMeasure& mu, const LatticeMeasure& nu);

Measure dilate(double c, const Measure& mu);

/// Pushforward along a linear map f (row-major, rows x cols, cols = mu.dim()).
/// Exact for Gaussians and for scalar/diagonal f on lattices; general lattice
/// maps are re-binned by nearest-node assignment and are approximate.
Measure pushforward_linear(const std::vector<double>& f, std::size_t rows, const Measure& mu);

std::vector<double> expectation(const Measure& mu);
/// Centered second-moment matrix.
PsdMatrix variance_matrix(const Measure& mu);
/// Uncentered second-moment matrix E[x x^T].
PsdMatrix second_moment(const Measure& mu);
/// E[ ||x||_inf ^ l ]; lattice only (Gaussian throws NotInDomain).
double abs_moment(const Measure& mu, double l);

/// Discretized dual domain for the Fourier l-distance: log-spaced radii
/// times l1-unit directions (all +- axis directions plus seeded random ones
/// in dimension 2).
struct DualGrid {
    std::vector<double> radii;
    std::vector<std::vector<double>> directions;  // each with l1 norm 1
    int threads = 1;

    static DualGrid make(int dim, double r_min = 1e-2, double r_max = 1e2,
                         std::size_t n_radii = 64, std::size_t extra_dirs = 14,
                         unsigned seed = 42);
};

/// Grid lower bound of (sup_t |phi_mu(t) - phi_nu(t)| / ||t||_1^l)^(1/l).
/// Returns +inf when moments of integer order below l disagree beyond 1e-8
/// (mean for l in (1, 2]; mean and second-moment matrix for l in (2, 3)).
double fourier_l_distance(const Measure& mu, const Measure& nu, double l, const DualGrid& grid);

namespace detail {
std::vector<double> conv_direct(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> conv_fft(const std::vector<double>& a, const std::vector<double>& b);
}  // namespace detail

}  // namespace dilated
