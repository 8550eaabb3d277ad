#pragma once

// Truncated photon-number-basis simulation of the conditional preparation.
// Nothing here uses the coherent-state algebra of cv_core beyond the Complex
// alias, so it serves as an independent check of every closed form.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "catforge/config.hpp"
#include "catforge/cv_core.hpp"
#include "catforge/errors.hpp"
#include "catforge/numerics.hpp"

namespace catforge::fock {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Pure state (or unnormalized functional) on n = 0 .. dim-1.
struct FockVector {
    Vector amps;

    std::size_t dim() const { return static_cast<std::size_t>(amps.size()); }
    double norm() const { return amps.norm(); }
};

// Two-mode amplitudes amps(n, m) for |n>_a |m>_b.
struct TwoModeFock {
    Matrix amps;

    std::size_t dim_a() const { return static_cast<std::size_t>(amps.rows()); }
    std::size_t dim_b() const { return static_cast<std::size_t>(amps.cols()); }
};

struct FockDensity {
    Matrix matrix;

    std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

// Quadrature acceptance interval [center - half_width, center + half_width].
struct HomodyneWindow {
    double center = 0.0;
    double half_width = 0.0;

    static HomodyneWindow make(double center, double half_width) {
        if (!std::isfinite(center) || !std::isfinite(half_width) || !(half_width > 0.0))
            throw DomainError("homodyne window needs finite center and half-width > 0");
        return {center, half_width};
    }
    double lo() const { return center - half_width; }
    double hi() const { return center + half_width; }
};

// N = ceil(a^2 + 10 a + 20): Poisson mean a^2 plus ten standard deviations
// plus a floor, which keeps the coherent tail below 1e-12.
inline std::size_t choose_truncation(double max_amp, const Config& cfg = {}) {
    if (!std::isfinite(max_amp) || max_amp < 0.0) throw DomainError("max_amp must be finite and >= 0");
    const double n = std::ceil(max_amp * max_amp + 10.0 * max_amp + 20.0);
    if (n > static_cast<double>(cfg.max_fock))
        throw TruncationTooLarge("Fock truncation " + std::to_string(static_cast<long long>(n)) +
                                 " exceeds cap " + std::to_string(cfg.max_fock) + " (amplitude " +
                                 std::to_string(max_amp) + ")");
    return static_cast<std::size_t>(n);
}

// e^{-|alpha|^2/2} alpha^n / sqrt(n!), evaluated in log space so that large
// amplitudes do not underflow the prefactor.
inline FockVector coherent_fock(Complex alpha, std::size_t dim) {
    if (dim == 0) throw DomainError("Fock dimension must be >= 1");
    FockVector v{Vector::Zero(static_cast<Eigen::Index>(dim))};
    const double r = std::abs(alpha);
    if (r == 0.0) {
        v.amps(0) = 1.0;
        return v;
    }
    const double log_r = std::log(r);
    const double theta = std::arg(alpha);
    for (std::size_t n = 0; n < dim; ++n) {
        const double nn = static_cast<double>(n);
        const double log_mag = -0.5 * r * r + nn * log_r - 0.5 * std::lgamma(nn + 1.0);
        v.amps(static_cast<Eigen::Index>(n)) = std::polar(std::exp(log_mag), nn * theta);
    }
    return v;
}

// Hermite functions h_n(x) = <x|n> via the normalized three-term recurrence.
inline FockVector quadrature_eigvec(double x, std::size_t dim) {
    if (dim == 0) throw DomainError("Fock dimension must be >= 1");
    FockVector v{Vector::Zero(static_cast<Eigen::Index>(dim))};
    double prev = 0.0;
    double cur = kInvPiQuarter * std::exp(-0.5 * x * x);
    v.amps(0) = cur;
    for (std::size_t n = 0; n + 1 < dim; ++n) {
        const double nn = static_cast<double>(n);
        const double next = x * std::sqrt(2.0 / (nn + 1.0)) * cur - std::sqrt(nn / (nn + 1.0)) * prev;
        prev = cur;
        cur = next;
        v.amps(static_cast<Eigen::Index>(n + 1)) = cur;
    }
    return v;
}

// Sum of coherent expansions, no normalization.
inline FockVector to_fock(const CoherentSuperposition& s, std::size_t dim) {
    FockVector v{Vector::Zero(static_cast<Eigen::Index>(dim))};
    for (const auto& t : s.terms()) v.amps += t.weight * coherent_fock(t.amplitude, dim).amps;
    return v;
}

inline TwoModeFock product(const FockVector& a, const FockVector& b) {
    return {a.amps * b.amps.transpose()};
}

// Balanced beam splitter a^dag -> (c^dag + d^dag)/sqrt2, b^dag -> (c^dag - d^dag)/sqrt2.
// Each input |n,m> expands binomially into the block p + q = n + m; outputs
// with p or q >= dim are dropped, so the map is exactly unitary on the
// subspace of total photon number < dim.
inline TwoModeFock apply_bs(const TwoModeFock& in) {
    if (in.dim_a() != in.dim_b()) throw DimensionMismatch("apply_bs requires equal mode dimensions");
    const std::size_t dim = in.dim_a();
    std::vector<double> lf(2 * dim + 1);
    for (std::size_t k = 0; k < lf.size(); ++k) lf[k] = std::lgamma(static_cast<double>(k) + 1.0);
    const auto lbinom = [&](std::size_t n, std::size_t k) { return lf[n] - lf[k] - lf[n - k]; };
    const double half_ln2 = 0.5 * std::numbers::ln2;

    TwoModeFock out{Matrix::Zero(in.amps.rows(), in.amps.cols())};
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t m = 0; m < dim; ++m) {
            const Complex c = in.amps(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
            if (c == Complex{}) continue;
            const std::size_t s = n + m;
            const double base = -0.5 * (lf[n] + lf[m]) - half_ln2 * static_cast<double>(s);
            for (std::size_t j = 0; j <= n; ++j) {
                for (std::size_t k = 0; k <= m; ++k) {
                    const std::size_t p = j + k;
                    const std::size_t q = s - p;
                    if (p >= dim || q >= dim) continue;
                    const double mag = std::exp(base + lbinom(n, j) + lbinom(m, k) + 0.5 * (lf[p] + lf[q]));
                    const double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
                    out.amps(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) += sign * mag * c;
                }
            }
        }
    }
    return out;
}

struct Projection {
    FockVector vector;  // unnormalized mode-b state
    double density;     // |v|^2, probability density of the outcome
};

// Projects mode a onto the quadrature eigenstate |X = x>.
inline Projection project_quadrature(const TwoModeFock& state, double x, const Config& cfg = {}) {
    const FockVector h = quadrature_eigvec(x, state.dim_a());
    Projection out{{state.amps.transpose() * h.amps}, 0.0};
    out.density = out.vector.amps.squaredNorm();
    if (out.density < cfg.zero_probability)
        throw ZeroProbability("quadrature outcome x = " + std::to_string(x) + " has zero probability density");
    return out;
}

// Marginal density p(x) of the mode-a quadrature; unlike project_quadrature
// this accepts outcomes of vanishing probability.
inline double quadrature_density(const TwoModeFock& state, double x) {
    return (state.amps.transpose() * quadrature_eigvec(x, state.dim_a()).amps).squaredNorm();
}

struct WindowedState {
    FockDensity rho;
    double probability;
};

// rho proportional to the integral of v(x) v(x)^dagger over the window, by
// composite order-16 Gauss-Legendre.
inline WindowedState window_state(const TwoModeFock& state, const HomodyneWindow& window, std::size_t panels,
                                  const Config& cfg = {}) {
    if (!(window.half_width > 0.0)) throw DomainError("window half-width must be > 0");
    if (panels < 1) throw DomainError("window integration needs at least one panel");
    const auto dim_b = static_cast<Eigen::Index>(state.dim_b());
    Matrix rho = Matrix::Zero(dim_b, dim_b);
    const Matrix at = state.amps.transpose();
    numerics::for_each_gauss_node(window.lo(), window.hi(), panels, [&](numerics::Node node) {
        const Vector v = at * quadrature_eigvec(node.x, state.dim_a()).amps;
        rho.noalias() += node.w * (v * v.adjoint());
    });
    const double prob = rho.trace().real();
    if (!(prob >= cfg.zero_probability)) throw ZeroProbability("detection window has zero probability");
    rho /= prob;
    rho = 0.5 * (rho + rho.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
    const double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -cfg.eigenvalue_floor)
        throw NumericalError("windowed density has eigenvalue " + std::to_string(min_eig));
    if (min_eig < 0.0) {
        const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
        rho = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().adjoint();
        rho /= rho.trace().real();
    }
    return {{rho}, prob};
}

// <target|rho|target>
inline double fidelity(const FockDensity& rho, const FockVector& target) {
    if (rho.dim() != target.dim()) throw DimensionMismatch("fidelity: density and target dimensions differ");
    return std::clamp((target.amps.adjoint() * rho.matrix * target.amps)(0).real(), 0.0, 1.0);
}

// |<target|v>|^2
inline double fidelity(const FockVector& v, const FockVector& target) {
    if (v.dim() != target.dim()) throw DimensionMismatch("fidelity: vector dimensions differ");
    return std::clamp(std::norm(target.amps.dot(v.amps)), 0.0, 1.0);
}

// Both copies of the normalized source (|a> + |b>) interfered on the beam
// splitter, entirely in the truncated number basis.
inline TwoModeFock simulate_interference(Complex a, Complex b, std::size_t dim) {
    FockVector src{coherent_fock(a, dim).amps + coherent_fock(b, dim).amps};
    src.amps.normalize();
    return apply_bs(product(src, src));
}

// Splits v = A |0> + B (|s> + |-s>) using that the cat part alone populates
// n >= 1. Requires s != 0.
inline std::pair<Complex, Complex> decompose_vacuum_cat(const FockVector& v, double s) {
    if (s == 0.0) throw DomainError("cat amplitude must be nonzero to separate it from the vacuum");
    const Vector cat = coherent_fock(s, v.dim()).amps + coherent_fock(-s, v.dim()).amps;
    const Eigen::Index tail = cat.size() - 1;
    const Complex b = cat.tail(tail).dot(v.amps.tail(tail)) / cat.tail(tail).squaredNorm();
    const Complex a = v.amps(0) - b * cat(0);
    return {a, b};
}

}  // namespace catforge::fock
