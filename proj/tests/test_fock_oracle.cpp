#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "catforge/fock_oracle.hpp"
#include "catforge/protocol.hpp"
#include "oracles.hpp"

using namespace catforge;
using namespace catforge::fock;
using catforge::testing::random_amplitude;

namespace {

double tail(const FockVector& v) { return 1.0 - v.amps.squaredNorm(); }

// Truncated basis state |n,m> of the given dimension.
TwoModeFock basis(std::size_t dim, std::size_t n, std::size_t m) {
    TwoModeFock s{Matrix::Zero(dim, dim)};
    s.amps(n, m) = 1.0;
    return s;
}

double photon_number(const TwoModeFock& s) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < s.amps.rows(); ++n)
        for (Eigen::Index m = 0; m < s.amps.cols(); ++m) acc += static_cast<double>(n + m) * std::norm(s.amps(n, m));
    return acc;
}

}  // namespace

TEST(ChooseTruncation, FormulaAndCap) {
    EXPECT_EQ(choose_truncation(0.0), 20u);
    EXPECT_EQ(choose_truncation(2.0), 44u);
    EXPECT_THROW(choose_truncation(100.0), TruncationTooLarge);
    EXPECT_THROW(choose_truncation(-1.0), DomainError);
    Config small;
    small.max_fock = 30;
    EXPECT_THROW(choose_truncation(2.0, small), TruncationTooLarge);
}

TEST(ChooseTruncation, TailBelowBound) {
    // Direct series tail of |alpha| = 2 beyond n = 44.
    double term = std::exp(-4.0);
    double head = 0.0;
    for (int n = 0; n < 44; ++n) {
        head += term;
        term *= 4.0 / (n + 1);
    }
    EXPECT_LE(1.0 - head, 1e-12);
    for (double a : {0.0, 0.5, 1.0, 2.0, 3.5, 5.0, 8.0, 12.0}) {
        const std::size_t n = choose_truncation(a);
        EXPECT_LE(tail(coherent_fock(std::polar(a, 0.7), n)), 1e-12) << a;
    }
}

TEST(CoherentFock, Examples) {
    const auto vac = coherent_fock(0.0, 8);
    EXPECT_EQ(vac.amps(0), Complex(1.0));
    EXPECT_EQ(vac.amps.tail(7).norm(), 0.0);
    EXPECT_NEAR(coherent_fock(1.0, 40).norm(), 1.0, 1e-12);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 30; ++i) {
        const Complex a = random_amplitude(rng, 2.0), b = random_amplitude(rng, 2.0);
        const Complex fock_ov = coherent_fock(a, 60).amps.dot(coherent_fock(b, 60).amps);
        EXPECT_NEAR(std::abs(fock_ov - coherent_overlap(a, b)), 0.0, 1e-10);
    }
}

TEST(CoherentFock, LargeAmplitudeDoesNotUnderflow) {
    const auto v = coherent_fock(Complex{0.0, 45.0}, choose_truncation(45.0));
    EXPECT_NEAR(v.norm(), 1.0, 1e-10);
}

TEST(QuadratureEigvec, ParityAndVacuumOverlap) {
    const auto h = quadrature_eigvec(0.0, 21);
    for (Eigen::Index n = 1; n < h.amps.size(); n += 2) EXPECT_EQ(h.amps(n), Complex{});
    EXPECT_NEAR(std::abs(h.amps.head(20).dot(coherent_fock(0.0, 20).amps) - kInvPiQuarter), 0.0, 1e-12);
}

TEST(QuadratureEigvec, ReproducesQuadratureOverlap) {
    const Complex a{1.0, 0.5};
    const Complex v = quadrature_eigvec(0.7, 60).amps.dot(coherent_fock(a, 60).amps);
    EXPECT_NEAR(std::abs(v - quadrature_overlap(0.7, a)), 0.0, 1e-10);
}

TEST(QuadratureEigvec, RecurrenceMatchesDirectHermite) {
    for (double x = -5.0; x <= 5.0; x += 0.25) {
        const auto h = quadrature_eigvec(x, 31);
        for (int n = 0; n <= 30; ++n)
            EXPECT_NEAR(h.amps(n).real(), catforge::testing::hermite_function_direct(n, x), 1e-10) << n << " " << x;
    }
}

TEST(ApplyBs, VacuumFixed) {
    const auto out = apply_bs(basis(10, 0, 0));
    EXPECT_EQ(out.amps(0, 0), Complex(1.0));
    EXPECT_NEAR(out.amps.norm(), 1.0, 0.0);
    EXPECT_THROW(apply_bs(TwoModeFock{Matrix::Zero(3, 4)}), DimensionMismatch);
}

TEST(ApplyBs, CoherentMapping) {
    std::mt19937_64 rng(29);
    const std::size_t dim = 60;
    for (int i = 0; i < 12; ++i) {
        const Complex a = random_amplitude(rng, 2.0);
        const Complex b = (i % 3 == 0) ? a : random_amplitude(rng, 2.0);
        const auto out = apply_bs(product(coherent_fock(a, dim), coherent_fock(b, dim)));
        const auto expect = product(coherent_fock((a + b) / std::numbers::sqrt2, dim),
                                    coherent_fock((a - b) / std::numbers::sqrt2, dim));
        EXPECT_LE((out.amps - expect.amps).norm(), 1e-8);
    }
}

TEST(ApplyBs, UnitaryOnNumberConservingSubspace) {
    const std::size_t dim = 20;
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    for (std::size_t n = 0; n < dim; ++n)
        for (std::size_t m = 0; n + m < dim; ++m) idx.emplace_back(n, m);
    Matrix u(idx.size(), idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) {
        const auto out = apply_bs(basis(dim, idx[c].first, idx[c].second));
        for (std::size_t r = 0; r < idx.size(); ++r) u(r, c) = out.amps(idx[r].first, idx[r].second);
    }
    const Matrix id = Matrix::Identity(idx.size(), idx.size());
    EXPECT_LE((u.adjoint() * u - id).norm(), 1e-10);
}

TEST(ApplyBs, ConservesPhotonNumber) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    const std::size_t dim = 16;
    for (int i = 0; i < 10; ++i) {
        TwoModeFock s{Matrix::Zero(dim, dim)};
        for (std::size_t n = 0; n < 5; ++n)
            for (std::size_t m = 0; m < 5; ++m) s.amps(n, m) = Complex{g(rng), g(rng)};
        s.amps.normalize();
        EXPECT_NEAR(photon_number(apply_bs(s)), photon_number(s), 1e-10);
    }
}

TEST(ProjectQuadrature, VacuumProduct) {
    const auto vac = coherent_fock(0.0, 20);
    const auto proj = project_quadrature(product(vac, vac), 0.0);
    EXPECT_NEAR(proj.density, 1.0 / std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_NEAR(fidelity(FockVector{proj.vector.amps.normalized()}, vac), 1.0, 1e-15);
}

TEST(ProjectQuadrature, MarginalIntegratesToOne) {
    const auto p = ProtocolParams::make(1.0, 0.1);
    const auto oracle = protocol::oracle_state(p);
    const double total = numerics::integrate(-10.0, 10.0, 200, [&](double x) {
        return quadrature_density(oracle.state, x);
    });
    EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(ProjectQuadrature, ZeroConditionSelectsCat) {
    const auto p = ProtocolParams::make(std::sqrt(std::numbers::pi), std::numbers::pi / 6);
    const auto oracle = protocol::oracle_state(p);
    const auto proj = project_quadrature(oracle.state, 0.0);
    EXPECT_GE(fidelity(FockVector{proj.vector.amps.normalized()}, oracle.cat), 1.0 - 1e-8);
}

TEST(ProjectQuadrature, NullOutcomeRejected) {
    TwoModeFock s{Matrix::Zero(4, 4)};
    s.amps(1, 0) = 1.0;  // h_1(0) = 0
    EXPECT_THROW(project_quadrature(s, 0.0), ZeroProbability);
}

TEST(WindowState, DensityInvariants) {
    const auto p = ProtocolParams::make(1.0, 0.1);
    const auto oracle = protocol::oracle_state(p);
    for (double eps : {1e-3, 0.2, 1.5}) {
        const auto w = window_state(oracle.state, HomodyneWindow::make(0.3, eps), 8);
        EXPECT_LE((w.rho.matrix - w.rho.matrix.adjoint()).norm(), 1e-10);
        EXPECT_NEAR(w.rho.matrix.trace().real(), 1.0, 1e-8);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(w.rho.matrix);
        EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8);
    }
}

TEST(WindowState, Limits) {
    const auto p = ProtocolParams::make(1.0, 0.1);
    const auto oracle = protocol::oracle_state(p);
    const auto proj = project_quadrature(oracle.state, 0.0);
    const FockVector cond{proj.vector.amps.normalized()};

    const auto narrow = window_state(oracle.state, HomodyneWindow::make(0.0, 1e-4), 1);
    EXPECT_GE(fidelity(narrow.rho, cond), 1.0 - 1e-6);

    for (double eps : {1e-3, 1e-2}) {
        const auto w = window_state(oracle.state, HomodyneWindow::make(0.0, eps), 1);
        EXPECT_NEAR(w.probability / (2.0 * eps * proj.density), 1.0, 1e-2);
    }

    const auto wide = window_state(oracle.state, HomodyneWindow::make(0.0, 10.0), 200);
    EXPECT_NEAR(wide.probability, 1.0, 1e-6);
}

TEST(WindowState, Errors) {
    EXPECT_THROW(HomodyneWindow::make(0.0, 0.0), DomainError);
    EXPECT_THROW(HomodyneWindow::make(0.0, -1.0), DomainError);
    const auto vac = coherent_fock(0.0, 8);
    EXPECT_THROW(window_state(product(vac, vac), HomodyneWindow::make(0.0, 0.1), 0), DomainError);
    // Vacuum is ~e^{-2500} at x = 50.
    EXPECT_THROW(window_state(product(vac, vac), HomodyneWindow::make(50.0, 0.1), 1), ZeroProbability);
}

TEST(Fidelity, Examples) {
    const auto v = coherent_fock(Complex{0.3, 0.2}, 30);
    EXPECT_NEAR(fidelity(v, v), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(coherent_fock(0.0, 30), coherent_fock(1.0, 30)), std::exp(-1.0), 1e-12);
    FockDensity mixed{Matrix::Identity(2, 2) * 0.5};
    FockVector target{Vector::Zero(2)};
    target.amps << Complex{0.6, 0.0}, Complex{0.0, 0.8};
    EXPECT_NEAR(fidelity(mixed, target), 0.5, 1e-15);
    EXPECT_THROW(fidelity(mixed, coherent_fock(0.0, 3)), DimensionMismatch);
    EXPECT_THROW(fidelity(coherent_fock(0.0, 2), coherent_fock(0.0, 3)), DimensionMismatch);
}

TEST(DecomposeVacuumCat, RecoversWeights) {
    const std::size_t dim = 40;
    const double s = 0.8;
    const Complex a{0.3, -0.1}, b{-1.2, 0.4};
    FockVector v{a * coherent_fock(0.0, dim).amps + b * (coherent_fock(s, dim).amps + coherent_fock(-s, dim).amps)};
    const auto [ra, rb] = decompose_vacuum_cat(v, s);
    EXPECT_NEAR(std::abs(ra - a), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(rb - b), 0.0, 1e-13);
    EXPECT_THROW(decompose_vacuum_cat(v, 0.0), DomainError);
}
