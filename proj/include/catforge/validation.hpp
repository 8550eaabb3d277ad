#pragma once

// Cross-representation harness: every closed-form protocol quantity against
// its truncated-Fock counterpart on a parameter grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "catforge/config.hpp"
#include "catforge/fock_oracle.hpp"
#include "catforge/protocol.hpp"

namespace catforge {

inline const std::vector<double> kValidationAlpha0{0.5, 1.0, 2.0, 3.0};
inline const std::vector<double> kValidationPhi{0.05, 0.1, 0.5};

struct Deviation {
    std::string quantity;
    double alpha0;
    double phi;
    double value;
};

struct ValidationResult {
    std::vector<Deviation> deviations;  // one entry per quantity and grid point

    Deviation worst() const {
        return *std::max_element(deviations.begin(), deviations.end(),
                                 [](const Deviation& a, const Deviation& b) { return a.value < b.value; });
    }
    double max_deviation() const { return deviations.empty() ? 0.0 : worst().value; }
    bool passed(double tol) const { return max_deviation() <= tol; }
};

// Fock-oracle ratio |c1/c2|: full interference plus projection at x = 0,
// split into vacuum and cat parts.
inline double oracle_ratio(const ProtocolParams& p, const protocol::OracleState& oracle, const Config& cfg = {}) {
    const auto proj = fock::project_quadrature(oracle.state, 0.0, cfg);
    const auto [vac, cat] = fock::decompose_vacuum_cat(proj.vector, protocol::cat_amplitude(p));
    return std::abs(vac) / std::abs(cat);
}

inline ValidationResult run_validation(std::span<const double> alpha0s, std::span<const double> phis,
                                       const Config& cfg = {}) {
    ValidationResult out;
    const double window_half_width = 0.2;
    const double density_points[] = {0.0, 0.5, -1.3};

    for (double phi : phis) {
        for (double alpha0 : alpha0s) {
            const auto p = ProtocolParams::make(alpha0, phi);
            const auto record = [&](std::string q, double v) { out.deviations.push_back({std::move(q), alpha0, phi, v}); };
            const auto oracle = protocol::oracle_state(p, cfg);
            const std::size_t dim = oracle.dim;
            const auto [a, b] = protocol::source_amplitudes(p);

            const auto h0 = fock::quadrature_eigvec(0.0, dim);
            const Complex c1_fock = h0.amps.dot(fock::coherent_fock(std::numbers::sqrt2 * a, dim).amps) +
                                    h0.amps.dot(fock::coherent_fock(std::numbers::sqrt2 * b, dim).amps);
            const Complex c2_fock = h0.amps.dot(fock::coherent_fock((a + b) / std::numbers::sqrt2, dim).amps);
            record("c1", std::abs(protocol::c1(p) - c1_fock));
            record("c2", std::abs(protocol::c2(p) - c2_fock));
            record("ratio", std::abs(protocol::ratio_exact(p) - oracle_ratio(p, oracle, cfg)));

            double dens = 0.0;
            for (double x : density_points) {
                const auto proj = fock::project_quadrature(oracle.state, x, cfg);
                dens = std::max(dens, std::abs(protocol::homodyne_density(p, x, cfg) - proj.density));
            }
            record("density", dens);

            // Conditional state at x = 0, compared as vectors after fixing the global phase.
            const auto proj = fock::project_quadrature(oracle.state, 0.0, cfg);
            fock::Vector oracle_vec = proj.vector.amps.normalized();
            fock::Vector analytic_vec = fock::to_fock(protocol::conditional_state(p, 0.0, cfg), dim).amps;
            analytic_vec.normalize();
            const Complex ov = analytic_vec.dot(oracle_vec);
            const Complex phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : Complex{1.0};
            record("conditional_state", (oracle_vec - phase * analytic_vec).norm());

            const auto w = HomodyneWindow::make(0.0, window_half_width);
            const auto wo = protocol::window_metrics(oracle, w, cfg);
            const auto wa = protocol::window_metrics_analytic(p, w, 0, cfg);
            record("window_probability", std::abs(wo.probability - wa.probability));
            record("window_fidelity", std::abs(wo.fidelity - wa.fidelity));
        }
    }
    return out;
}

}  // namespace catforge
