#pragma once

// Conditional cat-state preparation: two copies of |a> + |b> with
// a = alpha0 exp(i(pi/2 + phi/2)), b = alpha0 exp(i(pi/2 - phi/2)) meet on a
// balanced beam splitter, mode 3 is measured in X and the outcome selects the
// mode-4 state c1 |0> + c2 (|s> + |-s>), s = sqrt2 alpha0 sin(phi/2).
//
// All normalizations are computed from the raw four-term expansion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "catforge/config.hpp"
#include "catforge/cv_core.hpp"
#include "catforge/errors.hpp"
#include "catforge/fock_oracle.hpp"
#include "catforge/numerics.hpp"

namespace catforge {

using fock::HomodyneWindow;

// Source amplitude magnitude and superposition angle. phi is stored in its
// canonical range [0, pi]; negative angles map by evenness.
struct ProtocolParams {
    double alpha0 = 0.0;
    double phi = 0.0;

    static ProtocolParams make(double alpha0, double phi) {
        if (!std::isfinite(alpha0) || alpha0 < 0.0) throw DomainError("alpha0 must be finite and >= 0");
        if (!std::isfinite(phi)) throw DomainError("phi must be finite");
        phi = std::abs(phi);
        if (phi > std::numbers::pi) throw DomainError("|phi| must not exceed pi");
        return {alpha0, phi};
    }
};

struct Separations {
    double d0;  // |a - b|
    double d;   // distance between the two output cat components
};

struct PreparedStateReport {
    Complex c1;
    Complex c2;
    double ratio;
    double fidelity;
    double density_at_x;
    Separations separations;
};

namespace protocol {

inline std::pair<Complex, Complex> source_amplitudes(const ProtocolParams& p) {
    const double half = 0.5 * std::numbers::pi;
    return {std::polar(p.alpha0, half + 0.5 * p.phi), std::polar(p.alpha0, half - 0.5 * p.phi)};
}

// Amplitude s of the output cat |s> + |-s>.
inline double cat_amplitude(const ProtocolParams& p) {
    return std::numbers::sqrt2 * p.alpha0 * std::sin(0.5 * p.phi);
}

inline Separations separations(const ProtocolParams& p) {
    const double d0 = 2.0 * p.alpha0 * std::sin(0.5 * p.phi);
    return {d0, std::numbers::sqrt2 * d0};
}

inline CoherentSuperposition source_state(const ProtocolParams& p, const Config& cfg = {}) {
    const auto [a, b] = source_amplitudes(p);
    return CoherentSuperposition({{1.0, a}, {1.0, b}}, cfg).normalized(cfg);
}

// Output of the beam splitter for two source copies, normalized through the
// Gram matrix of the expanded product terms.
inline TwoModeSuperposition interfere(const ProtocolParams& p, const Config& cfg = {}) {
    const auto [a, b] = source_amplitudes(p);
    const CoherentSuperposition raw({{1.0, a}, {1.0, b}}, cfg);
    return beam_splitter_50_50(tensor(raw, raw, cfg), cfg).normalized(cfg);
}

// Even cat on the real axis. Collapses to the vacuum when the components
// coalesce; with require_cat set that is an error instead.
inline CoherentSuperposition ideal_cat(const ProtocolParams& p, bool require_cat = false, const Config& cfg = {}) {
    const double s = cat_amplitude(p);
    if (require_cat && 2.0 * s <= cfg.coalesce_tol)
        throw DegenerateState("cat components coalesce (alpha0 sin(phi/2) ~ 0)");
    return CoherentSuperposition::even_cat(s, cfg);
}

// Amplitude density of the vacuum branch at outcome x (x = 0 gives c1).
inline Complex c1(const ProtocolParams& p, double x = 0.0) {
    const auto [a, b] = source_amplitudes(p);
    return quadrature_overlap(x, std::numbers::sqrt2 * a) + quadrature_overlap(x, std::numbers::sqrt2 * b);
}

// Amplitude density of the cat branch at outcome x; pi^{-1/4} at x = 0.
inline Complex c2(const ProtocolParams& p, double x = 0.0) {
    const auto [a, b] = source_amplitudes(p);
    return quadrature_overlap(x, (a + b) / std::numbers::sqrt2);
}

// 2 exp(-alpha0^2 (1 - cos phi)) |cos(alpha0^2 sin phi)|
inline double ratio_exact(const ProtocolParams& p) {
    const double a2 = p.alpha0 * p.alpha0;
    const double sh = std::sin(0.5 * p.phi);
    return 2.0 * std::exp(-2.0 * a2 * sh * sh) * std::abs(std::cos(a2 * std::sin(p.phi)));
}

inline double ratio_first_order(const ProtocolParams& p) {
    return 2.0 * std::abs(std::cos(p.alpha0 * p.alpha0 * p.phi));
}

inline double ratio_second_order(const ProtocolParams& p) {
    const double a2 = p.alpha0 * p.alpha0;
    return std::exp(-0.5 * a2 * p.phi * p.phi) * 2.0 * std::abs(std::cos(a2 * p.phi));
}

// Second-order ratio written through the small-angle separation
// d = sqrt2 alpha0 phi: exp(-d^2/4) 2 |cos(alpha0 d / sqrt2)|.
inline double ratio_second_order_from_separation(double alpha0, double d) {
    return std::exp(-0.25 * d * d) * 2.0 * std::abs(std::cos(alpha0 * d / std::numbers::sqrt2));
}

inline void require_open_angle(double phi) {
    if (!(phi > 0.0 && phi < std::numbers::pi)) throw DomainError("phi must lie in (0, pi)");
}

inline double alpha_min_first_order(double phi) {
    require_open_angle(phi);
    return std::sqrt(std::numbers::pi / (2.0 * phi));
}

// k-th zero of cos(alpha0^2 sin phi).
inline double alpha_min_exact(double phi, int k) {
    require_open_angle(phi);
    if (k < 0) throw DomainError("zero index k must be >= 0");
    return std::sqrt((0.5 * std::numbers::pi + std::numbers::pi * k) / std::sin(phi));
}

namespace detail {

// Unnormalized mode-4 terms after projecting mode 3 of psi on |X = x>.
inline std::vector<CoherentTerm> projected_terms(const TwoModeSuperposition& psi, double x) {
    std::vector<CoherentTerm> out;
    out.reserve(psi.size());
    for (const auto& t : psi.terms()) out.push_back({t.weight * quadrature_overlap(x, t.amp_a), t.amp_b});
    return out;
}

}  // namespace detail

// Marginal probability density of X in mode 3.
inline double homodyne_density(const ProtocolParams& p, double x, const Config& cfg = {}) {
    const auto terms = detail::projected_terms(interfere(p, cfg), x);
    return std::max(0.0, terms_inner(terms, terms).real());
}

inline CoherentSuperposition conditional_state(const ProtocolParams& p, double x, const Config& cfg = {}) {
    const auto terms = detail::projected_terms(interfere(p, cfg), x);
    const double density = terms_inner(terms, terms).real();
    if (!(density >= cfg.zero_probability))
        throw ZeroProbability("outcome x = " + std::to_string(x) + " has zero probability density");
    return CoherentSuperposition(terms, cfg).normalized(cfg);
}

inline PreparedStateReport report(const ProtocolParams& p, double x, const Config& cfg = {}) {
    const auto state = conditional_state(p, x, cfg);
    PreparedStateReport r{};
    r.c1 = c1(p, x);
    r.c2 = c2(p, x);
    r.ratio = std::abs(r.c1) / std::abs(r.c2);
    r.fidelity = std::min(1.0, state_fidelity(state, ideal_cat(p, false, cfg)));
    r.density_at_x = homodyne_density(p, x, cfg);
    r.separations = separations(p);
    return r;
}

struct WindowMetrics {
    double probability;
    double fidelity;
};

// Truncated-basis rendering of the interference output; reusable across
// windows for the same parameters.
struct OracleState {
    std::size_t dim;
    fock::TwoModeFock state;
    fock::FockVector cat;  // normalized ideal cat in the same basis
};

inline OracleState oracle_state(const ProtocolParams& p, const Config& cfg = {}) {
    const std::size_t dim = fock::choose_truncation(std::numbers::sqrt2 * p.alpha0, cfg);
    const auto [a, b] = source_amplitudes(p);
    fock::FockVector cat = fock::to_fock(ideal_cat(p, false, cfg), dim);
    cat.amps.normalize();
    return {dim, fock::simulate_interference(a, b, dim), std::move(cat)};
}

inline WindowMetrics window_metrics(const OracleState& oracle, const HomodyneWindow& w, const Config& cfg = {}) {
    const std::size_t panels = numerics::panels_for(w.lo(), w.hi(), cfg.window_panel_width);
    const auto windowed = fock::window_state(oracle.state, w, panels, cfg);
    return {std::min(1.0, windowed.probability), fock::fidelity(windowed.rho, oracle.cat)};
}

// Success probability and fidelity to the ideal cat for a finite window,
// computed through the truncated-basis density matrix.
inline WindowMetrics window_metrics(const ProtocolParams& p, const HomodyneWindow& w, const Config& cfg = {}) {
    return window_metrics(oracle_state(p, cfg), w, cfg);
}

// Same quantities from the coherent-state algebra, integrating the scalar
// branch weights over the window.
inline WindowMetrics window_metrics_analytic(const ProtocolParams& p, const HomodyneWindow& w,
                                             std::size_t panels = 0, const Config& cfg = {}) {
    if (panels == 0) panels = numerics::panels_for(w.lo(), w.hi(), cfg.window_panel_width);
    const auto psi = interfere(p, cfg);
    const auto cat = ideal_cat(p, false, cfg);
    double prob = 0.0;
    double overlap = 0.0;
    numerics::for_each_gauss_node(w.lo(), w.hi(), panels, [&](numerics::Node n) {
        const auto terms = detail::projected_terms(psi, n.x);
        prob += n.w * terms_inner(terms, terms).real();
        overlap += n.w * std::norm(terms_inner(cat.terms(), terms));
    });
    if (!(prob >= cfg.zero_probability)) throw ZeroProbability("detection window has zero probability");
    return {std::min(1.0, prob), std::min(1.0, overlap / prob)};
}

}  // namespace protocol
}  // namespace catforge
