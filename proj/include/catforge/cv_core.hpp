#pragma once

// Exact algebra on finite superpositions of coherent states.
//
// Quadrature convention: X = (a + a^dagger)/sqrt(2), so that
//   <x|alpha> = pi^{-1/4} exp(-x^2/2 + sqrt(2) x alpha - alpha^2/2 - |alpha|^2/2).
// Wigner functions are normalized to integrate to one over d^2 gamma.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "catforge/config.hpp"
#include "catforge/errors.hpp"

namespace catforge {

using Complex = std::complex<double>;

inline constexpr double kInvPiQuarter = 0.75112554446494248285870300477622;  // pi^{-1/4}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// <alpha|beta>
inline Complex coherent_overlap(Complex alpha, Complex beta) {
    return std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(alpha) * beta);
}

// <X = x|alpha>, an amplitude density in x.
inline Complex quadrature_overlap(double x, Complex alpha) {
    return kInvPiQuarter *
           std::exp(-0.5 * x * x + std::numbers::sqrt2 * x * alpha - 0.5 * alpha * alpha - 0.5 * std::norm(alpha));
}

struct CoherentTerm {
    Complex weight;
    Complex amplitude;
};

// Weighted sum of coherent states. Terms with amplitudes within
// Config::coalesce_tol of each other are merged on construction, and terms
// whose weight is exactly zero are dropped.
class CoherentSuperposition {
public:
    explicit CoherentSuperposition(std::vector<CoherentTerm> terms, const Config& cfg = {}) {
        for (const auto& t : terms) {
            if (!is_finite(t.weight) || !is_finite(t.amplitude))
                throw DomainError("coherent superposition term is not finite");
            bool merged = false;
            for (auto& kept : terms_) {
                if (std::abs(kept.amplitude - t.amplitude) <= cfg.coalesce_tol) {
                    kept.weight += t.weight;
                    merged = true;
                    break;
                }
            }
            if (!merged) terms_.push_back(t);
        }
        std::erase_if(terms_, [](const CoherentTerm& t) { return t.weight == Complex{}; });
        if (terms_.empty()) throw DegenerateState("superposition has no term with nonzero weight");
    }

    static CoherentSuperposition coherent(Complex alpha) { return CoherentSuperposition({{1.0, alpha}}); }
    static CoherentSuperposition vacuum() { return coherent(0.0); }

    // Normalized |beta> + |-beta>.
    static CoherentSuperposition even_cat(Complex beta, const Config& cfg = {}) {
        return CoherentSuperposition({{1.0, beta}, {1.0, -beta}}, cfg).normalized(cfg);
    }

    std::span<const CoherentTerm> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_normalized() const { return normalized_; }

    CoherentSuperposition normalized(const Config& cfg = {}) const;

private:
    std::vector<CoherentTerm> terms_;
    bool normalized_ = false;
};

// sum_ij conj(a_i) b_j <alpha_i|beta_j> over raw term lists.
inline Complex terms_inner(std::span<const CoherentTerm> a, std::span<const CoherentTerm> b) {
    Complex acc{};
    for (const auto& ta : a)
        for (const auto& tb : b) acc += std::conj(ta.weight) * tb.weight * coherent_overlap(ta.amplitude, tb.amplitude);
    return acc;
}

inline Complex superposition_inner(const CoherentSuperposition& a, const CoherentSuperposition& b) {
    return terms_inner(a.terms(), b.terms());
}

inline double superposition_norm(const CoherentSuperposition& s, const Config& cfg = {}) {
    const double n2 = superposition_inner(s, s).real();
    const double n = n2 > 0.0 ? std::sqrt(n2) : 0.0;
    if (n < cfg.degenerate_norm) throw DegenerateState("superposition norm vanishes (fully destructive)");
    return n;
}

inline CoherentSuperposition CoherentSuperposition::normalized(const Config& cfg) const {
    const double n = superposition_norm(*this, cfg);
    CoherentSuperposition out = *this;
    for (auto& t : out.terms_) t.weight /= n;
    out.normalized_ = true;
    return out;
}

// |<a|b>|^2 for normalized arguments.
inline double state_fidelity(const CoherentSuperposition& a, const CoherentSuperposition& b) {
    return std::norm(superposition_inner(a, b));
}

// <x|psi> for a superposition.
inline Complex wavefunction(const CoherentSuperposition& s, double x) {
    Complex acc{};
    for (const auto& t : s.terms()) acc += t.weight * quadrature_overlap(x, t.amplitude);
    return acc;
}

struct TwoModeTerm {
    Complex weight;
    Complex amp_a;
    Complex amp_b;
};

// Weighted sum of coherent product states |a>|b>, same coalescing rules.
class TwoModeSuperposition {
public:
    explicit TwoModeSuperposition(std::vector<TwoModeTerm> terms, const Config& cfg = {}) {
        for (const auto& t : terms) {
            if (!is_finite(t.weight) || !is_finite(t.amp_a) || !is_finite(t.amp_b))
                throw DomainError("two-mode superposition term is not finite");
            bool merged = false;
            for (auto& kept : terms_) {
                if (std::abs(kept.amp_a - t.amp_a) <= cfg.coalesce_tol &&
                    std::abs(kept.amp_b - t.amp_b) <= cfg.coalesce_tol) {
                    kept.weight += t.weight;
                    merged = true;
                    break;
                }
            }
            if (!merged) terms_.push_back(t);
        }
        std::erase_if(terms_, [](const TwoModeTerm& t) { return t.weight == Complex{}; });
        if (terms_.empty()) throw DegenerateState("two-mode superposition has no term with nonzero weight");
    }

    std::span<const TwoModeTerm> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_normalized() const { return normalized_; }

    TwoModeSuperposition normalized(const Config& cfg = {}) const;

private:
    std::vector<TwoModeTerm> terms_;
    bool normalized_ = false;
};

inline Complex superposition_inner(const TwoModeSuperposition& a, const TwoModeSuperposition& b) {
    Complex acc{};
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms())
            acc += std::conj(ta.weight) * tb.weight * coherent_overlap(ta.amp_a, tb.amp_a) *
                   coherent_overlap(ta.amp_b, tb.amp_b);
    return acc;
}

inline double superposition_norm(const TwoModeSuperposition& s, const Config& cfg = {}) {
    const double n2 = superposition_inner(s, s).real();
    const double n = n2 > 0.0 ? std::sqrt(n2) : 0.0;
    if (n < cfg.degenerate_norm) throw DegenerateState("two-mode superposition norm vanishes");
    return n;
}

inline TwoModeSuperposition TwoModeSuperposition::normalized(const Config& cfg) const {
    const double n = superposition_norm(*this, cfg);
    TwoModeSuperposition out = *this;
    for (auto& t : out.terms_) t.weight /= n;
    out.normalized_ = true;
    return out;
}

// |a> (x) |b>, expanded term by term.
inline TwoModeSuperposition tensor(const CoherentSuperposition& a, const CoherentSuperposition& b,
                                   const Config& cfg = {}) {
    std::vector<TwoModeTerm> terms;
    terms.reserve(a.size() * b.size());
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) terms.push_back({ta.weight * tb.weight, ta.amplitude, tb.amplitude});
    return TwoModeSuperposition(std::move(terms), cfg);
}

// Balanced beam splitter: |alpha>|beta> -> |(alpha+beta)/sqrt2>|(alpha-beta)/sqrt2>.
inline TwoModeSuperposition beam_splitter_50_50(const TwoModeSuperposition& in, const Config& cfg = {}) {
    std::vector<TwoModeTerm> terms;
    terms.reserve(in.size());
    constexpr double r = 1.0 / std::numbers::sqrt2;
    for (const auto& t : in.terms()) terms.push_back({t.weight, (t.amp_a + t.amp_b) * r, (t.amp_a - t.amp_b) * r});
    TwoModeSuperposition out(std::move(terms), cfg);
    return in.is_normalized() ? out.normalized(cfg) : out;
}

namespace detail {

// (pi/2) W(gamma) before discarding the imaginary roundoff; exposed for tests.
// Uses W = (2/pi) <psi| D(gamma) P D(gamma)^dagger |psi> with the parity P and
// D(-gamma)|alpha> = exp(i Im(conj(gamma) alpha)) |alpha - gamma>.
inline Complex wigner_parity_sum(const CoherentSuperposition& s, Complex gamma) {
    Complex acc{};
    for (const auto& ti : s.terms()) {
        const Complex phase_i = std::exp(Complex{0.0, std::imag(std::conj(gamma) * ti.amplitude)});
        for (const auto& tj : s.terms()) {
            const Complex phase_j = std::exp(Complex{0.0, std::imag(std::conj(gamma) * tj.amplitude)});
            acc += std::conj(ti.weight * phase_i) * tj.weight * phase_j *
                   coherent_overlap(ti.amplitude - gamma, gamma - tj.amplitude);
        }
    }
    return acc;
}

}  // namespace detail

inline double wigner_point(const CoherentSuperposition& s, Complex gamma) {
    return 2.0 / std::numbers::pi * detail::wigner_parity_sum(s, gamma).real();
}

}  // namespace catforge
