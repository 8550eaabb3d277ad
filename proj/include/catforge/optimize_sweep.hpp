#pragma once

// Parameter exploration over (alpha0, phi): coefficient-ratio maps, exact
// optimum location and finite-window trade-off tables.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "catforge/config.hpp"
#include "catforge/errors.hpp"
#include "catforge/protocol.hpp"

namespace catforge {

struct GridSpec {
    double alpha0_min = 0.0;
    double alpha0_max = 5.0;
    std::size_t alpha0_steps = 500;
    double phi_min = 0.0;
    double phi_max = 0.2;
    std::size_t phi_steps = 500;

    void validate(const Config& cfg = {}) const {
        if (!std::isfinite(alpha0_min) || !std::isfinite(alpha0_max) || !(alpha0_min < alpha0_max))
            throw DomainError("grid needs alpha0_min < alpha0_max");
        if (!std::isfinite(phi_min) || !std::isfinite(phi_max) || !(phi_min < phi_max))
            throw DomainError("grid needs phi_min < phi_max");
        if (alpha0_min < 0.0) throw DomainError("grid alpha0 must be >= 0");
        if (alpha0_steps < 2 || phi_steps < 2) throw DomainError("grid needs at least 2 steps per axis");
        if (alpha0_steps > cfg.max_grid_steps || phi_steps > cfg.max_grid_steps)
            throw GridTooLarge("grid exceeds " + std::to_string(cfg.max_grid_steps) + " steps per axis");
    }

    double alpha0_at(std::size_t i) const {
        if (i + 1 == alpha0_steps) return alpha0_max;
        return alpha0_min + (alpha0_max - alpha0_min) * static_cast<double>(i) / static_cast<double>(alpha0_steps - 1);
    }
    double phi_at(std::size_t j) const {
        if (j + 1 == phi_steps) return phi_max;
        return phi_min + (phi_max - phi_min) * static_cast<double>(j) / static_cast<double>(phi_steps - 1);
    }
    double alpha0_cell() const { return (alpha0_max - alpha0_min) / static_cast<double>(alpha0_steps - 1); }
};

struct SweepRow {
    double alpha0;
    double phi;
    double ratio_exact;
    double ratio_o1;
    double ratio_o2;
    double d;
};

// Rows ordered phi-major: row index = j * alpha0_steps + i.
inline std::vector<SweepRow> sweep_ratio(const GridSpec& g, const Config& cfg = {}) {
    g.validate(cfg);
    std::vector<SweepRow> rows;
    rows.reserve(g.alpha0_steps * g.phi_steps);
    for (std::size_t j = 0; j < g.phi_steps; ++j) {
        for (std::size_t i = 0; i < g.alpha0_steps; ++i) {
            const auto p = ProtocolParams::make(g.alpha0_at(i), g.phi_at(j));
            rows.push_back({g.alpha0_at(i), g.phi_at(j), protocol::ratio_exact(p), protocol::ratio_first_order(p),
                            protocol::ratio_second_order(p), protocol::separations(p).d});
        }
    }
    return rows;
}

// Closed-form k-th optimum; optionally confirmed by bisection on
// cos(alpha0^2 sin phi) between its k-th and (k+1)-th extrema.
inline double find_min_alpha(double phi, int k, bool validate_numeric, const Config& cfg = {}) {
    const double closed = protocol::alpha_min_exact(phi, k);
    if (!validate_numeric) return closed;

    const double s = std::sin(phi);
    const auto f = [s](double a) { return std::cos(a * a * s); };
    double lo = std::sqrt(std::numbers::pi * k / s);
    double hi = std::sqrt(std::numbers::pi * (k + 1) / s);
    double flo = f(lo);
    for (int it = 0; it < cfg.bisection_max_iter && hi - lo > cfg.bisection_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    const double numeric = 0.5 * (lo + hi);
    if (std::abs(numeric - closed) > cfg.bisection_tol)
        throw NumericalError("bisection optimum " + std::to_string(numeric) + " disagrees with closed form " +
                             std::to_string(closed));
    return closed;
}

struct TradeoffRow {
    double epsilon;
    double probability;
    double fidelity;
};

// Window metrics around x = 0 for each half-width (ascending, positive).
inline std::vector<TradeoffRow> window_tradeoff(const ProtocolParams& p, std::span<const double> epsilons,
                                                const Config& cfg = {}) {
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) throw DomainError("window half-widths must be > 0");
        if (i > 0 && !(epsilons[i] > epsilons[i - 1])) throw DomainError("window half-widths must be ascending");
    }
    const auto oracle = protocol::oracle_state(p, cfg);
    std::vector<TradeoffRow> out;
    out.reserve(epsilons.size());
    for (double eps : epsilons) {
        const auto m = protocol::window_metrics(oracle, HomodyneWindow::make(0.0, eps), cfg);
        out.push_back({eps, m.probability, m.fidelity});
    }
    return out;
}

// Structure of the dark valleys of a ratio sweep: interior local minima of
// ratio_exact along alpha0 in every phi column, matched to the analytic zero
// loci alpha0^2 sin phi = pi/2 + k pi.
struct ValleyPoint {
    double phi;
    int k;
    double alpha0_grid;      // location of the column minimum
    double alpha0_analytic;  // exact zero
    double value;            // ratio at the column minimum
};

struct ValleyAnalysis {
    std::vector<ValleyPoint> points;
    std::size_t unmatched_minima = 0;  // minima farther than one cell from any zero
    std::size_t missed_zeros = 0;      // interior zeros without a nearby minimum
    double max_offset_cells = 0.0;
    double worst_column_minimum = 0.0;
    std::vector<double> valley_depth;  // per k: smallest ratio along the valley
};

inline ValleyAnalysis analyze_valleys(const GridSpec& g, std::span<const SweepRow> rows) {
    ValleyAnalysis out;
    const double cell = g.alpha0_cell();
    const std::size_t na = g.alpha0_steps;
    for (std::size_t j = 0; j < g.phi_steps; ++j) {
        const SweepRow* col = rows.data() + j * na;
        const double phi = col[0].phi;
        const double s = std::sin(phi);
        std::vector<bool> zero_hit;
        std::vector<double> zeros;
        if (s > 0.0) {
            for (int k = 0;; ++k) {
                const double z = std::sqrt((0.5 * std::numbers::pi + std::numbers::pi * k) / s);
                if (z > g.alpha0_max) break;
                if (z >= g.alpha0_min) zeros.push_back(z);
            }
        }
        zero_hit.assign(zeros.size(), false);
        for (std::size_t i = 1; i + 1 < na; ++i) {
            const double v = col[i].ratio_exact;
            if (!(v < col[i - 1].ratio_exact && v <= col[i + 1].ratio_exact)) continue;
            const double a = col[i].alpha0;
            // Nearest analytic zero in terms of alpha0^2 sin phi.
            const double kf = (a * a * s - 0.5 * std::numbers::pi) / std::numbers::pi;
            int k = static_cast<int>(std::lround(kf));
            if (k < 0) k = 0;
            const double z = std::sqrt((0.5 * std::numbers::pi + std::numbers::pi * k) / s);
            const double offset = std::abs(a - z) / cell;
            if (offset > 1.0) {
                ++out.unmatched_minima;
                continue;
            }
            for (std::size_t zi = 0; zi < zeros.size(); ++zi)
                if (std::abs(zeros[zi] - z) == 0.0) zero_hit[zi] = true;
            out.max_offset_cells = std::max(out.max_offset_cells, offset);
            out.worst_column_minimum = std::max(out.worst_column_minimum, v);
            if (out.valley_depth.size() <= static_cast<std::size_t>(k)) out.valley_depth.resize(k + 1, 2.0);
            out.valley_depth[k] = std::min(out.valley_depth[k], v);
            out.points.push_back({phi, k, a, z, v});
        }
        // Zeros within a cell of the grid edge cannot show up as interior minima.
        for (std::size_t zi = 0; zi < zeros.size(); ++zi) {
            const bool interior = zeros[zi] - g.alpha0_min > cell && g.alpha0_max - zeros[zi] > cell;
            if (interior && !zero_hit[zi]) ++out.missed_zeros;
        }
    }
    return out;
}

}  // namespace catforge
