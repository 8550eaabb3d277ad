#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

#include "catforge/errors.hpp"

namespace catforge {

// Numerical thresholds shared by all modules. Every operation that depends on
// one of these takes a `const Config&` defaulting to `Config{}`.
struct Config {
    double coalesce_tol = 1e-12;       // amplitudes closer than this are merged
    double degenerate_norm = 1e-14;    // superposition norm below this is an error
    double zero_probability = 1e-30;   // conditioning density below this is an error
    double eigenvalue_floor = 1e-8;    // density eigenvalues in (-floor, 0) are clipped
    double window_panel_width = 0.1;   // max Gauss-Legendre panel width for windows
    double marginal_margin = 10.0;     // |x| half-range added around the mode-3 centres
    std::size_t max_fock = 4096;       // truncation cap
    std::size_t max_grid_steps = 2001; // per sweep axis
    double bisection_tol = 1e-12;
    int bisection_max_iter = 200;

    // Applies CATFORGE_MAX_FOCK if set.
    static Config from_env() {
        Config cfg;
        if (const char* env = std::getenv("CATFORGE_MAX_FOCK"); env != nullptr && *env != '\0') {
            try {
                std::size_t pos = 0;
                const long long v = std::stoll(env, &pos);
                if (pos != std::string(env).size() || v < 1) throw std::invalid_argument(env);
                cfg.max_fock = static_cast<std::size_t>(v);
            } catch (const std::exception&) {
                throw DomainError(std::string("CATFORGE_MAX_FOCK is not a positive integer: ") + env);
            }
        }
        return cfg;
    }
};

}  // namespace catforge
