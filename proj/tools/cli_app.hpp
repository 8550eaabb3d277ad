#pragma once

// Command-line front end. Kept in a header so tests can drive run_cli()
// in-process and inspect exit codes and output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "catforge/config.hpp"
#include "catforge/cv_core.hpp"
#include "catforge/errors.hpp"
#include "catforge/optimize_sweep.hpp"
#include "catforge/protocol.hpp"
#include "catforge/validation.hpp"

namespace catforge::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kDomainError = 2, kIoError = 3 };

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string fmt17(double v) {
    if (!std::isfinite(v)) throw NumericalError("refusing to emit a non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_row(std::initializer_list<double> values) {
    std::string line;
    for (double v : values) {
        if (!line.empty()) line += ',';
        line += fmt17(v);
    }
    line += '\n';
    return line;
}

inline double checked(double v) {
    if (!std::isfinite(v)) throw NumericalError("refusing to emit a non-finite value");
    return v;
}

inline nlohmann::json complex_json(Complex z) { return {{"re", checked(z.real())}, {"im", checked(z.imag())}}; }

// Destination selected by --output; stdout when empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw IoError("cannot open output file: " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& os() { return *stream_; }
    void finish() {
        stream_->flush();
        if (!*stream_) throw IoError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

struct RunConfig {
    double alpha0 = 1.0;
    double phi = 0.1;
    bool phi_degrees = false;
    double x = 0.0;
    int k = 0;
    bool validate_numeric = false;
    std::vector<double> epsilons{1e-4, 1e-2, 0.1, 1.0};
    GridSpec grid{};
    std::vector<double> validate_alpha0 = kValidationAlpha0;
    std::vector<double> validate_phi = kValidationPhi;
    double tolerance = 1e-8;
    std::string state = "conditional";
    double extent = 4.0;
    std::size_t wigner_steps = 81;
    std::string output;
    std::string format;  // empty: command default (json for prepare, csv otherwise)

    ProtocolParams params() const {
        return ProtocolParams::make(alpha0, phi_degrees ? phi * std::numbers::pi / 180.0 : phi);
    }
};

inline void cmd_ratio(const RunConfig& rc, std::ostream& out) {
    const auto p = rc.params();
    const auto sep = protocol::separations(p);
    const double re = protocol::ratio_exact(p);
    const double o1 = protocol::ratio_first_order(p);
    const double o2 = protocol::ratio_second_order(p);
    Sink sink(rc.output, out);
    if (rc.format == "json") {
        nlohmann::json j{{"alpha0", checked(p.alpha0)}, {"phi", checked(p.phi)},  {"ratio_exact", checked(re)},
                         {"ratio_o1", checked(o1)},     {"ratio_o2", checked(o2)}, {"d0", checked(sep.d0)},
                         {"d", checked(sep.d)}};
        sink.os() << j.dump(2) << '\n';
    } else {
        sink.os() << "alpha0,phi,ratio_exact,ratio_o1,ratio_o2,d0,d\n"
                  << csv_row({p.alpha0, p.phi, re, o1, o2, sep.d0, sep.d});
    }
    sink.finish();
}

inline void cmd_prepare(const RunConfig& rc, const Config& cfg, std::ostream& out) {
    const auto p = rc.params();
    const auto r = protocol::report(p, rc.x, cfg);
    Sink sink(rc.output, out);
    if (rc.format == "csv") {
        sink.os() << "alpha0,phi,x,c1_re,c1_im,c2_re,c2_im,ratio,fidelity,density_at_x,d0,d\n"
                  << csv_row({p.alpha0, p.phi, rc.x, r.c1.real(), r.c1.imag(), r.c2.real(), r.c2.imag(), r.ratio,
                              r.fidelity, r.density_at_x, r.separations.d0, r.separations.d});
    } else {
        nlohmann::json j{{"alpha0", checked(p.alpha0)},
                         {"phi", checked(p.phi)},
                         {"x", checked(rc.x)},
                         {"c1", complex_json(r.c1)},
                         {"c2", complex_json(r.c2)},
                         {"ratio", checked(r.ratio)},
                         {"fidelity", checked(r.fidelity)},
                         {"density_at_x", checked(r.density_at_x)},
                         {"separations", {{"d0", checked(r.separations.d0)}, {"d", checked(r.separations.d)}}}};
        sink.os() << j.dump(2) << '\n';
    }
    sink.finish();
}

inline void cmd_sweep(const RunConfig& rc, const Config& cfg, std::ostream& out) {
    const auto rows = sweep_ratio(rc.grid, cfg);
    Sink sink(rc.output, out);
    if (rc.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"alpha0", checked(r.alpha0)},
                           {"phi", checked(r.phi)},
                           {"ratio_exact", checked(r.ratio_exact)},
                           {"ratio_o1", checked(r.ratio_o1)},
                           {"ratio_o2", checked(r.ratio_o2)},
                           {"d", checked(r.d)}});
        sink.os() << arr.dump() << '\n';
    } else {
        auto& os = sink.os();
        os << "alpha0,phi,ratio_exact,ratio_o1,ratio_o2,d\n";
        for (const auto& r : rows) os << csv_row({r.alpha0, r.phi, r.ratio_exact, r.ratio_o1, r.ratio_o2, r.d});
    }
    sink.finish();
}

inline void cmd_optimize(const RunConfig& rc, const Config& cfg, std::ostream& out) {
    const double phi = rc.phi_degrees ? rc.phi * std::numbers::pi / 180.0 : rc.phi;
    const double exact = find_min_alpha(phi, rc.k, rc.validate_numeric, cfg);
    const double first = protocol::alpha_min_first_order(phi);
    const double gap = std::abs(first - exact) / exact;
    const auto sep = protocol::separations(ProtocolParams::make(exact, phi));
    const double residual = protocol::ratio_exact(ProtocolParams::make(exact, phi));
    Sink sink(rc.output, out);
    if (rc.format == "json") {
        nlohmann::json j{{"phi", checked(phi)},
                         {"k", rc.k},
                         {"alpha_min_exact", checked(exact)},
                         {"alpha_min_first_order", checked(first)},
                         {"relative_gap", checked(gap)},
                         {"ratio_at_optimum", checked(residual)},
                         {"d0", checked(sep.d0)},
                         {"d", checked(sep.d)},
                         {"bisection_checked", rc.validate_numeric}};
        sink.os() << j.dump(2) << '\n';
    } else {
        sink.os() << "phi,k,alpha_min_exact,alpha_min_first_order,relative_gap,ratio_at_optimum,d0,d\n"
                  << fmt17(phi) << ',' << rc.k << ','
                  << csv_row({exact, first, gap, residual, sep.d0, sep.d});
    }
    sink.finish();
}

inline void cmd_window(const RunConfig& rc, const Config& cfg, std::ostream& out) {
    const auto table = window_tradeoff(rc.params(), rc.epsilons, cfg);
    Sink sink(rc.output, out);
    if (rc.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : table)
            arr.push_back({{"epsilon", checked(r.epsilon)},
                           {"probability", checked(r.probability)},
                           {"fidelity", checked(r.fidelity)}});
        sink.os() << arr.dump(2) << '\n';
    } else {
        sink.os() << "epsilon,probability,fidelity\n";
        for (const auto& r : table) sink.os() << csv_row({r.epsilon, r.probability, r.fidelity});
    }
    sink.finish();
}

inline CoherentSuperposition wigner_state(const RunConfig& rc, const Config& cfg) {
    const auto p = rc.params();
    if (rc.state == "cat") return protocol::ideal_cat(p, false, cfg);
    if (rc.state == "source") return protocol::source_state(p, cfg);
    return protocol::conditional_state(p, rc.x, cfg);
}

// Square grid x, y in [-extent, extent], gamma = x + i y.
inline void cmd_wigner(const RunConfig& rc, const Config& cfg, std::ostream& out) {
    if (!(rc.extent > 0.0) || rc.wigner_steps < 2) throw DomainError("wigner grid needs extent > 0 and steps >= 2");
    if (rc.wigner_steps > cfg.max_grid_steps) throw GridTooLarge("wigner grid too large");
    const auto s = wigner_state(rc, cfg);
    Sink sink(rc.output, out);
    auto& os = sink.os();
    os << "x,y,w\n";
    const double step = 2.0 * rc.extent / static_cast<double>(rc.wigner_steps - 1);
    for (std::size_t j = 0; j < rc.wigner_steps; ++j) {
        const double y = -rc.extent + step * static_cast<double>(j);
        for (std::size_t i = 0; i < rc.wigner_steps; ++i) {
            const double x = -rc.extent + step * static_cast<double>(i);
            os << csv_row({x, y, wigner_point(s, Complex{x, y})});
        }
    }
    sink.finish();
}

inline int cmd_validate(const RunConfig& rc, const Config& cfg, std::ostream& out) {
    const auto result = run_validation(rc.validate_alpha0, rc.validate_phi, cfg);
    const auto worst = result.worst();
    const bool ok = result.passed(rc.tolerance);
    Sink sink(rc.output, out);
    sink.os() << "points: " << rc.validate_alpha0.size() * rc.validate_phi.size() << '\n'
              << "max deviation: " << fmt17(worst.value) << '\n'
              << "worst point: quantity=" << worst.quantity << " alpha0=" << fmt17(worst.alpha0)
              << " phi=" << fmt17(worst.phi) << '\n'
              << "tolerance: " << fmt17(rc.tolerance) << '\n'
              << (ok ? "PASS" : "FAIL") << '\n';
    sink.finish();
    return ok ? kOk : kValidationFailed;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    CLI::App app{"catforge: conditional cat-state preparation by homodyne post-selection"};
    app.require_subcommand(1);

    const auto add_params = [&](CLI::App* sub) {
        sub->add_option("--alpha0", rc.alpha0, "source coherent amplitude magnitude");
        sub->add_option("--phi", rc.phi, "superposition angle (radians)");
        sub->add_flag("--phi-degrees", rc.phi_degrees, "interpret --phi in degrees");
    };
    const auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", rc.output, "output file (default stdout)");
        sub->add_option("--format", rc.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* ratio = app.add_subcommand("ratio", "coefficient ratio (exact and approximations) and separations");
    add_params(ratio);
    auto* prepare = app.add_subcommand("prepare", "conditional state report for outcome x");
    add_params(prepare);
    prepare->add_option("--x", rc.x, "homodyne outcome");
    auto* sweep = app.add_subcommand("sweep", "ratio map over an (alpha0, phi) grid");
    sweep->add_option("--alpha0-min", rc.grid.alpha0_min);
    sweep->add_option("--alpha0-max", rc.grid.alpha0_max);
    sweep->add_option("--alpha0-steps", rc.grid.alpha0_steps);
    sweep->add_option("--phi-min", rc.grid.phi_min);
    sweep->add_option("--phi-max", rc.grid.phi_max);
    sweep->add_option("--phi-steps", rc.grid.phi_steps);
    auto* optimize = app.add_subcommand("optimize", "optimal amplitude for a given angle");
    optimize->add_option("--phi", rc.phi, "superposition angle (radians)");
    optimize->add_flag("--phi-degrees", rc.phi_degrees, "interpret --phi in degrees");
    optimize->add_option("--k", rc.k, "zero index (0 = first optimum)");
    optimize->add_flag("--validate", rc.validate_numeric, "confirm the closed form by bisection");
    auto* window = app.add_subcommand("window", "probability/fidelity for finite detection windows");
    add_params(window);
    window->add_option("--eps", rc.epsilons, "ascending window half-widths")->delimiter(',');
    auto* wigner = app.add_subcommand("wigner", "Wigner function on a square grid (CSV x,y,w)");
    add_params(wigner);
    wigner->add_option("--x", rc.x, "homodyne outcome for the conditional state");
    wigner->add_option("--state", rc.state, "conditional, cat or source")
        ->check(CLI::IsMember({"conditional", "cat", "source"}));
    wigner->add_option("--extent", rc.extent, "half-width of the grid");
    wigner->add_option("--steps", rc.wigner_steps, "grid points per axis");
    auto* validate = app.add_subcommand("validate", "closed forms against the Fock oracle");
    validate->add_option("--alpha0", rc.validate_alpha0, "alpha0 grid")->delimiter(',');
    validate->add_option("--phi", rc.validate_phi, "phi grid")->delimiter(',');
    validate->add_option("--tol", rc.tolerance, "maximum allowed deviation");

    for (auto* sub : {ratio, prepare, sweep, optimize, window, wigner, validate}) add_output(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err) == 0 ? kOk : kDomainError;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kDomainError;
    }
    if (rc.format.empty()) rc.format = prepare->parsed() ? "json" : "csv";

    try {
        const Config cfg = Config::from_env();
        if (ratio->parsed()) cmd_ratio(rc, out);
        else if (prepare->parsed()) cmd_prepare(rc, cfg, out);
        else if (sweep->parsed()) cmd_sweep(rc, cfg, out);
        else if (optimize->parsed()) cmd_optimize(rc, cfg, out);
        else if (window->parsed()) cmd_window(rc, cfg, out);
        else if (wigner->parsed()) cmd_wigner(rc, cfg, out);
        else if (validate->parsed()) return cmd_validate(rc, cfg, out);
        return kOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailed;
    }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"catforge"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace catforge::cli
