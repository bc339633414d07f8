#include "vchain/cli/cli.hpp"

#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "vchain/chain_lift.hpp"
#include "vchain/characteristics.hpp"
#include "vchain/cli/io.hpp"
#include "vchain/cli/verify.hpp"
#include "vchain/parallel.hpp"
#include "vchain/theta.hpp"

namespace vchain::cli {

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::string stem_of(const std::string& path) {
    for (const char* ext : {".csv", ".json"}) {
        if (path.size() > std::strlen(ext) &&
            path.compare(path.size() - std::strlen(ext), std::string::npos, ext) == 0) {
            return path.substr(0, path.size() - std::strlen(ext));
        }
    }
    return path;
}

struct MarginalGrid {
    double t_max;
    double x_max;
};

MarginalGrid marginal_grid(const RunConfig& cfg) {
    const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 2.0 * cfg.a / cfg.adot;
    return {t_max, cfg.adot * t_max + cfg.a};
}

int cmd_density_1d(const RunConfig& cfg) {
    const WellParams well(cfg.m, cfg.hbar, cfg.a);
    const auto mode = ModeConstants::make(well, cfg.mu);
    const PhaseBox box({cfg.a, cfg.adot});
    const auto grid = marginal_grid(cfg);

    std::vector<double> vals(static_cast<size_t>(cfg.nx) * cfg.nt);
    parallel_for(vals.size(), [&](size_t b, size_t e) {
        for (size_t r = b; r < e; ++r) {
            const int i = static_cast<int>(r) / cfg.nt;
            const int j = static_cast<int>(r) % cfg.nt;
            const double x = grid.x_max * i / (cfg.nx - 1.0);
            const double t = grid.t_max * j / (cfg.nt - 1.0);
            vals[r] = marginal_density(x, t, mode, box);
        }
    });

    Table table({"x", "t", "f1"});
    for (int i = 0; i < cfg.nx; ++i) {
        for (int j = 0; j < cfg.nt; ++j) {
            const double x = grid.x_max * i / (cfg.nx - 1.0);
            const double t = grid.t_max * j / (cfg.nt - 1.0);
            table.add_row({x, t, vals[static_cast<size_t>(i) * cfg.nt + j]});
        }
    }
    auto out = open_output(cfg.out.empty() ? "density_1d." + cfg.format : cfg.out);
    table.write(out, cfg.format);
    return 0;
}

int cmd_flux_1d(const RunConfig& cfg) {
    const WellParams well(cfg.m, cfg.hbar, cfg.a);
    const auto mode = ModeConstants::make(well, cfg.mu);
    const PhaseBox box({cfg.a, cfg.adot});
    const auto grid = marginal_grid(cfg);

    std::vector<std::optional<double>> vals(static_cast<size_t>(cfg.nx) * cfg.nt);
    parallel_for(vals.size(), [&](size_t b, size_t e) {
        for (size_t r = b; r < e; ++r) {
            const int i = static_cast<int>(r) / cfg.nt;
            const int j = static_cast<int>(r) % cfg.nt;
            const double x = grid.x_max * i / (cfg.nx - 1.0);
            const double t = grid.t_max * j / (cfg.nt - 1.0);
            vals[r] = marginal_flux(x, t, mode, box);
        }
    });

    Table table({"x", "t", "v_mean"});
    for (int i = 0; i < cfg.nx; ++i) {
        for (int j = 0; j < cfg.nt; ++j) {
            const double x = grid.x_max * i / (cfg.nx - 1.0);
            const double t = grid.t_max * j / (cfg.nt - 1.0);
            table.add_row({x, t, vals[static_cast<size_t>(i) * cfg.nt + j]});
        }
    }
    auto out = open_output(cfg.out.empty() ? "flux_1d." + cfg.format : cfg.out);
    table.write(out, cfg.format);
    return 0;
}

int cmd_theta_maps(const RunConfig& cfg) {
    const WellParams well(cfg.m, cfg.hbar, cfg.a);
    const TruncationPolicy trunc{TruncationPolicy::Mode::adaptive, 512, cfg.trunc_tol};
    const ThetaSolution sol(well, cfg.mu, cfg.beta, trunc);
    const double T = sol.mode().period;
    const std::string stem = stem_of(cfg.out.empty() ? "theta_maps" : cfg.out);
    const std::string ext = "." + cfg.format;

    // Density map over one period.
    std::vector<double> vals(static_cast<size_t>(cfg.nx) * cfg.nt);
    parallel_for(vals.size(), [&](size_t b, size_t e) {
        for (size_t r = b; r < e; ++r) {
            const int i = static_cast<int>(r) / cfg.nt;
            const int j = static_cast<int>(r) % cfg.nt;
            const double eta = cfg.a * i / (cfg.nx - 1.0);
            const double tau = T * j / (cfg.nt - 1.0);
            vals[r] = sol.density(eta, tau);
        }
    });
    Table density({"eta", "tau", "F"});
    for (int i = 0; i < cfg.nx; ++i) {
        for (int j = 0; j < cfg.nt; ++j) {
            density.add_row({cfg.a * i / (cfg.nx - 1.0), T * j / (cfg.nt - 1.0),
                             vals[static_cast<size_t>(i) * cfg.nt + j]});
        }
    }
    auto dout = open_output(stem + ".density" + ext);
    density.write(dout, cfg.format);

    // Flux profiles at fixed fractions of the period.
    Table flux({"tau", "eta", "u"});
    for (double frac : {1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.5, 1.0 / 2.2}) {
        const double tau = frac * T;
        for (int i = 0; i < cfg.nx; ++i) {
            const double eta = cfg.a * i / (cfg.nx - 1.0);
            flux.add_row({tau, eta, sol.flux(eta, tau)});
        }
    }
    auto fout = open_output(stem + ".flux" + ext);
    flux.write(fout, cfg.format);

    // Characteristic lines eta/a = (s+k+1)/(2 mu) tau/T + c.
    Table lines({"s_plus_k_plus_1", "slope", "tau_frac", "eta_frac"});
    for (int m = 1; m <= 4; ++m) {
        const double slope = m / (2.0 * cfg.mu);
        const double c = 0.5 - slope * 0.5;  // through the window centre
        for (int j = 0; j < cfg.nt; ++j) {
            const double tf = j / (cfg.nt - 1.0);
            const double ef = slope * tf + c;
            if (ef < 0.0 || ef > 1.0) continue;
            lines.add_row({static_cast<double>(m), slope, tf, ef});
        }
    }
    auto lout = open_output(stem + ".lines" + ext);
    lines.write(lout, cfg.format);
    return 0;
}

int cmd_phase_snapshots(const RunConfig& cfg, int snapshots) {
    const WellParams well(cfg.m, cfg.hbar, cfg.a);
    const TruncationPolicy trunc{TruncationPolicy::Mode::adaptive, 512, cfg.trunc_tol};
    const ThetaSolution sol(well, cfg.mu, cfg.beta, trunc);
    const PhaseBox box({cfg.a, cfg.adot});
    const double t_max = cfg.t_max > 0.0 ? cfg.t_max : 1.5 * cfg.a / cfg.adot;
    const double x_max = cfg.adot * t_max + cfg.a;
    const std::string stem = stem_of(cfg.out.empty() ? "phase_snapshots" : cfg.out);
    const std::string ext = "." + cfg.format;

    Table density({"t", "x", "v", "f2"});
    Table polygon({"t", "corner", "x", "v"});
    for (int s = 0; s < snapshots; ++s) {
        const double t = snapshots == 1 ? 0.0 : t_max * s / (snapshots - 1.0);
        std::vector<double> vals(static_cast<size_t>(cfg.nx) * cfg.nx);
        parallel_for(vals.size(), [&](size_t b, size_t e) {
            for (size_t r = b; r < e; ++r) {
                const int i = static_cast<int>(r) / cfg.nx;
                const int j = static_cast<int>(r) % cfg.nx;
                const double x = x_max * i / (cfg.nx - 1.0);
                const double v = cfg.adot * j / (cfg.nx - 1.0);
                const PhasePoint p(2, 1, {x, v});
                vals[r] = f_n_theta(p, t, sol, box);
            }
        });
        for (int i = 0; i < cfg.nx; ++i) {
            for (int j = 0; j < cfg.nx; ++j) {
                density.add_row({t, x_max * i / (cfg.nx - 1.0), cfg.adot * j / (cfg.nx - 1.0),
                                 vals[static_cast<size_t>(i) * cfg.nx + j]});
            }
        }
        const std::array<std::array<double, 2>, 4> corners{
            {{0.0, 0.0}, {cfg.a, 0.0}, {cfg.a, cfg.adot}, {0.0, cfg.adot}}};
        for (int c = 0; c < 4; ++c) {
            const PhasePoint p(2, 1, {corners[c][0], corners[c][1]});
            const PhasePoint q = propagate(p, t);
            polygon.add_row({t, static_cast<double>(c), q.deriv(0), q.deriv(1)});
        }
    }
    auto dout = open_output(stem + ".density" + ext);
    density.write(dout, cfg.format);
    auto pout = open_output(stem + ".polygon" + ext);
    polygon.write(pout, cfg.format);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const auto reports = run_verification(cfg);
    const std::string json = reports_to_json(reports);
    if (cfg.out.empty()) {
        std::cout << json;
    } else {
        auto out = open_output(cfg.out);
        out << json;
    }
    for (const auto& r : reports) {
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << " (max_abs=" << r.max_abs
                  << ", tol=" << r.tolerance << ")\n";
    }
    return all_pass(reports) ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Characteristic-coordinate solutions of the kinetic chain for the "
                 "infinite well: exact densities, fluxes, marginals and their verification"};
    app.require_subcommand(1);

    // Command first, so per-command defaults can be applied before the
    // config file and flags override in that order.
    std::string config_path;
    std::string subcmd = args.empty() ? "" : args.front();

    RunConfig cfg;
    if (subcmd == "density-1d" || subcmd == "flux-1d") cfg.mu = 5;

    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path.empty()) {
        try {
            cfg.apply(parse_config_file(config_path));
        } catch (const std::exception& ex) {
            std::cerr << "error: " << ex.what() << "\n";
            return 2;
        }
    }

    int snapshots = 4;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--mu", cfg.mu, "well state number");
        cmd->add_option("--beta", cfg.beta, "inverse temperature of the comb state");
        cmd->add_option("--a", cfg.a, "well width");
        cmd->add_option("--adot", cfg.adot, "velocity box size");
        cmd->add_option("--m", cfg.m, "mass");
        cmd->add_option("--hbar", cfg.hbar, "action constant");
        cmd->add_option("--nx", cfg.nx, "spatial sample count");
        cmd->add_option("--nt", cfg.nt, "time sample count");
        cmd->add_option("--t-max", cfg.t_max, "largest time (command default if unset)");
        cmd->add_option("--out", cfg.out, "output path (stem for multi-file commands)");
        cmd->add_option("--format", cfg.format, "csv or json");
        cmd->add_option("--config", config_path, "flat key=value config file (flags win)");
        cmd->add_option("--trunc-tol", cfg.trunc_tol, "series term tolerance");
    };

    auto* density = app.add_subcommand("density-1d", "marginal density f1(x,t) table");
    add_common(density);
    auto* flux = app.add_subcommand("flux-1d", "marginal mean velocity table");
    add_common(flux);
    auto* maps = app.add_subcommand("theta-maps", "comb-state density map and flux profiles");
    add_common(maps);
    auto* phase = app.add_subcommand("phase-snapshots", "f2(x,v) snapshots and support polygon");
    add_common(phase);
    phase->add_option("--snapshots", snapshots, "number of snapshot times");
    auto* verify = app.add_subcommand("verify", "run the verification battery, emit JSON");
    add_common(verify);

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        cfg.validate();
        if (snapshots < 1) throw std::runtime_error("--snapshots must be >= 1");
        if (density->parsed()) return cmd_density_1d(cfg);
        if (flux->parsed()) return cmd_flux_1d(cfg);
        if (maps->parsed()) return cmd_theta_maps(cfg);
        if (phase->parsed()) return cmd_phase_snapshots(cfg, snapshots);
        if (verify->parsed()) return cmd_verify(cfg);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace vchain::cli
