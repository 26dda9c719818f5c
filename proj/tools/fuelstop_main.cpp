// Command-line front end. Talks to the solver library exclusively through
// its C API. Exit codes: 0 success, 1 validation/regime failure, 2 usage.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fuelstop/fuelstop.h"

namespace {

struct Options {
    double alpha = 0.0, delta = 0.0, lambda = 0.0;
    std::string format = "json";
    std::string out_path;
    int threads = 0;

    std::string c_max = "auto";
    int c_steps = 64;

    double c = 0.0;
    double x_min = 0.0, x_max = 4.0;
    int x_steps = 401;

    std::string c_list = "auto";
    double tol_scale = 1.0;

    std::string kind = "minorant";
    long long n = 0;

    double x0 = 0.0;
    long long paths = 100000;
    double dt = 1e-4;
    double horizon = 0.0;
    unsigned long long seed = 1;
    bool antithetic = false;
};

int fail(fuelstop_status st) {
    std::cerr << "error: " << fuelstop_last_error() << "\n";
    return st == FUELSTOP_ERR_ARGUMENT ? 2 : 1;
}

int write_output(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return 0;
    }
    std::ofstream out(opt.out_path);
    if (!out) {
        std::cerr << "error: cannot open " << opt.out_path << " for writing\n";
        return 1;
    }
    out << text;
    return 0;
}

std::string take(char* s) {
    std::string out = s ? s : "";
    fuelstop_string_free(s);
    return out;
}

struct ModelGuard {
    fuelstop_model* m = nullptr;
    ~ModelGuard() { fuelstop_model_destroy(m); }
};
struct BoundaryGuard {
    fuelstop_boundary* b = nullptr;
    ~BoundaryGuard() { fuelstop_boundary_destroy(b); }
};

int run_constants(const Options& opt, fuelstop_model* m) {
    if (opt.format == "csv") {
        fuelstop_constants k{};
        fuelstop_model_constants(m, &k);
        std::ostringstream csv;
        csv.precision(17);
        csv << "alpha,delta,lambda,f0,lambda_star,lambda_dagger,b0,regime\n"
            << k.alpha << ',' << k.delta << ',' << k.lambda << ',' << k.f0 << ','
            << k.lambda_star << ',' << k.lambda_dagger << ',' << k.b0 << ','
            << fuelstop_regime_name(k.regime) << '\n';
        return write_output(opt, csv.str());
    }
    char* json = nullptr;
    if (auto st = fuelstop_constants_json(m, &json)) return fail(st);
    return write_output(opt, take(json));
}

int run_boundaries(const Options& opt, fuelstop_model* m) {
    double c_hi = 0.0;
    if (opt.c_max == "auto") {
        double c0 = 0.0;
        int truncated = 0;
        if (auto st = fuelstop_find_c0(m, 0.0, &c0, &truncated)) return fail(st);
        c_hi = 0.95 * c0;
    } else {
        try {
            c_hi = std::stod(opt.c_max);
        } catch (...) {
            std::cerr << "error: --c-max must be a number or 'auto'\n";
            return 2;
        }
    }
    if (!(c_hi > 0.0) || opt.c_steps < 1) {
        std::cerr << "error: need positive --c-max and --c-steps\n";
        return 2;
    }
    std::vector<double> grid(opt.c_steps);
    for (int i = 0; i < opt.c_steps; ++i) grid[i] = c_hi * double(i + 1) / double(opt.c_steps);

    fuelstop_table* t = nullptr;
    if (auto st = fuelstop_table_create(m, grid.data(), grid.size(), &t)) return fail(st);
    char* text = nullptr;
    const auto st =
        opt.format == "csv" ? fuelstop_table_csv(t, &text) : fuelstop_table_json(t, &text);
    fuelstop_table_destroy(t);
    if (st) return fail(st);
    return write_output(opt, take(text));
}

int run_value(const Options& opt, fuelstop_model* m) {
    BoundaryGuard b;
    if (auto st = fuelstop_boundary_solve(m, opt.c, &b.b)) return fail(st);
    char* text = nullptr;
    const auto st = opt.format == "csv"
                        ? fuelstop_value_profile_csv(m, b.b, opt.x_min, opt.x_max,
                                                     size_t(opt.x_steps), &text)
                        : fuelstop_value_profile_json(m, b.b, opt.x_min, opt.x_max,
                                                      size_t(opt.x_steps), &text);
    if (st) return fail(st);
    return write_output(opt, take(text));
}

int run_verify(const Options& opt, fuelstop_model* m) {
    std::vector<double> cs;
    if (opt.c_list == "auto") {
        double c0 = 0.0;
        int truncated = 0;
        if (auto st = fuelstop_find_c0(m, 0.0, &c0, &truncated)) return fail(st);
        for (int k = 7; k >= 0; --k) cs.push_back(0.9 * c0 / double(1 << k));
    } else {
        std::stringstream ss(opt.c_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                cs.push_back(std::stod(item));
            } catch (...) {
                std::cerr << "error: --c-list must be comma-separated numbers or 'auto'\n";
                return 2;
            }
        }
    }
    char* json = nullptr;
    char* table = nullptr;
    int all_passed = 0;
    if (auto st = fuelstop_verify(m, cs.data(), cs.size(), opt.tol_scale, &json, &table,
                                  &all_passed))
        return fail(st);
    const std::string report = take(table);
    if (opt.format == "json" && !opt.out_path.empty()) {
        std::cout << report;
        if (int rc = write_output(opt, take(json))) return rc;
    } else if (opt.format == "json") {
        fuelstop_string_free(json);
        std::cout << report;
    } else {
        fuelstop_string_free(json);
        if (int rc = write_output(opt, report)) return rc;
    }
    return all_passed ? 0 : 1;
}

int run_oracle(const Options& opt, fuelstop_model* m) {
    char* csv = nullptr;
    if (opt.kind == "minorant") {
        const size_t n = opt.n > 0 ? size_t(opt.n) : 1000000;
        double xl = 0.0, xr = 0.0;
        if (auto st = fuelstop_oracle_minorant(m, opt.c, n, 0.0, &csv, &xl, &xr))
            return fail(st);
        std::cerr << "contact_left_x=" << xl << " contact_right_x=" << xr << "\n";
    } else if (opt.kind == "psor") {
        const size_t n = opt.n > 0 ? size_t(opt.n) : 40000;
        double lo = 0.0, hi = 0.0;
        if (auto st = fuelstop_oracle_psor(m, opt.c, n, 0.0, 0.0, 0.0, 0, &csv, &lo, &hi))
            return fail(st);
        std::cerr << "free_first_x=" << lo << " free_last_x=" << hi << "\n";
    } else {
        std::cerr << "error: --kind must be minorant or psor\n";
        return 2;
    }
    return write_output(opt, take(csv));
}

int run_simulate(const Options& opt, fuelstop_model* m) {
    BoundaryGuard b;
    if (auto st = fuelstop_boundary_solve(m, opt.c, &b.b)) return fail(st);
    fuelstop_sim_config cfg{};
    cfg.x0 = opt.x0;
    cfg.fuel = opt.c;
    cfg.n_paths = uint64_t(opt.paths);
    cfg.dt = opt.dt;
    cfg.horizon = opt.horizon > 0.0 ? opt.horizon : 12.0 / opt.alpha;
    cfg.seed = opt.seed;
    cfg.antithetic = opt.antithetic ? 1 : 0;
    cfg.threads = opt.threads;
    fuelstop_sim_result res{};
    if (auto st = fuelstop_simulate(m, b.b, &cfg, &res)) return fail(st);
    if (res.coarse_dt)
        std::cerr << "warning: dt is coarse relative to the continuation gap; "
                     "hitting-time bias grows with sqrt(dt)\n";
    char* json = nullptr;
    if (auto st = fuelstop_sim_result_json(&cfg, &res, &json)) return fail(st);
    return write_output(opt, take(json));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-fuel control with discretionary stopping: boundaries, values, "
                 "verification, oracles and policy simulation"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", opt.alpha, "discount rate")
            ->required()
            ->envname("FUELSTOP_ALPHA");
        sub->add_option("--delta", opt.delta, "terminal-cost coefficient")
            ->required()
            ->envname("FUELSTOP_DELTA");
        sub->add_option("--lambda", opt.lambda, "running-cost coefficient")
            ->required()
            ->envname("FUELSTOP_LAMBDA");
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->envname("FUELSTOP_FORMAT");
        sub->add_option("--out", opt.out_path, "write output to this file")
            ->envname("FUELSTOP_OUT");
        sub->add_option("--threads", opt.threads, "worker threads (0 = auto)")
            ->envname("FUELSTOP_THREADS");
    };

    auto* constants = app.add_subcommand("constants", "derived constants and regime");
    add_common(constants);

    auto* boundaries = app.add_subcommand("boundaries", "moving-boundary table over fuel");
    add_common(boundaries);
    boundaries->add_option("--c-max", opt.c_max, "top fuel level, or 'auto' for 0.95*c0");
    boundaries->add_option("--c-steps", opt.c_steps, "number of fuel levels");

    auto* value = app.add_subcommand("value", "value-function profile at one fuel level");
    add_common(value);
    value->add_option("--c", opt.c, "fuel level")->required();
    value->add_option("--x-min", opt.x_min, "profile start");
    value->add_option("--x-max", opt.x_max, "profile end");
    value->add_option("--x-steps", opt.x_steps, "samples");

    auto* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify);
    verify->add_option("--c-list", opt.c_list, "comma-separated fuel levels, or 'auto'");
    verify->add_option("--tol-scale", opt.tol_scale, "scale every tolerance");

    auto* oracle = app.add_subcommand("oracle", "brute-force cross-check solvers");
    add_common(oracle);
    oracle->add_option("--kind", opt.kind, "minorant or psor")
        ->check(CLI::IsMember({"minorant", "psor"}));
    oracle->add_option("--c", opt.c, "fuel level")->required();
    oracle->add_option("--n", opt.n, "grid size");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo cost of the policy");
    add_common(simulate);
    simulate->add_option("--x0", opt.x0, "initial position")->required();
    simulate->add_option("--c", opt.c, "initial fuel")->required();
    simulate->add_option("--paths", opt.paths, "number of paths");
    simulate->add_option("--dt", opt.dt, "time step");
    simulate->add_option("--horizon", opt.horizon, "truncation time (default 12/alpha)");
    simulate->add_option("--seed", opt.seed, "random seed");
    simulate->add_flag("--antithetic", opt.antithetic, "pair paths with mirrored noise");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    ModelGuard model;
    if (auto st = fuelstop_model_create(opt.alpha, opt.delta, opt.lambda, &model.m))
        return fail(st);

    // Everything except the constants report needs the solvable regime.
    if (!constants->parsed()) {
        if (auto st = fuelstop_model_check_regime(model.m)) return fail(st);
    }

    if (constants->parsed()) return run_constants(opt, model.m);
    if (boundaries->parsed()) return run_boundaries(opt, model.m);
    if (value->parsed()) return run_value(opt, model.m);
    if (verify->parsed()) return run_verify(opt, model.m);
    if (oracle->parsed()) return run_oracle(opt, model.m);
    if (simulate->parsed()) return run_simulate(opt, model.m);
    return 2;
}
