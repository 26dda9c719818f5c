#include "fuelstop/fuelstop.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "core/boundary.hpp"
#include "core/model.hpp"
#include "core/oracle.hpp"
#include "core/simulate.hpp"
#include "core/value.hpp"
#include "core/verify.hpp"

namespace {

thread_local std::string g_last_error;

struct ModelHandle {
    fuelstop::Model model;
};
struct BoundaryHandle {
    fuelstop::BoundaryPoint bp;
};
struct TableHandle {
    fuelstop::BoundaryTable table;
};

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class Fn>
fuelstop_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const fuelstop::ArgumentError& e) {
        g_last_error = e.what();
        return FUELSTOP_ERR_ARGUMENT;
    } catch (const fuelstop::DomainError& e) {
        g_last_error = e.what();
        return FUELSTOP_ERR_DOMAIN;
    } catch (const fuelstop::RegimeError& e) {
        g_last_error = e.what();
        return FUELSTOP_ERR_REGIME;
    } catch (const fuelstop::ValidationError& e) {
        g_last_error = e.what();
        return FUELSTOP_ERR_VALIDATION;
    } catch (const fuelstop::ConvergenceError& e) {
        g_last_error = e.what();
        return FUELSTOP_ERR_CONVERGENCE;
    } catch (const fuelstop::ResolutionError& e) {
        g_last_error = e.what();
        return FUELSTOP_ERR_RESOLUTION;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FUELSTOP_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return FUELSTOP_ERR_INTERNAL;
    }
}

fuelstop_status require(bool ok, const char* what) {
    if (ok) return FUELSTOP_OK;
    g_last_error = what;
    return FUELSTOP_ERR_ARGUMENT;
}

fuelstop_regime to_c(fuelstop::Regime r) {
    switch (r) {
        case fuelstop::Regime::New: return FUELSTOP_REGIME_NEW;
        case fuelstop::Regime::Open: return FUELSTOP_REGIME_OPEN;
        case fuelstop::Regime::Prior: return FUELSTOP_REGIME_PRIOR;
        case fuelstop::Regime::Degenerate: return FUELSTOP_REGIME_DEGENERATE;
    }
    return FUELSTOP_REGIME_DEGENERATE;
}

fuelstop_boundary_data to_c(const fuelstop::BoundaryPoint& bp) {
    return {bp.c, bp.F, bp.G, bp.A, bp.B, bp.G_prime, bp.valid ? 1 : 0};
}

constexpr double kDefaultCMax = 64.0;

}  // namespace

extern "C" {

const char* fuelstop_last_error(void) { return g_last_error.c_str(); }

void fuelstop_string_free(char* s) { std::free(s); }

const char* fuelstop_regime_name(fuelstop_regime r) {
    switch (r) {
        case FUELSTOP_REGIME_NEW: return "new";
        case FUELSTOP_REGIME_OPEN: return "open";
        case FUELSTOP_REGIME_PRIOR: return "prior";
        case FUELSTOP_REGIME_DEGENERATE: return "degenerate";
    }
    return "?";
}

fuelstop_status fuelstop_model_create(double alpha, double delta, double lambda,
                                      fuelstop_model** out) {
    if (auto st = require(out != nullptr, "null output pointer")) return st;
    *out = nullptr;
    return guarded([&] {
        auto* h = new ModelHandle{fuelstop::Model({alpha, delta, lambda})};
        *out = reinterpret_cast<fuelstop_model*>(h);
        return FUELSTOP_OK;
    });
}

void fuelstop_model_destroy(fuelstop_model* m) { delete reinterpret_cast<ModelHandle*>(m); }

fuelstop_status fuelstop_model_constants(const fuelstop_model* m, fuelstop_constants* out) {
    if (auto st = require(m && out, "null pointer")) return st;
    const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
    const auto& d = model.constants();
    *out = {model.alpha(),     model.delta(), model.lambda(), d.f0,
            d.lambda_star,     d.lambda_dagger, d.b0,
            to_c(d.regime)};
    return FUELSTOP_OK;
}

fuelstop_status fuelstop_constants_json(const fuelstop_model* m, char** out_json) {
    if (auto st = require(m && out_json, "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        *out_json = dup_string(fuelstop::constants_json(model));
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_model_check_regime(const fuelstop_model* m) {
    if (auto st = require(m != nullptr, "null model")) return st;
    return guarded([&] {
        reinterpret_cast<const ModelHandle*>(m)->model.require_new_regime();
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_boundary_solve(const fuelstop_model* m, double c,
                                        fuelstop_boundary** out) {
    if (auto st = require(m && out, "null pointer")) return st;
    *out = nullptr;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        auto* h = new BoundaryHandle{fuelstop::solve_boundary(model, c)};
        *out = reinterpret_cast<fuelstop_boundary*>(h);
        return FUELSTOP_OK;
    });
}

void fuelstop_boundary_destroy(fuelstop_boundary* b) {
    delete reinterpret_cast<BoundaryHandle*>(b);
}

fuelstop_status fuelstop_boundary_get(const fuelstop_boundary* b,
                                      fuelstop_boundary_data* out) {
    if (auto st = require(b && out, "null pointer")) return st;
    *out = to_c(reinterpret_cast<const BoundaryHandle*>(b)->bp);
    return FUELSTOP_OK;
}

fuelstop_status fuelstop_find_c2(const fuelstop_model* m, double c_max, double* out,
                                 int* truncated) {
    if (auto st = require(m && out, "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        const auto r = fuelstop::find_c2(model, c_max > 0.0 ? c_max : kDefaultCMax);
        *out = r.value;
        if (truncated) *truncated = r.truncated ? 1 : 0;
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_find_c0(const fuelstop_model* m, double c_max, double* out,
                                 int* truncated) {
    if (auto st = require(m && out, "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        const auto r = fuelstop::find_c0(model, c_max > 0.0 ? c_max : kDefaultCMax);
        *out = r.value;
        if (truncated) *truncated = r.truncated ? 1 : 0;
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_table_create(const fuelstop_model* m, const double* c_grid,
                                      size_t n, fuelstop_table** out) {
    if (auto st = require(m && out && (n == 0 || c_grid), "null pointer")) return st;
    *out = nullptr;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        auto* h = new TableHandle{
            fuelstop::boundary_table(model, std::span<const double>(c_grid, n))};
        *out = reinterpret_cast<fuelstop_table*>(h);
        return FUELSTOP_OK;
    });
}

void fuelstop_table_destroy(fuelstop_table* t) { delete reinterpret_cast<TableHandle*>(t); }

fuelstop_status fuelstop_table_size(const fuelstop_table* t, size_t* out) {
    if (auto st = require(t && out, "null pointer")) return st;
    *out = reinterpret_cast<const TableHandle*>(t)->table.points.size();
    return FUELSTOP_OK;
}

fuelstop_status fuelstop_table_point(const fuelstop_table* t, size_t i,
                                     fuelstop_boundary_data* out) {
    if (auto st = require(t && out, "null pointer")) return st;
    const auto& pts = reinterpret_cast<const TableHandle*>(t)->table.points;
    if (auto st = require(i < pts.size(), "table index out of range")) return st;
    *out = to_c(pts[i]);
    return FUELSTOP_OK;
}

fuelstop_status fuelstop_table_csv(const fuelstop_table* t, char** out) {
    if (auto st = require(t && out, "null pointer")) return st;
    return guarded([&] {
        *out = dup_string(fuelstop::to_csv(reinterpret_cast<const TableHandle*>(t)->table));
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_table_json(const fuelstop_table* t, char** out) {
    if (auto st = require(t && out, "null pointer")) return st;
    return guarded([&] {
        *out = dup_string(fuelstop::to_json(reinterpret_cast<const TableHandle*>(t)->table));
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_value0(const fuelstop_model* m, double x, double* out) {
    if (auto st = require(m && out, "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        model.require_new_regime();
        *out = fuelstop::value0(model, x);
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_value(const fuelstop_model* m, const fuelstop_boundary* b,
                               double x, double* out) {
    if (auto st = require(m && b && out, "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        const auto& bp = reinterpret_cast<const BoundaryHandle*>(b)->bp;
        *out = fuelstop::value(model, bp, x);
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_value_profile_csv(const fuelstop_model* m,
                                           const fuelstop_boundary* b, double x_min,
                                           double x_max, size_t steps, char** out) {
    if (auto st = require(m && b && out, "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        const auto& bp = reinterpret_cast<const BoundaryHandle*>(b)->bp;
        *out = dup_string(fuelstop::to_csv(
            fuelstop::sample_profile(model, bp, x_min, x_max, steps)));
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_value_profile_json(const fuelstop_model* m,
                                            const fuelstop_boundary* b, double x_min,
                                            double x_max, size_t steps, char** out) {
    if (auto st = require(m && b && out, "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        const auto& bp = reinterpret_cast<const BoundaryHandle*>(b)->bp;
        *out = dup_string(fuelstop::to_json(
            fuelstop::sample_profile(model, bp, x_min, x_max, steps)));
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_verify(const fuelstop_model* m, const double* c_list, size_t n,
                                double tol_scale, char** out_json, char** out_table,
                                int* all_passed) {
    if (auto st = require(m && (n == 0 || c_list), "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        fuelstop::VerifyConfig cfg;
        if (tol_scale > 0.0) cfg.tol_scale = tol_scale;
        const auto reports =
            fuelstop::run_suite(model, std::span<const double>(c_list, n), cfg);
        if (out_json) *out_json = dup_string(fuelstop::to_json(reports));
        if (out_table) *out_table = dup_string(fuelstop::to_table(reports));
        if (all_passed) *all_passed = fuelstop::all_passed(reports) ? 1 : 0;
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_oracle_minorant(const fuelstop_model* m, double c,
                                         size_t n_points, double x_max, char** out_csv,
                                         double* contact_left_x, double* contact_right_x) {
    if (auto st = require(m != nullptr, "null model")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        model.require_new_regime();
        const auto r = fuelstop::minorant_oracle(model, c, n_points, x_max);
        if (out_csv) *out_csv = dup_string(fuelstop::to_csv(r));
        if (contact_left_x) *contact_left_x = model.scale_inv(r.contact_left_y);
        if (contact_right_x) *contact_right_x = model.scale_inv(r.contact_right_y);
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_oracle_psor(const fuelstop_model* m, double c, size_t n_nodes,
                                     double x_max, double omega, double tol,
                                     size_t max_iter, char** out_csv, double* free_first_x,
                                     double* free_last_x) {
    if (auto st = require(m != nullptr, "null model")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        model.require_new_regime();
        const auto r = fuelstop::psor_oracle(model, c, n_nodes, x_max, omega,
                                             tol > 0.0 ? tol : 1e-10, max_iter);
        if (out_csv) *out_csv = dup_string(fuelstop::to_csv(r));
        if (free_first_x) *free_first_x = r.free_first_x;
        if (free_last_x) *free_last_x = r.free_last_x;
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_simulate(const fuelstop_model* m, const fuelstop_boundary* b,
                                  const fuelstop_sim_config* cfg, fuelstop_sim_result* out) {
    if (auto st = require(m && b && cfg && out, "null pointer")) return st;
    return guarded([&] {
        const auto& model = reinterpret_cast<const ModelHandle*>(m)->model;
        const auto& bp = reinterpret_cast<const BoundaryHandle*>(b)->bp;
        fuelstop::SimConfig sc;
        sc.x0 = cfg->x0;
        sc.fuel = cfg->fuel;
        sc.n_paths = cfg->n_paths;
        sc.dt = cfg->dt;
        sc.horizon = cfg->horizon;
        sc.seed = cfg->seed;
        sc.antithetic = cfg->antithetic != 0;
        sc.threads = cfg->threads;
        const auto r = fuelstop::simulate_policy(model, bp, sc);
        *out = {r.mean_cost,      r.std_error, r.tail_bound, r.n_paths,
                r.n_jumped,       r.n_stopped_left, r.truncated,
                r.coarse_dt ? 1 : 0};
        return FUELSTOP_OK;
    });
}

fuelstop_status fuelstop_sim_result_json(const fuelstop_sim_config* cfg,
                                         const fuelstop_sim_result* r, char** out) {
    if (auto st = require(cfg && r && out, "null pointer")) return st;
    return guarded([&] {
        fuelstop::SimConfig sc;
        sc.dt = cfg->dt;
        sc.horizon = cfg->horizon;
        fuelstop::SimResult sr;
        sr.mean_cost = r->mean_cost;
        sr.std_error = r->std_error;
        sr.tail_bound = r->tail_bound;
        sr.n_paths = r->n_paths;
        sr.n_jumped = r->n_jumped;
        sr.n_stopped_left = r->n_stopped_left;
        sr.truncated = r->truncated;
        *out = dup_string(fuelstop::to_json(sc, sr));
        return FUELSTOP_OK;
    });
}

}  // extern "C"
