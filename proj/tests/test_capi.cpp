// Exercises the shared library exactly as an external client would: through
// the C header only.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "fuelstop/fuelstop.h"

static int failures = 0;

#define CHECK(cond)                                                              \
    do {                                                                         \
        if (!(cond)) {                                                           \
            ++failures;                                                          \
            std::fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
        }                                                                        \
    } while (0)

static std::string take(char* s) {
    std::string out = s ? s : "";
    fuelstop_string_free(s);
    return out;
}

int main() {
    // Constants and regime classification.
    fuelstop_model* m = nullptr;
    CHECK(fuelstop_model_create(1.0, 1.0, 0.9, &m) == FUELSTOP_OK);
    fuelstop_constants k{};
    CHECK(fuelstop_model_constants(m, &k) == FUELSTOP_OK);
    CHECK(std::fabs(k.f0 - 2.375100220297941) < 1e-12);
    CHECK(std::fabs(k.lambda_star - 0.48904167641086815) < 1e-12);
    CHECK(std::fabs(k.lambda_dagger - 0.6344492934602315) < 1e-9);
    CHECK(std::fabs(k.b0 + 9.659356928337958) < 1e-11);
    CHECK(k.regime == FUELSTOP_REGIME_NEW);
    CHECK(fuelstop_model_check_regime(m) == FUELSTOP_OK);

    const std::string json = [&] {
        char* s = nullptr;
        CHECK(fuelstop_constants_json(m, &s) == FUELSTOP_OK);
        return take(s);
    }();
    CHECK(json.find("\"lambda_star\"") != std::string::npos);
    CHECK(json.find("\"regime\": \"new\"") != std::string::npos);

    // Refused regimes carry the classification in the error message.
    const struct {
        double lambda;
        fuelstop_regime want;
        const char* name;
    } gates[] = {
        {0.3, FUELSTOP_REGIME_PRIOR, "prior"},
        {0.55, FUELSTOP_REGIME_OPEN, "open"},
        {1.2, FUELSTOP_REGIME_DEGENERATE, "degenerate"},
    };
    for (const auto& g : gates) {
        fuelstop_model* other = nullptr;
        CHECK(fuelstop_model_create(1.0, 1.0, g.lambda, &other) == FUELSTOP_OK);
        fuelstop_constants kk{};
        CHECK(fuelstop_model_constants(other, &kk) == FUELSTOP_OK);
        CHECK(kk.regime == g.want);
        CHECK(fuelstop_model_check_regime(other) == FUELSTOP_ERR_REGIME);
        CHECK(std::strstr(fuelstop_last_error(), g.name) != nullptr);
        fuelstop_boundary* nob = nullptr;
        CHECK(fuelstop_boundary_solve(other, 0.02, &nob) == FUELSTOP_ERR_REGIME);
        CHECK(nob == nullptr);
        fuelstop_model_destroy(other);
    }
    {
        fuelstop_model* deg = nullptr;
        fuelstop_model_create(1.0, 1.0, 1.2, &deg);
        fuelstop_constants kk{};
        fuelstop_model_constants(deg, &kk);
        CHECK(std::isnan(kk.f0));
        CHECK(std::isnan(kk.b0));
        fuelstop_model_destroy(deg);
    }

    fuelstop_model* bad = nullptr;
    CHECK(fuelstop_model_create(-1.0, 1.0, 0.9, &bad) == FUELSTOP_ERR_ARGUMENT);
    CHECK(bad == nullptr);
    CHECK(fuelstop_model_create(1.0, 1.0, 0.9, nullptr) == FUELSTOP_ERR_ARGUMENT);

    // Boundary solve + thresholds.
    fuelstop_boundary* b = nullptr;
    CHECK(fuelstop_boundary_solve(m, 0.02, &b) == FUELSTOP_OK);
    fuelstop_boundary_data bd{};
    CHECK(fuelstop_boundary_get(b, &bd) == FUELSTOP_OK);
    CHECK(bd.valid == 1);
    CHECK(bd.F > 0.45 && bd.F < 0.5);
    CHECK(bd.G > 0.51 && bd.G < 2.5);
    CHECK(bd.A < 0.0 && bd.B < 0.0);
    CHECK(bd.G_prime > 1.0);

    double c0 = 0.0, c2 = 0.0;
    int c0_trunc = -1, c2_trunc = -1;
    CHECK(fuelstop_find_c0(m, 0.0, &c0, &c0_trunc) == FUELSTOP_OK);
    CHECK(fuelstop_find_c2(m, 0.0, &c2, &c2_trunc) == FUELSTOP_OK);
    CHECK(c0_trunc == 0);
    CHECK(std::fabs(c0 - 0.19112217907851192) < 1e-5);
    CHECK(c2_trunc == 1);
    CHECK(c2 > c0);

    const double grid[] = {0.02, 0.05, 0.1, 0.15};
    fuelstop_table* t = nullptr;
    CHECK(fuelstop_table_create(m, grid, 4, &t) == FUELSTOP_OK);
    size_t nt = 0;
    CHECK(fuelstop_table_size(t, &nt) == FUELSTOP_OK);
    CHECK(nt == 4);
    fuelstop_boundary_data p0{}, p3{};
    CHECK(fuelstop_table_point(t, 0, &p0) == FUELSTOP_OK);
    CHECK(fuelstop_table_point(t, 3, &p3) == FUELSTOP_OK);
    CHECK(p0.F > p3.F);
    CHECK(p0.G < p3.G);
    CHECK(fuelstop_table_point(t, 4, &p3) == FUELSTOP_ERR_ARGUMENT);
    {
        char* s = nullptr;
        CHECK(fuelstop_table_csv(t, &s) == FUELSTOP_OK);
        const std::string csv = take(s);
        CHECK(csv.rfind("c,F,G,A,B,G_prime\n", 0) == 0);
        CHECK(fuelstop_table_json(t, &s) == FUELSTOP_OK);
        CHECK(take(s).find("\"c0\"") != std::string::npos);
    }
    fuelstop_table_destroy(t);

    // Values and profiles.
    double v = 0.0;
    CHECK(fuelstop_value0(m, 3.0, &v) == FUELSTOP_OK);
    CHECK(std::fabs(v - 8.8612) < 2e-3);
    CHECK(fuelstop_value(m, b, bd.F, &v) == FUELSTOP_OK);
    CHECK(std::fabs(v - bd.F * bd.F) < 1e-12);
    {
        char* s = nullptr;
        CHECK(fuelstop_value_profile_csv(m, b, 0.0, 1.0, 21, &s) == FUELSTOP_OK);
        CHECK(take(s).rfind("x,v_tilde,v,obstacle,region\n", 0) == 0);
        CHECK(fuelstop_value_profile_json(m, b, 0.0, 1.0, 21, &s) == FUELSTOP_OK);
        CHECK(take(s).find("\"v_tilde\"") != std::string::npos);
        CHECK(fuelstop_value_profile_csv(m, b, 1.0, 0.0, 21, &s) == FUELSTOP_ERR_ARGUMENT);
    }

    // Verifier via the C surface.
    {
        const double cs[] = {0.02, 0.08};
        char* rep_json = nullptr;
        char* rep_table = nullptr;
        int ok = 0;
        CHECK(fuelstop_verify(m, cs, 2, 1.0, &rep_json, &rep_table, &ok) == FUELSTOP_OK);
        CHECK(ok == 1);
        CHECK(take(rep_json).find("\"smooth_fit_F\"") != std::string::npos);
        CHECK(take(rep_table).find("PASS") != std::string::npos);

        fuelstop_model* open_m = nullptr;
        fuelstop_model_create(1.0, 1.0, 0.55, &open_m);
        CHECK(fuelstop_verify(open_m, cs, 2, 1.0, nullptr, nullptr, &ok) ==
              FUELSTOP_ERR_REGIME);
        fuelstop_model_destroy(open_m);
    }

    // Oracles.
    {
        double xl = 0.0, xr = 0.0;
        CHECK(fuelstop_oracle_minorant(m, 0.02, 200001, 0.0, nullptr, &xl, &xr) ==
              FUELSTOP_OK);
        const double dx = (k.f0 + 0.02 + 1.0) / 200000;
        CHECK(std::fabs(xl - bd.F) <= 2.0 * dx);
        CHECK(std::fabs(xr - bd.G) <= 2.0 * dx);
        CHECK(fuelstop_oracle_minorant(m, 0.02, 64, 0.0, nullptr, &xl, &xr) ==
              FUELSTOP_ERR_RESOLUTION);

        double lo = 0.0, hi = 0.0;
        char* csv = nullptr;
        CHECK(fuelstop_oracle_psor(m, 0.02, 4001, 0.0, 0.0, 1e-11, 0, &csv, &lo, &hi) ==
              FUELSTOP_OK);
        CHECK(take(csv).rfind("x,v,stop\n", 0) == 0);
        const double h = (k.f0 + 0.02 + std::sqrt(2.0) + 2.0) / 4000;
        CHECK(std::fabs(lo - bd.F) <= 2.0 * h);
        CHECK(std::fabs(hi - bd.G) <= 2.0 * h);
        CHECK(fuelstop_oracle_psor(m, 0.02, 4001, 0.0, 2.5, 1e-11, 0, &csv, &lo, &hi) ==
              FUELSTOP_ERR_ARGUMENT);
    }

    // Simulation.
    {
        fuelstop_sim_config cfg{};
        cfg.x0 = 0.25;
        cfg.fuel = 0.02;
        cfg.n_paths = 50;
        cfg.dt = 1e-4;
        cfg.horizon = 12.0;
        cfg.seed = 9;
        fuelstop_sim_result r{};
        CHECK(fuelstop_simulate(m, b, &cfg, &r) == FUELSTOP_OK);
        CHECK(r.mean_cost == 0.0625);
        CHECK(r.std_error == 0.0);
        CHECK(r.n_stopped_left == 50);
        char* s = nullptr;
        CHECK(fuelstop_sim_result_json(&cfg, &r, &s) == FUELSTOP_OK);
        const std::string sj = take(s);
        CHECK(sj.find("\"mean_cost\"") != std::string::npos);
        CHECK(sj.find("\"tail_bound\"") != std::string::npos);

        cfg.fuel = 0.5;  // mismatched fuel level
        CHECK(fuelstop_simulate(m, b, &cfg, &r) == FUELSTOP_ERR_ARGUMENT);
    }

    fuelstop_boundary_destroy(b);
    fuelstop_model_destroy(m);
    fuelstop_boundary_destroy(nullptr);  // destroying null is a no-op
    fuelstop_model_destroy(nullptr);

    if (failures == 0) std::printf("capi: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
