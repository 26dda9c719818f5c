/* fuelstop: solver, verifier and simulator for a finite-fuel control problem
 * with discretionary stopping, in the parameter regime with moving
 * absorb/repel boundaries.
 *
 * C API of the shared library. Handles are opaque; every function returns a
 * status code and writes through out-parameters. Strings returned through
 * `char**` are heap-allocated; release them with fuelstop_string_free().
 * On failure fuelstop_last_error() describes the problem (thread-local).
 */
#ifndef FUELSTOP_H
#define FUELSTOP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fuelstop_status {
    FUELSTOP_OK = 0,
    FUELSTOP_ERR_ARGUMENT = 1,    /* invalid pointer or numeric input */
    FUELSTOP_ERR_DOMAIN = 2,      /* evaluation outside a function's domain */
    FUELSTOP_ERR_REGIME = 3,      /* parameters outside the solvable regime */
    FUELSTOP_ERR_VALIDATION = 4,  /* solved object failed its audit */
    FUELSTOP_ERR_CONVERGENCE = 5, /* iteration budget exhausted */
    FUELSTOP_ERR_RESOLUTION = 6,  /* grid too coarse for the feature */
    FUELSTOP_ERR_INTERNAL = 7
} fuelstop_status;

typedef enum fuelstop_regime {
    FUELSTOP_REGIME_NEW = 0,       /* lambda in (lambda_dagger, alpha*delta) */
    FUELSTOP_REGIME_OPEN = 1,      /* lambda in (lambda_star, lambda_dagger] */
    FUELSTOP_REGIME_PRIOR = 2,     /* lambda <= lambda_star */
    FUELSTOP_REGIME_DEGENERATE = 3 /* lambda >= alpha*delta */
} fuelstop_regime;

typedef struct fuelstop_model fuelstop_model;       /* parameters + derived constants */
typedef struct fuelstop_boundary fuelstop_boundary; /* solved point at one fuel level */
typedef struct fuelstop_table fuelstop_table;       /* boundary table over a fuel grid */

const char* fuelstop_last_error(void);
void fuelstop_string_free(char* s);
const char* fuelstop_regime_name(fuelstop_regime r);

/* ---- model ---------------------------------------------------------- */

fuelstop_status fuelstop_model_create(double alpha, double delta, double lambda,
                                      fuelstop_model** out);
void fuelstop_model_destroy(fuelstop_model* m);

typedef struct fuelstop_constants {
    double alpha, delta, lambda;
    double f0;            /* no-fuel free boundary (NaN when degenerate) */
    double lambda_star;   /* threshold of the previously solved range */
    double lambda_dagger; /* lower edge of the range solved here */
    double b0;            /* no-fuel value coefficient (NaN when degenerate) */
    fuelstop_regime regime;
} fuelstop_constants;

fuelstop_status fuelstop_model_constants(const fuelstop_model* m, fuelstop_constants* out);
fuelstop_status fuelstop_constants_json(const fuelstop_model* m, char** out_json);
/* FUELSTOP_OK only in the regime the solver covers; FUELSTOP_ERR_REGIME
 * otherwise, with the classification in fuelstop_last_error(). */
fuelstop_status fuelstop_model_check_regime(const fuelstop_model* m);

/* ---- moving boundaries ---------------------------------------------- */

typedef struct fuelstop_boundary_data {
    double c;       /* fuel level */
    double F;       /* absorbing boundary */
    double G;       /* repelling boundary */
    double A, B;    /* common tangent, transformed scale */
    double G_prime; /* dG/dc */
    int valid;
} fuelstop_boundary_data;

fuelstop_status fuelstop_boundary_solve(const fuelstop_model* m, double c,
                                        fuelstop_boundary** out);
void fuelstop_boundary_destroy(fuelstop_boundary* b);
fuelstop_status fuelstop_boundary_get(const fuelstop_boundary* b,
                                      fuelstop_boundary_data* out);

/* Fuel thresholds: c2 bounds tangency with the near obstacle branch, c0
 * additionally requires the repelling boundary to outpace the fuel spent.
 * `truncated` reports a scan that ran out at c_max (pass c_max <= 0 for the
 * default). */
fuelstop_status fuelstop_find_c2(const fuelstop_model* m, double c_max, double* out,
                                 int* truncated);
fuelstop_status fuelstop_find_c0(const fuelstop_model* m, double c_max, double* out,
                                 int* truncated);

fuelstop_status fuelstop_table_create(const fuelstop_model* m, const double* c_grid,
                                      size_t n, fuelstop_table** out);
void fuelstop_table_destroy(fuelstop_table* t);
fuelstop_status fuelstop_table_size(const fuelstop_table* t, size_t* out);
fuelstop_status fuelstop_table_point(const fuelstop_table* t, size_t i,
                                     fuelstop_boundary_data* out);
fuelstop_status fuelstop_table_csv(const fuelstop_table* t, char** out);
fuelstop_status fuelstop_table_json(const fuelstop_table* t, char** out);

/* ---- value functions ------------------------------------------------- */

/* Expected total cost with no fuel (even in x). */
fuelstop_status fuelstop_value0(const fuelstop_model* m, double x, double* out);
/* Expected total cost at the boundary point's fuel level. */
fuelstop_status fuelstop_value(const fuelstop_model* m, const fuelstop_boundary* b,
                               double x, double* out);
/* Sampled profile columns x, v_tilde, v, obstacle, region. */
fuelstop_status fuelstop_value_profile_csv(const fuelstop_model* m,
                                           const fuelstop_boundary* b, double x_min,
                                           double x_max, size_t steps, char** out);
fuelstop_status fuelstop_value_profile_json(const fuelstop_model* m,
                                            const fuelstop_boundary* b, double x_min,
                                            double x_max, size_t steps, char** out);

/* ---- verification suite ---------------------------------------------- */

/* Runs every analytic and oracle cross-check at the given fuel levels
 * (c_list may be NULL/0 for the level-independent subset). tol_scale
 * multiplies every tolerance. Outputs are optional (pass NULL to skip);
 * all_passed receives 1 when every check passed. */
fuelstop_status fuelstop_verify(const fuelstop_model* m, const double* c_list, size_t n,
                                double tol_scale, char** out_json, char** out_table,
                                int* all_passed);

/* ---- brute-force oracles --------------------------------------------- */

/* Grid convex-minorant of the transformed obstacle. Contacts are reported
 * in the natural scale. Pass x_max <= 0 for the default window. */
fuelstop_status fuelstop_oracle_minorant(const fuelstop_model* m, double c,
                                         size_t n_points, double x_max, char** out_csv,
                                         double* contact_left_x, double* contact_right_x);

/* Discrete complementarity solve of the stopping problem by projected SOR.
 * omega <= 0 selects adaptive relaxation, x_max <= 0 and max_iter == 0 the
 * defaults. Free-set endpoints are reported in the natural scale. */
fuelstop_status fuelstop_oracle_psor(const fuelstop_model* m, double c, size_t n_nodes,
                                     double x_max, double omega, double tol,
                                     size_t max_iter, char** out_csv, double* free_first_x,
                                     double* free_last_x);

/* ---- policy simulation ----------------------------------------------- */

typedef struct fuelstop_sim_config {
    double x0;           /* initial position, >= 0 */
    double fuel;         /* initial fuel; must equal the boundary point's c */
    uint64_t n_paths;
    double dt;
    double horizon;      /* >= 10/alpha */
    uint64_t seed;
    int antithetic;
    int threads;         /* 0 = hardware default */
} fuelstop_sim_config;

typedef struct fuelstop_sim_result {
    double mean_cost;
    double std_error;
    double tail_bound;   /* bound on the horizon-truncation bias */
    uint64_t n_paths;
    uint64_t n_jumped;
    uint64_t n_stopped_left;
    uint64_t truncated;
    int coarse_dt;       /* dt too coarse for the continuation gap */
} fuelstop_sim_result;

fuelstop_status fuelstop_simulate(const fuelstop_model* m, const fuelstop_boundary* b,
                                  const fuelstop_sim_config* cfg, fuelstop_sim_result* out);
fuelstop_status fuelstop_sim_result_json(const fuelstop_sim_config* cfg,
                                         const fuelstop_sim_result* r, char** out);

#ifdef __cplusplus
}
#endif

#endif /* FUELSTOP_H */
