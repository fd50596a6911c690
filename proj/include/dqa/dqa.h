/* C interface to the dissipative annealing solvers.
 *
 * All functions return a dqa_status; on failure a description is available
 * from dqa_last_error() (per thread, valid until the next failing call on the
 * same thread). Handles are opaque and must be released with their _free
 * function. */
#ifndef DQA_H
#define DQA_H

#include <stddef.h>

#if defined(_WIN32)
#define DQA_API __declspec(dllexport)
#else
#define DQA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dqa_status {
  DQA_OK = 0,
  DQA_ERR_CONFIG = 1,
  DQA_ERR_NUMERICAL = 2,
  DQA_ERR_ORACLE = 3,
  DQA_ERR_INVALID_ARGUMENT = 4,
  DQA_ERR_INTERNAL = 5
} dqa_status;

typedef enum dqa_bath_kind {
  DQA_BATH_NONE = 0,
  DQA_BATH_PUMP = 1,
  DQA_BATH_DECAY = 2,
  DQA_BATH_MIXED = 3, /* decay at kappa, pump at eta * kappa */
  DQA_BATH_DEPHASING = 4
} dqa_bath_kind;

typedef enum dqa_sector {
  DQA_SECTOR_AUTO = -1, /* odd periodic for dephasing, even antiperiodic otherwise */
  DQA_SECTOR_EVEN = 0,
  DQA_SECTOR_ODD = 1
} dqa_sector;

typedef enum dqa_solver {
  DQA_SOLVER_UNITARY_BDG = 0,
  DQA_SOLVER_MODE_LIOUVILLE = 1,
  DQA_SOLVER_DEPHASING_CORR = 2,
  DQA_SOLVER_DENSE_ORACLE = 3
} dqa_solver;

typedef struct dqa_problem {
  int L;
  int sector; /* dqa_sector */
  int bath;   /* dqa_bath_kind */
  double kappa;
  double eta;
  double tau;
  double dt;
  double t_in_factor;
  int stride;  /* sample every `stride` steps, plus the last; <= 0 keeps only the ends */
  int workers; /* <= 0: hardware concurrency */
} dqa_problem;

typedef struct dqa_sample {
  double t;
  double gamma;
  double energy;
  double ground_energy;
  double epsilon;
} dqa_sample;

typedef struct dqa_trajectory dqa_trajectory;
typedef struct dqa_sweep dqa_sweep;

typedef struct dqa_sweep_point {
  int bath;
  double kappa;
  double eta;
  int L;
  double tau;
  double dt;
  int solver;
  double epsilon_final; /* NaN when status != DQA_OK */
  int status;
} dqa_sweep_point;

typedef struct dqa_power_law {
  double exponent;
  double prefactor;
  double residual;
  double lo;
  double hi;
  int n;
} dqa_power_law;

typedef struct dqa_curve_point {
  double tau;
  double epsilon;
} dqa_curve_point;

typedef struct dqa_ansatz_prediction {
  double n_kz;
  double n_inc;
  double n_total;
  double tau_opt;
  double n_opt;
  double epsilon_opt;
} dqa_ansatz_prediction;

typedef struct dqa_oracle_result {
  double max_abs_diff;
  double tolerance;
  int passed;
  int solver;
} dqa_oracle_result;

DQA_API const char* dqa_version(void);
DQA_API const char* dqa_last_error(void);
DQA_API const char* dqa_bath_name(int bath);
DQA_API const char* dqa_solver_name(int solver);
DQA_API dqa_status dqa_parse_bath(const char* name, int* bath);

/* Defaults: L = 1000, even sector, no bath, tau = 10, dt = 1e-2,
 * t_in_factor = 5, stride = 100, workers = 0. */
DQA_API void dqa_problem_init(dqa_problem* p);

DQA_API dqa_status dqa_run(const dqa_problem* p, dqa_trajectory** out);
DQA_API size_t dqa_trajectory_length(const dqa_trajectory* t);
DQA_API dqa_status dqa_trajectory_sample(const dqa_trajectory* t, size_t i, dqa_sample* out);
DQA_API int dqa_trajectory_solver(const dqa_trajectory* t);
DQA_API void dqa_trajectory_free(dqa_trajectory* t);

/* The sweep takes L, sector, dt, t_in_factor and workers from `base`. */
DQA_API dqa_status dqa_sweep_create(const dqa_problem* base, dqa_sweep** out);
DQA_API dqa_status dqa_sweep_add_tau(dqa_sweep* s, double tau);
DQA_API dqa_status dqa_sweep_add_bath(dqa_sweep* s, int bath, double kappa, double eta);
/* Returns DQA_ERR_NUMERICAL if any point failed; the other points are kept. */
DQA_API dqa_status dqa_sweep_run(dqa_sweep* s);
DQA_API size_t dqa_sweep_size(const dqa_sweep* s);
DQA_API dqa_status dqa_sweep_point_get(const dqa_sweep* s, size_t i, dqa_sweep_point* out);
/* Empty string for successful points. */
DQA_API const char* dqa_sweep_point_error(const dqa_sweep* s, size_t i);
DQA_API void dqa_sweep_free(dqa_sweep* s);

DQA_API dqa_status dqa_fit_power_law(const double* x, const double* y, size_t n, double lo, double hi,
                                     dqa_power_law* out);
DQA_API dqa_status dqa_find_optimum(const double* tau, const double* eps, size_t n, dqa_curve_point* out);
/* *found is 0 when the curve has no overshoot (not an error). */
DQA_API dqa_status dqa_find_overshoot(const double* tau, const double* eps, size_t n, double epsilon_inf,
                                      double tolerance, int* found, dqa_curve_point* out);
/* Infinitely slow limit of the excess energy for p's bath and chain. */
DQA_API dqa_status dqa_epsilon_infinity(const dqa_problem* p, double gamma, double* out);
DQA_API dqa_status dqa_ansatz(double kappa, double tau, dqa_ansatz_prediction* out);

/* Fast solver against the dense oracle for p (L <= 6), every step compared.
 * Returns DQA_ERR_ORACLE with *out filled when the tolerance is exceeded. */
DQA_API dqa_status dqa_check_case(const dqa_problem* p, double tolerance, dqa_oracle_result* out);

/* The built-in oracle matrix. dqa_default_case fills L, sector, bath, kappa,
 * eta and tau of *p and leaves the other fields alone. */
DQA_API size_t dqa_default_case_count(void);
DQA_API dqa_status dqa_default_case(size_t i, dqa_problem* p);

#ifdef __cplusplus
}
#endif

#endif /* DQA_H */
