#ifndef FWLAB_H
#define FWLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FWLAB_API __declspec(dllexport)
#else
#define FWLAB_API __attribute__((visibility("default")))
#endif

/* Every call returns one of these; on failure fwlab_last_error() describes it. */
enum fwlab_status {
  FWLAB_OK = 0,
  FWLAB_ERR_ARGUMENT = 1, /* null handle or malformed argument */
  FWLAB_ERR_USAGE = 2,    /* strategy incompatible with the instance */
  FWLAB_ERR_COMPUTE = 3,  /* construction, validation or run failure */
  FWLAB_ERR_IO = 4,
  FWLAB_ERR_INTERNAL = 5
};

typedef struct fwlab_instance fwlab_instance;
typedef struct fwlab_objective fwlab_objective;
typedef struct fwlab_trajectory fwlab_trajectory;
typedef struct fwlab_certificate fwlab_certificate;

/* Message of the last failed call on this thread; never null. */
FWLAB_API const char* fwlab_last_error(void);
FWLAB_API const char* fwlab_version(void);
/* Releases strings returned through char** out-parameters. */
FWLAB_API void fwlab_string_free(char* s);

/* name: "1", "2", "3", "4", "misA", "misB". strategy may be null for the
 * instance default; an incompatible strategy is FWLAB_ERR_USAGE unless
 * force is nonzero. depth applies to the sketch instances, K to "3". */
FWLAB_API int fwlab_instance_create(const char* name, const char* strategy, int force, size_t depth, int K,
                                    fwlab_instance** out);
FWLAB_API void fwlab_instance_free(fwlab_instance* inst);
FWLAB_API int fwlab_instance_json(const fwlab_instance* inst, char** out);
/* Hypothesis checks of the instance sketch; *pass is 1 when all hold. */
FWLAB_API int fwlab_instance_validate(const fwlab_instance* inst, int* pass, char** report_json);
/* Exact iterates x_0..x_T as JSON lines {"t", "x": {"exact", "float"}}. */
FWLAB_API int fwlab_instance_reference(const fwlab_instance* inst, size_t T, char** jsonl);
/* Checks a sketch given as JSON. */
FWLAB_API int fwlab_validate_sketch_json(const char* sketch_json, int* pass, char** report_json);

/* Surrogate objective of the instance (closed form for the demos). */
FWLAB_API int fwlab_objective_create(const fwlab_instance* inst, double r_scale, double eta0, fwlab_objective** out);
FWLAB_API void fwlab_objective_free(fwlab_objective* obj);
FWLAB_API int fwlab_objective_eval(const fwlab_objective* obj, double x, double y, double* f, double grad[2]);
/* Sampled Lipschitz constant of the gradient over the constraint set. */
FWLAB_API int fwlab_objective_lipschitz(const fwlab_objective* obj, size_t samples, uint64_t seed, double* L);

typedef struct fwlab_run_config {
  size_t iterations;
  double L;            /* closed loop; <= 0 selects 2 * sampled estimate */
  double tol;          /* line search; <= 0 selects 1e-12 */
  size_t samples;      /* Lipschitz sampling; 0 selects 1000 */
  uint64_t seed;
  int specified_oracle; /* nonzero replaces a demo script by the specified oracle */
} fwlab_run_config;

FWLAB_API void fwlab_run_config_default(fwlab_run_config* cfg);
FWLAB_API int fwlab_run(const fwlab_instance* inst, const fwlab_objective* obj, const fwlab_run_config* cfg,
                        fwlab_trajectory** out);
FWLAB_API void fwlab_trajectory_free(fwlab_trajectory* traj);
FWLAB_API size_t fwlab_trajectory_length(const fwlab_trajectory* traj);
/* L used for the step sizes and the rate checks. */
FWLAB_API double fwlab_trajectory_L(const fwlab_trajectory* traj);
FWLAB_API int fwlab_trajectory_point(const fwlab_trajectory* traj, size_t t, double x[2], double v[2], double* gamma,
                                     double* f, double* gap);
/* format: "jsonl" or "csv". */
FWLAB_API int fwlab_trajectory_write(const fwlab_trajectory* traj, const char* path, const char* format);
FWLAB_API int fwlab_trajectory_read(const char* path, fwlab_trajectory** out);

/* L <= 0 uses the trajectory's own L (unknown for trajectories read back). */
FWLAB_API int fwlab_certify(const fwlab_instance* inst, const fwlab_trajectory* traj, double L, fwlab_certificate** out);
FWLAB_API void fwlab_certificate_free(fwlab_certificate* cert);
FWLAB_API int fwlab_certificate_json(const fwlab_certificate* cert, char** out);
FWLAB_API int fwlab_certificate_passed(const fwlab_certificate* cert, int* passed);

/* Rate check of a trajectory against the instance's constraint set. strategy
 * may be null for the trajectory's own; L <= 0 as in fwlab_certify. */
FWLAB_API int fwlab_check_rates(const fwlab_instance* inst, const fwlab_trajectory* traj, const char* strategy, double L,
                                char** report_json);

/* Worst-case bound after t >= 1 iterations. */
FWLAB_API int fwlab_rate_bound(const char* strategy, double L, double diam, size_t t, double* out);

#ifdef __cplusplus
}
#endif

#endif
