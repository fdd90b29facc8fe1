/* C interface of the specglue shared library: spectra of model boundary
 * geometries, zeta-determinant and gluing computations, and machine-readable
 * result tables. All objects are opaque handles; every fallible call returns
 * a status code and leaves details in sg_last_error(). */

#ifndef SPECGLUE_H
#define SPECGLUE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sg_status {
  SG_OK = 0,
  SG_ERR_INVALID_ARGUMENT = 1,
  SG_ERR_PARSE = 2,
  SG_ERR_INVARIANT = 3,
  SG_ERR_UNSUPPORTED = 4,
  SG_ERR_IO = 5,
  SG_ERR_TOLERANCE = 6,
  SG_ERR_INTERNAL = 7
} sg_status;

typedef struct sg_spectrum sg_spectrum;
typedef struct sg_report sg_report;

const char* sg_version(void);
/* Message of the most recent failure on this thread. */
const char* sg_last_error(void);

/* ------------------------------------------------------------------ */
/* Boundary spectra                                                     */

/* Twisted flat-torus model spectrum up to the eigenvalue cutoff. With
 * require_acyclic nonzero, an untwisted request is rejected. */
sg_status sg_spectrum_torus(double L1, double L2, double alpha, double beta,
                            double cutoff, int require_acyclic, sg_spectrum** out);
sg_status sg_spectrum_load(const char* path, sg_spectrum** out);
sg_status sg_spectrum_save(const sg_spectrum* s, const char* path);
sg_status sg_spectrum_truncate(const sg_spectrum* s, double lambda_cap,
                               sg_spectrum** out);

size_t sg_spectrum_mode_count(const sg_spectrum* s);
double sg_spectrum_tail_estimate(const sg_spectrum* s);
int sg_spectrum_dimension(const sg_spectrum* s);
int sg_spectrum_acyclic(const sg_spectrum* s);
void sg_spectrum_free(sg_spectrum* s);

/* ------------------------------------------------------------------ */
/* Computations; each produces a result table.                          */

/* bc: "pminus" | "pplus" | "rel" | "abs" | "all"; q: form degree or -1 for
 * all degrees 0..m. */
sg_status sg_run_det(const sg_spectrum* s, const char* bc, int q, const double* r,
                     size_t nr, double tol, sg_report** out);
sg_status sg_run_glue(const sg_spectrum* s, const char* bc, int q, double r, double L,
                      double tol, sg_report** out);
sg_status sg_run_adiabatic(const sg_spectrum* s, const double* r, size_t nr,
                           double tol, sg_report** out);
sg_status sg_run_flow(int dim, int paths, unsigned long long seed, double tol,
                      sg_report** out);
sg_status sg_run_torsion(const sg_spectrum* s, double r, double L, double twist,
                         double tol, sg_report** out);

/* ------------------------------------------------------------------ */
/* Result tables                                                        */

size_t sg_report_rows(const sg_report* rep);
size_t sg_report_cols(const sg_report* rep);
const char* sg_report_column(const sg_report* rep, size_t j);
/* Text of any cell; numbers are rendered in shortest round-trip form. */
sg_status sg_report_cell(const sg_report* rep, size_t i, size_t j, char* buf,
                         size_t bufsize);
/* Numeric value of a cell; NaN for text cells. */
double sg_report_number(const sg_report* rep, size_t i, size_t j);
/* 1 when every residual is within max(error_bound, tolerance). */
int sg_report_pass(const sg_report* rep);
sg_status sg_report_write(const sg_report* rep, const char* path, const char* format);
size_t sg_report_meta_count(const sg_report* rep);
sg_status sg_report_meta(const sg_report* rep, size_t i, char* key, size_t keysize,
                         char* value, size_t valuesize);
void sg_report_free(sg_report* rep);

#ifdef __cplusplus
}
#endif

#endif /* SPECGLUE_H */
