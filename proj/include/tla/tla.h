#ifndef TLA_TLA_H
#define TLA_TLA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as exit codes of the command-line tool. */
typedef enum tla_status {
  TLA_OK = 0,
  TLA_ERR_CONFIG = 1,
  TLA_ERR_NON_CENTRAL = 2,
  TLA_ERR_SELFTEST_FAILED = 3,
  TLA_ERR_NUMERICAL = 4,
  TLA_ERR_LATTICE = 5,
  TLA_ERR_PRESENTATION = 6,
  TLA_ERR_EVALUATION = 7,
  TLA_ERR_GROUPOID = 8,
  TLA_ERR_INVALID_ARGUMENT = 9,
  TLA_ERR_INTERNAL = 10
} tla_status;

typedef struct tla_presentation tla_presentation;
typedef struct tla_element tla_element;
typedef struct tla_lattice tla_lattice;

/* Command-line values that override the configuration; has_* flags select them. */
typedef struct tla_overrides {
  int has_seed;
  uint64_t seed;
  int has_steps;
  int steps;
  int has_tol;
  double tol;
  int family;
} tla_overrides;

const char* tla_version(void);
/* Message of the last failure on the calling thread; empty after success. */
const char* tla_last_error(void);
const char* tla_status_name(tla_status status);
void tla_string_free(char* s);

/* Presentation from a JSON description (preset, explicit forms, connect_sum or gauge). */
tla_status tla_presentation_from_json(const char* spec_json, tla_presentation** out);
void tla_presentation_free(tla_presentation* p);
/* Writes the connected sum of p1 and p2 (p2 on the left half). */
tla_status tla_presentation_connect_sum(const tla_presentation* p1, const tla_presentation* p2,
                                        tla_presentation** out);

/* Classifying central element; steps <= 0 or central_tol <= 0 selects defaults. */
tla_status tla_classify(const tla_presentation* p, int steps, double central_tol, tla_element** out);

/* Element of the backend named as in the configuration ("su2", "abelian:1", ...). */
tla_status tla_element_create(const char* backend, const double* coords, size_t n, tla_element** out);
void tla_element_free(tla_element* e);
size_t tla_element_dim(const tla_element* e);
/* Copies min(n, dim) coordinates into buf. */
tla_status tla_element_coords(const tla_element* e, double* buf, size_t n);
tla_status tla_element_mul(const tla_element* a, const tla_element* b, tla_element** out);
tla_status tla_element_distance(const tla_element* a, const tla_element* b, double* out);
tla_status tla_element_format(const tla_element* e, char** out);

/* Lattice generated by central elements of one backend. */
tla_status tla_lattice_create(const tla_element* const* generators, size_t n, double tolerance, tla_lattice** out);
void tla_lattice_free(tla_lattice* l);
tla_status tla_lattice_discreteness(const tla_lattice* l, int* discrete, double* min_gap);
tla_status tla_lattice_contains(const tla_lattice* l, const tla_element* g, int* member);

/* Runs a command on a JSON configuration; *output receives JSON or CSV text
   (free with tla_string_free). TLA_ERR_SELFTEST_FAILED still sets *output. */
tla_status tla_run_command(const char* command, const char* config_json, const tla_overrides* overrides,
                           char** output);

#ifdef __cplusplus
}
#endif

#endif
