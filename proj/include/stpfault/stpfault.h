#ifndef STPFAULT_H
#define STPFAULT_H

#include <stddef.h>

#if defined(STPFAULT_BUILDING)
#define SF_API __attribute__((visibility("default")))
#else
#define SF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sf_status {
  SF_OK = 0,
  SF_ERR_ARGUMENT = 1,
  SF_ERR_IO = 2,
  SF_ERR_PARSE = 3,
  SF_ERR_DIMENSION = 4,
  SF_ERR_PRECONDITION = 5,
  SF_ERR_UNSUPPORTED = 6,
  SF_ERR_INTERNAL = 7
} sf_status;

typedef enum sf_format { SF_FORMAT_TEXT = 0, SF_FORMAT_JSON = 1 } sf_format;

typedef struct sf_system sf_system;
typedef struct sf_report sf_report;

/* All positions are 1-based delta positions. 0 (or a zero count) means "not given". */
typedef struct sf_query {
  const size_t* inputs;  /* permissible inputs, or the test/common input set */
  size_t n_inputs;
  const size_t* faults;  /* hazardous faults, or the undetectable set for reporters */
  size_t n_faults;
  const size_t* sequence;  /* input sequence for BCN commands */
  size_t n_sequence;
  size_t input;
  size_t fault;
  size_t drug;
  size_t state;
  size_t k;
  const char* sites;   /* comma-separated node or output names */
  const char* compare; /* path of a matrix to compare against */
} sf_query;

SF_API const char* sf_version(void);
/* Message of the last failed call on this thread ("" if none). */
SF_API const char* sf_last_error(void);
SF_API const char* sf_status_name(sf_status s);

SF_API void sf_query_init(sf_query* q);

SF_API sf_status sf_system_load_network(const char* path, sf_system** out);
SF_API sf_status sf_system_parse_network(const char* text, sf_system** out);
SF_API sf_status sf_system_load_matrix(const char* path, sf_system** out);
/* Name the columns of a loaded matrix, e.g. "F:9,U:4,D:4". */
SF_API sf_status sf_system_set_args(sf_system* sys, const char* signature);
/* Fix one argument of a loaded matrix, e.g. ("D", 4). */
SF_API sf_status sf_system_pin(sf_system* sys, const char* name, size_t position);
SF_API void sf_system_free(sf_system* sys);

SF_API sf_status sf_assemble(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_detect(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_unique(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_coverage(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_testset(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_equivalence(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_reporters(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_drugs(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_improve_control(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_attractors(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_bcn_detect(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_bcn_control(sf_system* sys, const sf_query* q, sf_report** out);
SF_API sf_status sf_step(sf_system* sys, const sf_query* q, sf_report** out);
/* Dispatch by command name ("detect", "improve-control", ...). */
SF_API sf_status sf_run(sf_system* sys, const char* command, const sf_query* q, sf_report** out);

/* Column-for-column equality of two matrix files (args must match when both carry them). */
SF_API sf_status sf_compare_matrices(const char* path_a, const char* path_b, int* equal);

/* Rendered report; the string is owned by the report. NULL on failure. */
SF_API const char* sf_report_render(sf_report* rep, sf_format format);
/* Typed access by JSON pointer, e.g. "/result/detectable". */
SF_API sf_status sf_report_get_bool(const sf_report* rep, const char* pointer, int* out);
SF_API sf_status sf_report_get_size(const sf_report* rep, const char* pointer, size_t* out);
SF_API sf_status sf_report_get_string(const sf_report* rep, const char* pointer, const char** out);
/* Positions of a rendered set such as "delta9{2,4}". Writes at most cap entries, always sets *count. */
SF_API sf_status sf_report_get_set(const sf_report* rep, const char* pointer, size_t* positions, size_t cap,
                                   size_t* count);
SF_API void sf_report_free(sf_report* rep);

#ifdef __cplusplus
}
#endif

#endif
