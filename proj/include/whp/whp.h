/* C interface of the whp library. All objects are opaque handles owned by
 * the caller and released with the matching *_destroy function. Functions
 * returning whp_status set a thread-local message readable with
 * whp_last_error() on failure. */
#ifndef WHP_WHP_H
#define WHP_WHP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(WHP_BUILDING_LIBRARY)
#define WHP_API __attribute__((visibility("default")))
#else
#define WHP_API
#endif

typedef enum whp_status {
  WHP_OK = 0,
  WHP_ERR_ARGUMENT = 1, /* null handle, mismatched objects, incompatible tuple shapes */
  WHP_ERR_IO = 2,
  WHP_ERR_PARSE = 3,    /* message names source and line */
  WHP_ERR_INVALID = 4,  /* well-formed input violating an invariant or precondition */
  WHP_ERR_LIMIT = 5,    /* a configured state cap was exceeded */
  WHP_ERR_INTERNAL = 6
} whp_status;

/* Values match the command-line exit codes. */
typedef enum whp_verdict { WHP_EQUIVALENT = 0, WHP_INEQUIVALENT = 1, WHP_INCONCLUSIVE = 3 } whp_verdict;

typedef struct whp_group whp_group;
typedef struct whp_tuple whp_tuple;
typedef struct whp_auto whp_auto;
typedef struct whp_result whp_result;
typedef struct whp_qh_result whp_qh_result;

typedef struct whp_options {
  int threads; /* worker threads, at least 1 */
  long bound;  /* search bound; negative selects each procedure's default */
} whp_options;

WHP_API void whp_options_init(whp_options* opt);
WHP_API const char* whp_version(void);
WHP_API const char* whp_last_error(void);
WHP_API const char* whp_status_name(whp_status s);
WHP_API const char* whp_verdict_name(whp_verdict v);
/* Releases strings returned through char** out-parameters. */
WHP_API void whp_string_free(char* s);

/* Groups: a free group of given rank (standard generator names a, b, ...)
 * or a graph of groups read from a group file. `source` labels errors and
 * may be NULL. */
WHP_API whp_status whp_group_new_free(int rank, whp_group** out);
WHP_API whp_status whp_group_parse(const char* text, const char* source, whp_group** out);
WHP_API whp_status whp_group_load(const char* path, whp_group** out);
WHP_API int whp_group_is_free(const whp_group* g);
/* Normalized group file text. */
WHP_API whp_status whp_group_format(const whp_group* g, char** out);
WHP_API void whp_group_destroy(whp_group* g);

/* Tuples are tied to the group they were parsed against. */
WHP_API whp_status whp_tuple_parse(const whp_group* g, const char* text, const char* source, whp_tuple** out);
WHP_API whp_status whp_tuple_load(const whp_group* g, const char* path, whp_tuple** out);
WHP_API size_t whp_tuple_size(const whp_tuple* t);
WHP_API whp_status whp_tuple_format(const whp_tuple* t, char** out);
WHP_API void whp_tuple_destroy(whp_tuple* t);

/* Automorphism files (`name -> word`, optional `inverse name -> word`). */
WHP_API whp_status whp_auto_parse(const whp_group* g, const char* text, const char* source, whp_auto** out);
WHP_API whp_status whp_auto_load(const whp_group* g, const char* path, whp_auto** out);
WHP_API whp_status whp_auto_format(const whp_auto* a, char** out);
WHP_API whp_status whp_auto_save(const whp_auto* a, const char* path);
WHP_API void whp_auto_destroy(whp_auto* a);

/* Orbit decision. For free groups coset_reps must be empty; for graphs of
 * groups they are the trusted coset representatives (identity if none). */
WHP_API whp_status whp_decide(const whp_group* g, const whp_tuple* u, const whp_tuple* v,
                              const whp_auto* const* coset_reps, size_t n_reps, const whp_options* opt,
                              whp_result** out);
/* Brute-force search over products of at most `radius` Whitehead automorphisms
 * (free groups only). Absence within the radius is reported as inconclusive. */
WHP_API whp_status whp_oracle(const whp_group* g, const whp_tuple* u, const whp_tuple* v, int radius,
                              const whp_options* opt, whp_result** out);
/* *ok = 1 if a maps u to v (cyclic coordinates up to conjugacy). */
WHP_API whp_status whp_verify(const whp_group* g, const whp_auto* a, const whp_tuple* u, const whp_tuple* v, int* ok);

WHP_API whp_verdict whp_result_verdict(const whp_result* r);
WHP_API const char* whp_result_note(const whp_result* r);
/* Borrowed; NULL when there is no witness. */
WHP_API const whp_auto* whp_result_witness(const whp_result* r);
/* Report object: decision, note, bounds used and procedure details. */
WHP_API whp_status whp_result_json(const whp_result* r, char** out);
WHP_API void whp_result_destroy(whp_result* r);

/* Surfaces of genus g with b boundary components. */
WHP_API whp_status whp_self_intersection(int genus, int boundary, const char* word, long* out);
WHP_API whp_status whp_si_numeric(int genus, int boundary, const char* word, long* out);

/* Exponent candidates for a query file: surface line, then u, v, c, d. */
WHP_API whp_status whp_qh_bound(const char* text, const char* source, const whp_options* opt, whp_qh_result** out);
WHP_API whp_status whp_qh_bound_load(const char* path, const whp_options* opt, whp_qh_result** out);
WHP_API size_t whp_qh_result_count(const whp_qh_result* r);
/* m, n and a borrowed witness for candidate i. */
WHP_API whp_status whp_qh_result_candidate(const whp_qh_result* r, size_t i, long* m, long* n, const whp_auto** witness);
WHP_API whp_status whp_qh_result_json(const whp_qh_result* r, char** out);
WHP_API void whp_qh_result_destroy(whp_qh_result* r);

#ifdef __cplusplus
}
#endif

#endif
