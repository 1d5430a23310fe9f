/* C interface to the anytime inference engine.
 *
 * Every fallible call returns an mce_status; on failure the message is
 * available from mce_last_error() (per thread, valid until the next call on
 * that thread). Strings handed out through `char**` parameters are owned by
 * the caller and released with mce_string_free(). Answers are JSON text in
 * the same shapes the command-line tool prints.
 */
#ifndef MCE_MCE_H
#define MCE_MCE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MCE_API __declspec(dllexport)
#else
#define MCE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the command-line tool's exit codes. */
typedef enum mce_status {
  MCE_OK = 0,
  MCE_ERR_PARSE = 1,        /* malformed or invalid knowledge base / query */
  MCE_ERR_UNANSWERABLE = 2, /* no model construction succeeds */
  MCE_ERR_INCONSISTENT = 3, /* evidence has probability zero or conflicts */
  MCE_ERR_RESOURCE = 4,     /* proof depth bound or joint-size cap reached */
  MCE_ERR_INVALID_ARGUMENT = 5,
  MCE_ERR_PRECONDITION = 6,
  MCE_ERR_AMBIGUOUS = 7, /* strict mode: several statements apply */
  MCE_ERR_INTERNAL = 8
} mce_status;

typedef enum mce_score_mode {
  MCE_SCORE_DEFAULT = 0,
  MCE_SCORE_INTERVAL = 1,
  MCE_SCORE_CORRECT = 2
} mce_score_mode;

typedef enum mce_policy {
  MCE_POLICY_DEFAULT = 0,
  MCE_POLICY_RANDOM = 1
} mce_policy;

typedef struct mce_run_options {
  size_t depth_bound;  /* SLD proof depth bound */
  int strict;          /* nonzero: ambiguity is an error instead of a branch */
  int margin_gate;     /* nonzero: summing out waits for all expected children */
  mce_policy policy;
  uint64_t seed;       /* random policy only */
  int64_t max_steps;   /* negative: unbounded */
  mce_score_mode score;
} mce_run_options;

/* Opaque parsed knowledge base. */
typedef struct mce_kb mce_kb;

MCE_API const char* mce_last_error(void);
MCE_API const char* mce_version(void);
MCE_API void mce_string_free(char* s);

/* Defaults: depth 64, not strict, gate on, default policy, seed 0,
 * unbounded, default scoring. */
MCE_API void mce_run_options_init(mce_run_options* opts);

MCE_API mce_status mce_kb_parse(const char* text, size_t len, mce_kb** out);
MCE_API mce_status mce_kb_load(const char* path, mce_kb** out);
MCE_API void mce_kb_free(mce_kb* kb);

/* JSON array of {"line","column","message"}; MCE_OK iff it is empty,
 * MCE_ERR_PARSE otherwise (the array is returned either way). */
MCE_API mce_status mce_kb_validate(const mce_kb* kb, char** diagnostics_json);
MCE_API mce_status mce_kb_print(const mce_kb* kb, char** text);

/* Exact posterior as {"OUTCOME": p, ...}. */
MCE_API mce_status mce_query(const mce_kb* kb, const char* query, const mce_run_options* opts,
                             char** json);
/* Same answer from brute-force enumeration of the ground network. */
MCE_API mce_status mce_oracle(const mce_kb* kb, const char* query, char** json);
/* Numeric posterior into `probs` (capacity `cap`), outcome count in `n`. */
MCE_API mce_status mce_posterior(const mce_kb* kb, const char* query, const mce_run_options* opts,
                                 double* probs, size_t cap, size_t* n);

/* JSON-lines trace of a (possibly budgeted) run, one record per step plus a
 * final record carrying the best available answer. Running out of budget is
 * not an error. */
MCE_API mce_status mce_anytime(const mce_kb* kb, const char* query, const mce_run_options* opts,
                               char** trace_jsonl);
/* Re-runs the choices recorded in a trace; the result is the trace the
 * replay produces. `opts->max_steps` and `opts->policy` are ignored. */
MCE_API mce_status mce_replay(const mce_kb* kb, const char* query, const char* trace_jsonl,
                              const mce_run_options* opts, char** replayed_jsonl);

/* DOT digraph of the fully constructed, unevaluated network. */
MCE_API mce_status mce_graph_dot(const mce_kb* kb, const char* query, const mce_run_options* opts,
                                 char** dot);

#ifdef __cplusplus
}
#endif

#endif /* MCE_MCE_H */
