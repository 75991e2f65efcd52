// Copyright 2026 The gecfst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to gecfst. Objects are opaque handles released with the
 * matching *_free function. Every fallible call returns a status code;
 * on failure gecfst_last_error() describes the problem (per thread, valid
 * until the next failing call on that thread). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * gecfst_string_free(). */

#ifndef GECFST_GECFST_H_
#define GECFST_GECFST_H_

#include <stddef.h>

#if defined(_WIN32)
#define GECFST_API __declspec(dllexport)
#else
#define GECFST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gecfst_status {
  GECFST_OK = 0,
  GECFST_ERR_CONFIG = 1,      /* bad configuration or mismatched inputs */
  GECFST_ERR_PARSE = 2,       /* malformed text input */
  GECFST_ERR_FORMAT = 3,      /* well-formed tokens in an invalid arrangement */
  GECFST_ERR_UNSUPPORTED = 4, /* operation not supported for these inputs */
  GECFST_ERR_DECODE = 5,      /* no hypothesis could be produced */
  GECFST_ERR_IO = 6,
  GECFST_ERR_INVALID_ARGUMENT = 7,
  GECFST_ERR_INTERNAL = 8
} gecfst_status;

typedef struct gecfst_symtab gecfst_symtab;
typedef struct gecfst_fst gecfst_fst;
typedef struct gecfst_lm gecfst_lm;
typedef struct gecfst_pipeline gecfst_pipeline;

GECFST_API const char *gecfst_version(void);
GECFST_API const char *gecfst_status_name(gecfst_status status);
/* Message of the last failure on this thread; "" if none. */
GECFST_API const char *gecfst_last_error(void);
GECFST_API void gecfst_string_free(char *s);

/* Symbol tables: "symbol id" per line. */
GECFST_API gecfst_status gecfst_symtab_read(const char *path, gecfst_symtab **out);
GECFST_API gecfst_status gecfst_symtab_size(const gecfst_symtab *t, size_t *out);
GECFST_API void gecfst_symtab_free(gecfst_symtab *t);

/* Text FSTs. Symbol tables may be NULL, in which case labels are numeric. */
GECFST_API gecfst_status gecfst_fst_from_text(const char *text, const gecfst_symtab *isyms,
                                              const gecfst_symtab *osyms, gecfst_fst **out);
GECFST_API gecfst_status gecfst_fst_read(const char *path, const gecfst_symtab *isyms,
                                         const gecfst_symtab *osyms, gecfst_fst **out);
/* Attaches symbol tables (either may be NULL) to a machine read with numeric
 * labels. GECFST_ERR_CONFIG when some label has no symbol. */
GECFST_API gecfst_status gecfst_fst_set_symbols(gecfst_fst *f, const gecfst_symtab *isyms,
                                                const gecfst_symtab *osyms);
GECFST_API gecfst_status gecfst_fst_to_text(const gecfst_fst *f, int numeric_labels, char **out);
GECFST_API gecfst_status gecfst_fst_compose(const gecfst_fst *a, const gecfst_fst *b,
                                            gecfst_fst **out);
/* Epsilon removal, determinization, weight pushing and minimization. */
GECFST_API gecfst_status gecfst_fst_optimize(const gecfst_fst *f, gecfst_fst **out);
GECFST_API gecfst_status gecfst_fst_num_states(const gecfst_fst *f, size_t *out);
GECFST_API gecfst_status gecfst_fst_num_arcs(const gecfst_fst *f, size_t *out);
/* Cost of the best path; +inf for an empty machine. */
GECFST_API gecfst_status gecfst_fst_shortest_distance(const gecfst_fst *f, double *out);
GECFST_API void gecfst_fst_free(gecfst_fst *f);

/* N-gram language models. The corpus has one whitespace-tokenized sentence
 * per line. Log probabilities are natural logs. */
GECFST_API gecfst_status gecfst_lm_train(const char *corpus_path, int order, double discount,
                                         gecfst_lm **out);
GECFST_API gecfst_status gecfst_lm_read_arpa(const char *path, gecfst_lm **out);
GECFST_API gecfst_status gecfst_lm_write_arpa(const gecfst_lm *lm, const char *path);
GECFST_API gecfst_status gecfst_lm_sentence_logprob(const gecfst_lm *lm, const char *sentence,
                                                    double *out);
GECFST_API void gecfst_lm_free(gecfst_lm *lm);

/* Correction pipeline built from a "key = value" configuration file. */
GECFST_API gecfst_status gecfst_pipeline_load(const char *config_path, gecfst_pipeline **out);
/* `text` holds one sentence per line. `output` receives one corrected line
 * per input line; `warnings` (may be NULL) receives one "line N: message"
 * line for every sentence that fell back to its input. */
GECFST_API gecfst_status gecfst_pipeline_correct(const gecfst_pipeline *p, const char *text,
                                                 char **output, char **warnings);
/* Tunes the lambdas on a development corpus with metric "gleu" or "f05".
 * `gold` may be NULL (required for f05). max_sweeps < 0 keeps the
 * configured value. When `out_config` is not NULL the tuned configuration
 * is written there. `report` receives the per-sweep table. */
GECFST_API gecfst_status gecfst_pipeline_tune(const gecfst_pipeline *p, const char *sources,
                                              const char *const *references,
                                              size_t num_references, const char *gold,
                                              const char *metric, int max_sweeps,
                                              const char *out_config, char **report);
/* Metric table for the uncorrected input and for the system. */
GECFST_API gecfst_status gecfst_pipeline_report(const gecfst_pipeline *p, const char *sources,
                                                const char *const *references,
                                                size_t num_references, const char *gold,
                                                char **table);
GECFST_API void gecfst_pipeline_free(gecfst_pipeline *p);

#ifdef __cplusplus
}
#endif

#endif /* GECFST_GECFST_H_ */
