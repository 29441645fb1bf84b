#ifndef BRANCHFORGE_BRANCHFORGE_H
#define BRANCHFORGE_BRANCHFORGE_H

#include <stddef.h>

#if defined(_WIN32)
#define BF_API __declspec(dllexport)
#else
#define BF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum bf_status {
  BF_OK = 0,
  BF_VERIFICATION_FAILED = 1,
  BF_PRECONDITION = 2, /* also domain and configuration errors */
  BF_RESOURCE = 3
} bf_status;

/* A loaded group chain with its tree and spine. Not thread-safe to share
   between concurrent calls. */
typedef struct bf_scenario bf_scenario;

/* Outcome of one call: status, JSON document, text summary, message. */
typedef struct bf_result bf_result;

BF_API const char* bf_version(void);

BF_API bf_status bf_result_status(const bf_result* result);
BF_API const char* bf_result_json(const bf_result* result);
BF_API const char* bf_result_text(const bf_result* result);
BF_API const char* bf_result_message(const bf_result* result);
BF_API void bf_result_free(bf_result* result);

/* Exactly one of scenario_path and group_path is non-null. A bare group
   file gets the default spine; horizon <= 0 keeps the file's horizon (or
   the default). On failure *out is null and *result explains why. */
BF_API bf_status bf_scenario_open(const char* scenario_path, const char* group_path, int horizon,
                                  bf_scenario** out, bf_result** result);
BF_API void bf_scenario_free(bf_scenario* scenario);
BF_API int bf_scenario_horizon(const bf_scenario* scenario);

/* Embedding of every quotient into Alt(2n+3), with evenness, freeness,
   faithfulness and generation checks. */
BF_API bf_status bf_embed(bf_scenario* scenario, bf_result** result);
/* Generation of A_j by the G-conjugates of Alt(5) and perfectness, per level. */
BF_API bf_status bf_verify_altgen(bf_scenario* scenario, bf_result** result);
BF_API bf_status bf_level(bf_scenario* scenario, int level, int with_cosets, bf_result** result);
BF_API bf_status bf_portrait(bf_scenario* scenario, const char* word, int depth,
                             bf_result** result);
BF_API bf_status bf_order(bf_scenario* scenario, const char* word, int budget, int depth,
                          bf_result** result);
BF_API bf_status bf_zset(bf_scenario* scenario, const char* word, int level, int exhaustive,
                         bf_result** result);
/* Greedy shrinking prefix for `count` level-1 words; the certificate is
   replayed before returning. */
BF_API bf_status bf_shrink_search(bf_scenario* scenario, const char* const* words, size_t count,
                                  int budget, bf_result** result);
BF_API bf_status bf_replay_certificate(bf_scenario* scenario, const char* certificate_json,
                                       bf_result** result);
BF_API bf_status bf_wreath_check(bf_scenario* scenario, int level, int depth,
                                 bf_result** result);
BF_API bf_status bf_ratio(bf_scenario* scenario, int level, bf_result** result);
BF_API bf_status bf_landau(unsigned max_n, bf_result** result);

#ifdef __cplusplus
}
#endif

#endif
