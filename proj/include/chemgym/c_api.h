/* C ABI over BenchEnv for foreign-function bindings. Observations and actions
 * cross as flat double arrays laid out exactly as the bench's spaces.
 * Functions returning int give 0 on success and -1 on failure; the message is
 * then available from chemgym_last_error() on the calling thread. */
#ifndef CHEMGYM_C_API_H
#define CHEMGYM_C_API_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct chemgym_env chemgym_env;

/* bench: "rxn", "ext" or "dit". config_path may be NULL to use the shipped
 * config for scenario (NULL or "" for the default scenario). */
chemgym_env* chemgym_create(const char* bench, const char* scenario, const char* config_path);
void chemgym_destroy(chemgym_env* env);
const char* chemgym_last_error(void);

/* 1 for discrete, 0 for continuous. */
int chemgym_action_is_discrete(const chemgym_env* env);
/* Number of discrete choices, or continuous dimension. */
size_t chemgym_action_size(const chemgym_env* env);
size_t chemgym_observation_size(const chemgym_env* env);
size_t chemgym_max_steps(const chemgym_env* env);
size_t chemgym_target_count(const chemgym_env* env);
/* Valid until the env is destroyed; NULL when out of range. */
const char* chemgym_target_name(const chemgym_env* env, size_t index);
/* Target of the current episode. */
const char* chemgym_current_target(const chemgym_env* env);

/* target may be NULL to sample one. obs must hold chemgym_observation_size values. */
int chemgym_reset(chemgym_env* env, uint64_t seed, const char* target, double* obs);
int chemgym_step_discrete(chemgym_env* env, size_t action, double* obs, double* reward, int* done);
int chemgym_step_continuous(chemgym_env* env, const double* action, size_t n, double* obs,
                            double* reward, int* done);

#ifdef __cplusplus
}
#endif

#endif
