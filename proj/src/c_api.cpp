#include "chemgym/c_api.h"

#include <exception>
#include <memory>
#include <string>

#include "chemgym/bench.hpp"
#include "chemgym/errors.hpp"

struct chemgym_env {
  std::unique_ptr<chemgym::BenchEnv> env;
};

namespace {

thread_local std::string last_error;

template <class F>
int guarded(F&& f) {
  try {
    f();
    return 0;
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return -1;
}

void copy_out(const Eigen::VectorXd& v, double* out) {
  if (out) Eigen::Map<Eigen::VectorXd>(out, v.size()) = v;
}

}  // namespace

extern "C" {

chemgym_env* chemgym_create(const char* bench, const char* scenario, const char* config_path) {
  chemgym_env* out = nullptr;
  guarded([&] {
    const auto kind = chemgym::bench_kind_from_string(bench ? bench : "");
    const auto path = config_path && *config_path
                          ? std::filesystem::path(config_path)
                          : chemgym::default_config_path(kind, scenario ? scenario : "");
    auto res = chemgym::load_resources(path);
    if (res.config.kind != kind)
      throw chemgym::ConfigError(path.string() + " is not a " + std::string(bench) + " config");
    out = new chemgym_env{chemgym::make_bench(std::move(res))};
  });
  return out;
}

void chemgym_destroy(chemgym_env* env) { delete env; }

const char* chemgym_last_error(void) { return last_error.c_str(); }

int chemgym_action_is_discrete(const chemgym_env* env) {
  return env->env->action_spec().kind == chemgym::ActionSpec::Kind::discrete ? 1 : 0;
}

size_t chemgym_action_size(const chemgym_env* env) {
  const auto& s = env->env->action_spec();
  return s.kind == chemgym::ActionSpec::Kind::discrete ? s.choices() : s.dimension;
}

size_t chemgym_observation_size(const chemgym_env* env) {
  return env->env->observation_spec().size();
}

size_t chemgym_max_steps(const chemgym_env* env) { return env->env->max_steps(); }

size_t chemgym_target_count(const chemgym_env* env) { return env->env->targets().size(); }

const char* chemgym_target_name(const chemgym_env* env, size_t index) {
  const auto& t = env->env->targets();
  return index < t.size() ? t[index].c_str() : nullptr;
}

const char* chemgym_current_target(const chemgym_env* env) { return env->env->target().c_str(); }

int chemgym_reset(chemgym_env* env, uint64_t seed, const char* target, double* obs) {
  return guarded([&] {
    std::optional<std::string> t;
    if (target && *target) t = target;
    copy_out(env->env->reset(seed, t), obs);
  });
}

int chemgym_step_discrete(chemgym_env* env, size_t action, double* obs, double* reward, int* done) {
  return guarded([&] {
    auto r = env->env->step(chemgym::Action{action});
    copy_out(r.observation, obs);
    if (reward) *reward = r.reward;
    if (done) *done = r.done ? 1 : 0;
  });
}

int chemgym_step_continuous(chemgym_env* env, const double* action, size_t n, double* obs,
                            double* reward, int* done) {
  return guarded([&] {
    auto r = env->env->step(chemgym::Action{std::vector<double>(action, action + n)});
    copy_out(r.observation, obs);
    if (reward) *reward = r.reward;
    if (done) *done = r.done ? 1 : 0;
  });
}

}  // extern "C"
