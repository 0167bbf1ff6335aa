#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "chemgym/errors.hpp"
#include "chemgym/policies.hpp"

namespace chemgym {

std::uint64_t policy_seed(std::uint64_t base, std::size_t episode) {
  // A different base stream so env and policy draws never share a seed.
  return derive_seed(base ^ 0xa5a5a5a5deadbeefULL, episode);
}

ReturnStats summarize(const std::vector<double>& returns, const std::vector<std::string>& targets) {
  ReturnStats s;
  s.episodes = returns.size();
  if (returns.empty()) return s;
  double sum = 0.0;
  for (double r : returns) sum += r;
  s.mean = sum / static_cast<double>(returns.size());
  if (returns.size() > 1) {
    double ss = 0.0;
    for (double r : returns) ss += (r - s.mean) * (r - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(returns.size() - 1));
    s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(returns.size()));
  }
  for (std::size_t i = 0; i < returns.size() && i < targets.size(); ++i) {
    s.per_target_mean[targets[i]] += returns[i];
    ++s.per_target_count[targets[i]];
  }
  for (auto& [t, m] : s.per_target_mean) m /= static_cast<double>(s.per_target_count[t]);
  return s;
}

Trajectory run_episode(BenchEnv& env, Policy& policy, std::uint64_t env_seed,
                       std::uint64_t pseed, const RolloutOptions& opt, std::size_t index) {
  Trajectory tr;
  tr.episode = index;
  tr.seed = env_seed;
  if (opt.max_steps) env.set_max_steps(*opt.max_steps);
  policy.reset(pseed);
  Eigen::VectorXd obs = env.reset(env_seed, opt.target);
  tr.target = env.target();
  if (opt.keep_observations) tr.observations.push_back(obs);
  while (!env.done()) {
    const std::size_t k = env.step_count();
    Action a = policy.act(obs, k, tr.target);
    StepResult r = env.step(a);
    obs = std::move(r.observation);
    if (opt.keep_observations) tr.observations.push_back(obs);
    tr.steps.push_back({k, std::move(a), r.reward, r.done});
  }
  tr.episode_return = env.episode_return();
  tr.final_vessels.assign(env.vessels().begin(), env.vessels().end());
  return tr;
}

RolloutResult rollout(const EnvFactory& make_env, const PolicyFactory& make_policy_fn,
                      const RolloutOptions& opt) {
  RolloutResult res;
  res.returns.resize(opt.episodes);
  res.targets.resize(opt.episodes);
  std::vector<Trajectory> trajs(opt.keep_trajectories ? opt.episodes : 0);

  const std::size_t workers = std::max<std::size_t>(1, std::min(opt.parallel, opt.episodes));
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](std::size_t w) {
    try {
      auto env = make_env();
      auto policy = make_policy_fn(*env, policy_seed(opt.seed, 0));
      for (std::size_t i = w; i < opt.episodes; i += workers) {
        Trajectory tr =
            run_episode(*env, *policy, derive_seed(opt.seed, i), policy_seed(opt.seed, i), opt, i);
        res.returns[i] = tr.episode_return;
        res.targets[i] = tr.target;
        if (opt.keep_trajectories) trajs[i] = std::move(tr);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  res.stats = summarize(res.returns, res.targets);
  res.trajectories = std::move(trajs);
  return res;
}

}  // namespace chemgym
