#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemgym/bench.hpp"
#include "chemgym/characterization.hpp"
#include "chemgym/errors.hpp"
#include "chemgym/policies.hpp"
#include "chemgym/solvent_dynamics.hpp"

namespace chemgym::cli {

namespace {

using nlohmann::ordered_json;

BenchResources resolve(const std::string& bench, const std::string& scenario,
                       const std::filesystem::path& config) {
  if (config.empty()) {
    if (bench.empty()) throw ConfigError("either --bench or --config is required");
    return load_resources(default_config_path(bench_kind_from_string(bench), scenario));
  }
  auto res = load_resources(config);
  if (!bench.empty() && bench_kind_from_string(bench) != res.config.kind)
    throw ConfigError(config.string() + " configures bench '" +
                      std::string(to_string(res.config.kind)) + "', not '" + bench + "'");
  return res;
}

std::string file_label(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return !std::isalnum(static_cast<unsigned char>(c)); },
                  '_');
  return s;
}

std::string pad(std::size_t i, int width = 5) {
  std::ostringstream ss;
  ss << std::setw(width) << std::setfill('0') << i;
  return ss.str();
}

ordered_json action_json(const Action& a) {
  if (const auto* i = std::get_if<std::size_t>(&a)) return *i;
  return std::get<std::vector<double>>(a);
}

ordered_json stats_json(const ReturnStats& s) {
  ordered_json j;
  j["episodes"] = s.episodes;
  j["mean"] = s.mean;
  j["stddev"] = s.stddev;
  j["stderr"] = s.stderr_mean;
  ordered_json per = ordered_json::object();
  for (const auto& [t, m] : s.per_target_mean)
    per[t] = {{"mean", m}, {"count", s.per_target_count.at(t)}};
  j["per_target"] = per;
  return j;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << text;
}

// ---- rollout ---------------------------------------------------------------

struct RolloutArgs {
  std::string bench, scenario, policy = "heuristic", target;
  std::filesystem::path config, out;
  std::size_t episodes = 1, parallel = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps;
  bool snapshots = true;
};

int cmd_rollout(const RolloutArgs& a, std::ostream& out) {
  const BenchResources res = resolve(a.bench, a.scenario, a.config);
  RolloutOptions opt;
  opt.episodes = a.episodes;
  opt.parallel = a.parallel;
  opt.seed = a.seed.value_or(res.config.seed);
  opt.max_steps = a.steps;
  opt.keep_trajectories = !a.out.empty();
  if (!a.target.empty()) opt.target = a.target;
  if (a.episodes == 0) throw ConfigError("--episodes must be >= 1");

  // Probe once so bad policy names or targets fail before any work.
  {
    auto env = make_bench(res);
    make_policy(a.policy, *env, 0);
    env->reset(0, opt.target);
  }

  const EnvFactory make_env = [&res] { return make_bench(res); };
  const PolicyFactory make_pol = [&a](const BenchEnv& env, std::uint64_t seed) {
    return make_policy(a.policy, env, seed);
  };
  const RolloutResult result = rollout(make_env, make_pol, opt);

  ordered_json stats;
  stats["bench"] = std::string(to_string(res.config.kind));
  stats["scenario"] = res.config.scenario;
  stats["policy"] = a.policy;
  stats["seed"] = opt.seed;
  stats.update(stats_json(result.stats));

  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    const auto snap_dir = a.out / "snapshots";
    if (a.snapshots) std::filesystem::create_directories(snap_dir);
    const auto& reg = *res.registry;
    std::ofstream log(a.out / "trajectories.jsonl");
    if (!log) throw Error("cannot write " + (a.out / "trajectories.jsonl").string());
    for (const auto& tr : result.trajectories) {
      ordered_json snaps = ordered_json::array();
      if (a.snapshots)
        for (const auto& v : tr.final_vessels) {
          const auto name = "ep" + pad(tr.episode) + "_" + file_label(v.label) + ".json";
          save_vessel_file(v, reg, snap_dir / name);
          snaps.push_back((std::filesystem::path("snapshots") / name).string());
        }
      if (tr.steps.empty()) {
        // Zero-step episode: one record carrying the snapshots.
        log << ordered_json{{"episode", tr.episode}, {"seed", tr.seed}, {"target", tr.target},
                            {"step", nullptr}, {"action", nullptr}, {"reward", 0.0},
                            {"done", true}, {"snapshots", snaps}}
                   .dump()
            << '\n';
        continue;
      }
      for (const auto& s : tr.steps) {
        ordered_json rec{{"episode", tr.episode}, {"seed", tr.seed},    {"target", tr.target},
                         {"step", s.step},        {"action", action_json(s.action)},
                         {"reward", s.reward},    {"done", s.done}};
        if (s.done) rec["snapshots"] = snaps;
        log << rec.dump() << '\n';
      }
    }
    write_text(a.out / "stats.json", stats.dump(2) + "\n");
  }
  out << stats.dump(2) << '\n';
  return kExitOk;
}

// ---- pipeline --------------------------------------------------------------

struct PipelineArgs {
  std::vector<std::string> stages;
  std::string target;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  std::size_t episodes = 1;
};

int cmd_pipeline(const PipelineArgs& a, std::ostream& out) {
  std::vector<Stage> stages;
  for (const auto& s : a.stages) stages.push_back(parse_stage(s));
  if (stages.empty()) throw ConfigError("--stages needs at least one stage");
  std::optional<std::string> target;
  if (!a.target.empty()) target = a.target;
  std::optional<std::filesystem::path> dir;
  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    dir = a.out;
  }
  ordered_json runs = ordered_json::array();
  double sum = 0.0;
  for (std::size_t e = 0; e < a.episodes; ++e) {
    const auto r = run_pipeline(stages, derive_seed(a.seed, e), target, dir, "ep" + pad(e));
    ordered_json j;
    j["episode"] = e;
    ordered_json st = ordered_json::array();
    for (const auto& s : r.stages)
      st.push_back({{"bench", s.bench}, {"target", s.target}, {"return", s.episode_return},
                    {"output_vessel", s.output_label}});
    j["stages"] = st;
    j["final_absolute_purity"] = r.final_absolute_purity;
    runs.push_back(j);
    sum += r.final_absolute_purity;
    out << "episode " << e << " target " << r.stages.front().target
        << " final absolute purity " << std::setprecision(6) << r.final_absolute_purity << '\n';
  }
  const double mean = sum / static_cast<double>(a.episodes);
  out << "mean final absolute purity " << std::setprecision(6) << mean << '\n';
  if (dir)
    write_text(*dir / "pipeline.json",
               ordered_json{{"runs", runs}, {"mean_final_absolute_purity", mean}}.dump(2) + "\n");
  return kExitOk;
}

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  std::filesystem::path vessel, registry, image, spectrum;
  std::size_t pixels = 100, rows = 1, bins = 100;
  std::uint64_t seed = 0;
  double settle_time = 0.0;
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
  if (a.image.empty() && a.spectrum.empty())
    throw ConfigError("render needs --image and/or --spectrum");
  const auto reg_path = a.registry.empty() ? data_dir() / "materials.json" : a.registry;
  const MaterialRegistry reg = load_registry_file(reg_path);
  Vessel v = load_vessel_file(a.vessel, reg);
  if (a.settle_time > 0.0) settle(v, reg, a.settle_time);

  if (!a.image.empty()) {
    Rng rng(a.seed);
    std::ostringstream pgm;
    pgm << "P5\n" << a.pixels << ' ' << a.rows << "\n255\n";
    for (std::size_t r = 0; r < a.rows; ++r) {
      const auto row = layer_gray_row(v, reg, a.pixels, rng);
      pgm.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    write_text(a.image, pgm.str());
    out << "wrote " << a.image.string() << '\n';
  }
  if (!a.spectrum.empty()) {
    SpectrumConfig sc;
    sc.bins = a.bins;
    const Spectrum s = uv_vis(v, reg, sc);
    std::ostringstream txt;
    txt << "# wavelength_nm absorbance\n" << std::setprecision(17);
    for (std::size_t i = 0; i < s.bins(); ++i)
      txt << s.wavelength(i) << ' ' << s.absorbance[static_cast<Eigen::Index>(i)] << '\n';
    write_text(a.spectrum, txt.str());
    out << "wrote " << a.spectrum.string() << '\n';
  }
  return kExitOk;
}

// ---- validate --------------------------------------------------------------

struct ValidateArgs {
  std::filesystem::path materials, reactions, config, vessel;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  if (a.materials.empty() && a.reactions.empty() && a.config.empty() && a.vessel.empty())
    throw ConfigError("validate needs at least one of --materials, --reactions, --config, --vessel");
  std::optional<MaterialRegistry> reg;
  if (!a.materials.empty()) {
    reg = load_registry_file(a.materials);
    out << "ok materials " << a.materials.string() << " (" << reg->size() << " entries)\n";
  }
  if (!a.reactions.empty()) {
    const auto net = load_reactions_file(a.reactions);
    if (reg) check_against(net, *reg);
    out << "ok reactions " << a.reactions.string() << " (" << net.reactions().size()
        << " reactions)\n";
  }
  if (!a.config.empty()) {
    const auto res = load_resources(a.config);
    out << "ok config " << a.config.string() << " (bench " << to_string(res.config.kind) << ")\n";
  }
  if (!a.vessel.empty()) {
    if (!reg) reg = load_registry_file(data_dir() / "materials.json");
    const Vessel v = load_vessel_file(a.vessel, *reg);
    out << "ok vessel " << a.vessel.string() << " (" << v.label << ")\n";
  }
  return kExitOk;
}

bool is_config_error(const Error& e) {
  return dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
         dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const NotFound*>(&e) ||
         dynamic_cast<const UnknownScenario*>(&e) || dynamic_cast<const UnknownMethod*>(&e);
}

}  // namespace

Stage parse_stage(const std::string& spec) {
  Stage s;
  std::string head = spec;
  if (auto colon = head.find(':'); colon != std::string::npos) {
    s.policy = head.substr(colon + 1);
    head.resize(colon);
  }
  if (auto slash = head.find('/'); slash != std::string::npos) {
    s.scenario = head.substr(slash + 1);
    head.resize(slash);
  }
  s.bench = head;
  if (s.bench.empty() || s.policy.empty())
    throw ConfigError("bad stage '" + spec + "' (expected BENCH[/SCENARIO][:POLICY])");
  bench_kind_from_string(s.bench);
  return s;
}

PipelineOutcome run_pipeline(const std::vector<Stage>& stages, std::uint64_t seed,
                             const std::optional<std::string>& target,
                             const std::optional<std::filesystem::path>& snapshot_dir,
                             const std::string& snapshot_prefix) {
  PipelineOutcome outcome;
  std::optional<std::string> pinned = target;
  std::optional<std::string> carried;  // previous stage output as snapshot text
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const Stage& st = stages[k];
    auto env = make_bench(resolve(st.bench, st.scenario, st.config));
    if (carried) {
      std::istringstream in(*carried);
      env->set_input_vessel(load_vessel(in, env->registry()));
    }
    auto policy = make_policy(st.policy, *env, policy_seed(seed, k));
    RolloutOptions opt;
    opt.target = pinned;
    const Trajectory tr = run_episode(*env, *policy, derive_seed(seed, k), policy_seed(seed, k), opt, k);
    pinned = tr.target;

    StageOutcome so;
    so.bench = st.bench;
    so.target = tr.target;
    so.episode_return = tr.episode_return;
    so.output = tr.final_vessels.at(env->output_vessel());
    so.output_label = so.output.label;
    std::ostringstream snap;
    save_vessel(so.output, env->registry(), snap);
    carried = snap.str();
    if (snapshot_dir)
      write_text(*snapshot_dir / (snapshot_prefix + "_stage" + std::to_string(k) + "_" +
                                  file_label(st.bench) + ".json"),
                 *carried);
    outcome.final_absolute_purity =
        absolute_purity(std::span<const Vessel>(&so.output, 1), env->registry(), tr.target);
    outcome.stages.push_back(std::move(so));
  }
  return outcome;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bench laboratory: rollouts, pipelines, rendering and data validation", "chemgym-cli"};
  app.require_subcommand(1);

  RolloutArgs ra;
  auto* rollout_cmd = app.add_subcommand("rollout", "Run episodes of one bench with one policy");
  rollout_cmd->add_option("--bench", ra.bench, "rxn, ext or dit");
  rollout_cmd->add_option("--scenario", ra.scenario, "Shipped scenario name");
  rollout_cmd->add_option("--config", ra.config, "Scenario config file");
  rollout_cmd->add_option("--policy", ra.policy, "heuristic, random or none");
  rollout_cmd->add_option("--episodes", ra.episodes, "Number of episodes");
  rollout_cmd->add_option("--seed", ra.seed, "Base seed (default: config seed)");
  rollout_cmd->add_option("--parallel", ra.parallel, "Worker threads")->check(CLI::PositiveNumber);
  rollout_cmd->add_option("--target", ra.target, "Pin the target material");
  rollout_cmd->add_option("--steps", ra.steps, "Override the episode step budget");
  rollout_cmd->add_option("--out", ra.out, "Output directory for stats, log and snapshots");
  rollout_cmd->add_flag("!--no-snapshots", ra.snapshots, "Skip terminal vessel snapshots");

  PipelineArgs pa;
  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "Chain benches, feeding each output vessel to the next");
  pipeline_cmd->add_option("--stages", pa.stages, "Stages BENCH[/SCENARIO][:POLICY], in order")
      ->delimiter(',')
      ->required();
  pipeline_cmd->add_option("--target", pa.target, "Pin the target material");
  pipeline_cmd->add_option("--seed", pa.seed, "Base seed");
  pipeline_cmd->add_option("--episodes", pa.episodes, "Independent pipeline runs")
      ->check(CLI::PositiveNumber);
  pipeline_cmd->add_option("--out", pa.out, "Directory for stage snapshots and summary");

  RenderArgs rda;
  auto* render_cmd = app.add_subcommand("render", "Render a vessel snapshot to image rows or a spectrum");
  render_cmd->add_option("--vessel", rda.vessel, "Vessel snapshot")->required();
  render_cmd->add_option("--registry", rda.registry, "Material registry (default: shipped)");
  render_cmd->add_option("--image", rda.image, "PGM output, one row per sample, column 0 = bottom");
  render_cmd->add_option("--spectrum", rda.spectrum, "UV-Vis text output");
  render_cmd->add_option("--pixels", rda.pixels, "Pixels per row")->check(CLI::PositiveNumber);
  render_cmd->add_option("--rows", rda.rows, "Sampled rows")->check(CLI::PositiveNumber);
  render_cmd->add_option("--bins", rda.bins, "Spectrum bins")->check(CLI::PositiveNumber);
  render_cmd->add_option("--seed", rda.seed, "Rendering seed");
  render_cmd->add_option("--settle", rda.settle_time, "Settle the vessel this long first");

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "Check data files");
  validate_cmd->add_option("--materials", va.materials, "Material registry");
  validate_cmd->add_option("--reactions", va.reactions, "Reaction network");
  validate_cmd->add_option("--config", va.config, "Scenario config");
  validate_cmd->add_option("--vessel", va.vessel, "Vessel snapshot");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*rollout_cmd) return cmd_rollout(ra, out);
    if (*pipeline_cmd) return cmd_pipeline(pa, out);
    if (*render_cmd) return cmd_render(rda, out);
    if (*validate_cmd) return cmd_validate(va, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_config_error(e) ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace chemgym::cli
