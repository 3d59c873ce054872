#include "fairrl/harness.hpp"

#include "fairrl/baselines.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <sstream>
#include <thread>

namespace fairrl {

namespace {

using nlohmann::json;

double report_scale(const EnvironmentConfig& env) {
    return env.kind == "cellular" ? CellularFiniteEnv::kMaxRate : 1.0;
}

std::unique_ptr<FiniteEnv> make_finite_env(const EnvironmentConfig& env) {
    if (env.kind == "cellular") return std::make_unique<CellularFiniteEnv>(env.n_agents);
    if (env.kind == "mdp")
        return std::make_unique<TabularMdpEnv>(TabularMdp::from_json(env.mdp_json));
    return nullptr;
}

MultiQueueEnv make_queue_env(const EnvironmentConfig& env) {
    if (env.arrival_rates)
        return MultiQueueEnv(*env.arrival_rates, env.capacity.value_or(100));
    return env.load == "low" ? MultiQueueEnv::low_load(env.n_agents)
                             : MultiQueueEnv::high_load(env.n_agents);
}

/// One-hot state encoding for running the policy gradient on a tabular model.
class OneHotPgAdapter : public PgEnv {
  public:
    explicit OneHotPgAdapter(TabularMdp mdp) : env_(std::move(mdp)) {}
    int obs_dim() const override { return env_.n_states(); }
    int n_actions() const override { return env_.n_actions(); }
    int n_agents() const override { return env_.n_agents(); }
    Vec reset(Rng& rng) override { return encode(env_.reset(rng)); }
    PgStep step(int action, Rng& rng) override {
        FiniteStep s = env_.step(action, rng);
        return PgStep{std::move(s.rewards), encode(s.next_state)};
    }

  private:
    Vec encode(int s) const {
        Vec obs(env_.n_states(), 0.0);
        obs[s] = 1.0;
        return obs;
    }
    TabularMdpEnv env_;
};

std::unique_ptr<PgEnv> make_pg_env(const EnvironmentConfig& env) {
    if (env.kind == "cellular") return std::make_unique<CellularPgEnv>(env.n_agents);
    if (env.kind == "gauss_markov")
        return std::make_unique<GaussMarkovEnv>(env.n_agents, env.beta);
    if (env.kind == "queue") return std::make_unique<MultiQueueEnv>(make_queue_env(env));
    if (env.kind == "mdp")
        return std::make_unique<OneHotPgAdapter>(TabularMdp::from_json(env.mdp_json));
    throw ConfigError("environment: unknown kind '" + env.kind + "'");
}

std::optional<TabularMdp> ground_truth(const EnvironmentConfig& env) {
    if (env.kind == "cellular") return CellularFiniteEnv(env.n_agents).to_mdp(env.gamma);
    if (env.kind == "mdp") return TabularMdp::from_json(env.mdp_json);
    return std::nullopt;
}

std::vector<Vec> rollout_finite(FiniteEnv& env, const TabularPolicy& policy, long T,
                                Rng& rng, double scale) {
    std::vector<Vec> history;
    history.reserve(T);
    int state = env.reset(rng);
    Vec row(env.n_actions());
    for (long t = 0; t < T; ++t) {
        for (int a = 0; a < env.n_actions(); ++a) row[a] = policy.prob(state, a);
        FiniteStep step = env.step(rng.categorical(row), rng);
        for (double& r : step.rewards) r *= scale;
        history.push_back(std::move(step.rewards));
        state = step.next_state;
    }
    return history;
}

std::vector<Vec> rollout_pg(PgEnv& env, const MlpPolicy& policy, long T, Rng& rng,
                            double scale) {
    std::vector<Vec> history;
    history.reserve(T);
    Vec obs = env.reset(rng);
    for (long t = 0; t < T; ++t) {
        PgStep step = env.step(rng.categorical(policy.forward(obs)), rng);
        for (double& r : step.rewards) r *= scale;
        history.push_back(std::move(step.rewards));
        obs = std::move(step.observation);
    }
    return history;
}

/// Fairness curve from incremental running means.
Vec fairness_curve(const ObjectiveFunction& f, const std::vector<Vec>& history) {
    Vec curve;
    curve.reserve(history.size());
    if (history.empty()) return curve;
    Vec sums(history.front().size(), 0.0);
    for (std::size_t t = 0; t < history.size(); ++t) {
        Vec means(sums.size());
        for (std::size_t k = 0; k < sums.size(); ++k) {
            sums[k] += history[t][k];
            means[k] = sums[k] / static_cast<double>(t + 1);
        }
        curve.push_back(f.evaluate(means));
    }
    return curve;
}

} // namespace

double running_fairness(const ObjectiveFunction& f,
                        const std::vector<Vec>& reward_history, long t) {
    if (t < 1 || t > static_cast<long>(reward_history.size()))
        throw DomainError("running_fairness: t out of range");
    Vec means(reward_history.front().size(), 0.0);
    for (long i = 0; i < t; ++i)
        for (std::size_t k = 0; k < means.size(); ++k) means[k] += reward_history[i][k];
    for (double& m : means) m /= static_cast<double>(t);
    return f.evaluate(means);
}

RegretRecord compute_regret(const ObjectiveFunction& f, const Vec& optimal_lambda,
                            const std::vector<Vec>& reward_history, long t) {
    RegretRecord rec;
    rec.t = t;
    rec.optimal_value = f.evaluate(optimal_lambda);
    rec.achieved = running_fairness(f, reward_history, t);
    rec.regret = std::abs(rec.optimal_value - rec.achieved);
    return rec;
}

double percentile(Vec values, double p) {
    if (values.empty()) throw DomainError("percentile: empty sample");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

std::optional<SolveResult> solve_oracle(const ExperimentConfig& cfg) {
    std::optional<TabularMdp> truth = ground_truth(cfg.environment);
    if (!truth) return std::nullopt;
    ObjectiveFunction f = ObjectiveFunction::from_json(cfg.objective_json);
    SolveResult solved = solve_occupancy(*truth, f, cfg.algorithm.solver);
    const double scale = report_scale(cfg.environment);
    for (double& l : solved.avg_rewards) l *= scale;
    solved.objective = f.evaluate(solved.avg_rewards);
    return solved;
}

SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    ObjectiveFunction f = ObjectiveFunction::from_json(cfg.objective_json);
    const double scale = report_scale(cfg.environment);
    const std::string& name = cfg.algorithm.name;

    Rng root(seed);
    const std::uint64_t train_seed = root.engine()();
    const std::uint64_t eval_seed = root.engine()();

    SeedOutcome out;
    out.seed = seed;

    if (name == "model_based" || name == "ops") {
        std::unique_ptr<FiniteEnv> env = make_finite_env(cfg.environment);
        if (!env) throw ConfigError(name + " requires a finite environment");
        LearningResult learned = [&]() {
            if (name == "ops") {
                OpsConfig ops = cfg.algorithm.ops_override.value_or(OpsConfig::standard(
                    cfg.algorithm.ops_delta, cfg.algorithm.train_steps, env->n_states(),
                    env->n_actions()));
                ops.horizon = cfg.algorithm.train_steps;
                return run_ops(*env, f, ops, cfg.algorithm.solver, train_seed);
            }
            return run_model_based(*env, f, cfg.algorithm.schedule, cfg.algorithm.solver,
                                   cfg.algorithm.train_steps, train_seed);
        }();
        std::unique_ptr<FiniteEnv> eval_env = make_finite_env(cfg.environment);
        Rng eval_rng(eval_seed);
        out.reward_history =
            rollout_finite(*eval_env, learned.policy, cfg.horizon, eval_rng, scale);
    } else if (name == "policy_gradient") {
        std::unique_ptr<PgEnv> env = make_pg_env(cfg.environment);
        PgConfig pg = cfg.algorithm.pg;
        if (pg.horizon <= 0) pg.horizon = static_cast<int>(cfg.horizon);
        TrainResult trained = train(*env, f, pg, train_seed);
        std::unique_ptr<PgEnv> eval_env = make_pg_env(cfg.environment);
        Rng eval_rng(eval_seed);
        out.reward_history =
            rollout_pg(*eval_env, trained.policy, cfg.horizon, eval_rng, scale);
    } else if (name == "bge") {
        if (cfg.environment.kind != "cellular")
            throw ConfigError("bge runs on the cellular environment only");
        CellularFiniteEnv env(cfg.environment.n_agents);
        BgeScheduler bge(env.n_agents());
        Rng rng(eval_seed);
        env.reset(rng);
        out.reward_history.reserve(cfg.horizon);
        for (long t = 0; t < cfg.horizon; ++t) {
            Vec rates = env.current_rates();
            const int pick = bge.select(rates);
            FiniteStep step = env.step(pick, rng);
            bge.credit(pick, rates[pick]);
            for (double& r : step.rewards) r *= scale;
            out.reward_history.push_back(std::move(step.rewards));
        }
    } else if (name == "lqf") {
        if (cfg.environment.kind != "queue")
            throw ConfigError("lqf runs on the queue environment only");
        MultiQueueEnv env = make_queue_env(cfg.environment);
        Rng rng(eval_seed);
        env.reset(rng);
        out.reward_history.reserve(cfg.horizon);
        for (long t = 0; t < cfg.horizon; ++t) {
            PgStep step = env.step(lqf_select(env.queue_lengths()), rng);
            out.reward_history.push_back(std::move(step.rewards));
        }
    } else if (name == "uniform") {
        Rng rng(eval_seed);
        std::unique_ptr<PgEnv> env = make_pg_env(cfg.environment);
        env->reset(rng);
        out.reward_history.reserve(cfg.horizon);
        for (long t = 0; t < cfg.horizon; ++t) {
            PgStep step = env->step(uniform_select(env->n_actions(), rng), rng);
            for (double& r : step.rewards) r *= scale;
            out.reward_history.push_back(std::move(step.rewards));
        }
    } else if (name == "sarsa") {
        if (cfg.environment.kind != "cellular")
            throw ConfigError("sarsa runs on the finite cellular environment only");
        CellularFiniteEnv env(cfg.environment.n_agents);
        SarsaAgent agent(env.n_states(), env.n_actions(), cfg.algorithm.sarsa_gamma,
                         cfg.algorithm.sarsa_epsilon, cfg.algorithm.sarsa_lr);
        // Training phase: reward is the running fairness of the raw rates.
        {
            Rng rng(train_seed);
            int s = env.reset(rng);
            int a = agent.select(s, rng);
            Vec sums(env.n_agents(), 0.0);
            for (long t = 0; t < cfg.algorithm.train_steps; ++t) {
                FiniteStep step = env.step(a, rng);
                Vec means(sums.size());
                for (std::size_t k = 0; k < sums.size(); ++k) {
                    sums[k] += step.rewards[k] * scale;
                    means[k] = sums[k] / static_cast<double>(t + 1);
                }
                const double fairness = f.evaluate(means);
                const int s2 = step.next_state;
                const int a2 = agent.select(s2, rng);
                agent.update(s, a, fairness, s2, a2);
                s = s2;
                a = a2;
            }
        }
        // Evaluation phase: frozen greedy policy.
        Rng rng(eval_seed);
        int s = env.reset(rng);
        out.reward_history.reserve(cfg.horizon);
        for (long t = 0; t < cfg.horizon; ++t) {
            int best = 0;
            for (int a2 = 1; a2 < env.n_actions(); ++a2)
                if (agent.q(s, a2) > agent.q(s, best)) best = a2;
            FiniteStep step = env.step(best, rng);
            for (double& r : step.rewards) r *= scale;
            out.reward_history.push_back(std::move(step.rewards));
            s = step.next_state;
        }
    } else {
        throw ConfigError("algorithm: unknown name '" + name + "'");
    }

    out.fairness_curve = fairness_curve(f, out.reward_history);
    if (cfg.regret) {
        if (std::optional<SolveResult> oracle = solve_oracle(cfg)) {
            const double f_star = oracle->objective;
            out.regret_curve.reserve(out.fairness_curve.size());
            for (double f_t : out.fairness_curve)
                out.regret_curve.push_back(std::abs(f_star - f_t));
        }
    }
    return out;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        const json& env = j.at("environment");
        cfg.environment.kind = env.at("kind").get<std::string>();
        cfg.environment.n_agents = env.value("n_agents", 2);
        cfg.environment.beta = env.value("beta", 0.1);
        cfg.environment.load = env.value("load", "high");
        if (env.contains("arrival_rates"))
            cfg.environment.arrival_rates = env.at("arrival_rates").get<Vec>();
        if (env.contains("capacity")) cfg.environment.capacity = env.at("capacity").get<int>();
        if (env.contains("mdp")) cfg.environment.mdp_json = env.at("mdp").dump();
        cfg.environment.gamma = env.value("gamma", 0.99);

        cfg.objective_json = j.at("objective").dump();
        ObjectiveFunction::from_json(cfg.objective_json); // validate early

        const json& algo = j.at("algorithm");
        cfg.algorithm.name = algo.at("name").get<std::string>();
        cfg.algorithm.train_steps = algo.value("train_steps", 5000L);
        if (algo.value("epoch", "fixed") == std::string("doubling"))
            cfg.algorithm.schedule = EpochSchedule::doubling();
        else
            cfg.algorithm.schedule = EpochSchedule::fixed(algo.value("epoch_tau", 100));
        if (algo.contains("solver")) {
            const json& s = algo.at("solver");
            cfg.algorithm.solver.step_size = s.value("step_size", 0.1);
            cfg.algorithm.solver.max_iters = s.value("max_iters", 5000);
            cfg.algorithm.solver.tolerance = s.value("tolerance", 1e-8);
            cfg.algorithm.solver.projection_tolerance = s.value("projection_tolerance", 1e-9);
            cfg.algorithm.solver.projection_max_iters = s.value("projection_max_iters", 10000);
        }
        cfg.algorithm.ops_delta = algo.value("delta", 0.05);
        if (algo.contains("pg")) {
            const json& p = algo.at("pg");
            cfg.algorithm.pg.batch_size = p.value("batch_size", 100);
            cfg.algorithm.pg.learning_rate = p.value("learning_rate", 1e-3);
            cfg.algorithm.pg.discount = p.value("discount", 0.99);
            cfg.algorithm.pg.horizon = p.value("horizon", 0);
            cfg.algorithm.pg.epochs = p.value("epochs", 1000);
            cfg.algorithm.pg.optimizer = p.value("optimizer", "adam") == std::string("sgd")
                                             ? PgConfig::Optimizer::Sgd
                                             : PgConfig::Optimizer::Adam;
            if (p.contains("hidden"))
                cfg.algorithm.pg.hidden_widths = p.at("hidden").get<std::vector<int>>();
        }
        cfg.algorithm.sarsa_gamma = algo.value("sarsa_gamma", 0.9);
        cfg.algorithm.sarsa_epsilon = algo.value("sarsa_epsilon", 0.05);
        cfg.algorithm.sarsa_lr = algo.value("sarsa_lr", 0.01);

        cfg.horizon = j.value("horizon", 1000L);
        if (j.contains("seeds")) {
            if (j.at("seeds").is_object()) {
                const std::uint64_t base = j.at("seeds").value("base", 1ULL);
                const int count = j.at("seeds").at("count").get<int>();
                for (int i = 0; i < count; ++i) cfg.seeds.push_back(base + i);
            } else {
                cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
            }
        }
        if (cfg.seeds.empty()) throw ConfigError("config: at least one seed required");
        cfg.output_dir = j.value("output", "out");
        cfg.regret = j.value("regret", false);
        cfg.record_every = j.value("record_every", 1);
        cfg.max_workers = j.value("max_workers", 0);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["environment"]["kind"] = environment.kind;
    j["environment"]["n_agents"] = environment.n_agents;
    j["objective"] = json::parse(objective_json);
    j["algorithm"]["name"] = algorithm.name;
    j["algorithm"]["train_steps"] = algorithm.train_steps;
    j["horizon"] = horizon;
    j["seeds"] = seeds;
    j["output"] = output_dir;
    j["regret"] = regret;
    return j.dump();
}

void run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(cfg.output_dir);

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers = cfg.max_workers > 0 ? cfg.max_workers : std::max(hw, 1);

    std::vector<SeedOutcome> outcomes(cfg.seeds.size());
    for (std::size_t begin = 0; begin < cfg.seeds.size();
         begin += static_cast<std::size_t>(workers)) {
        const std::size_t end =
            std::min(begin + static_cast<std::size_t>(workers), cfg.seeds.size());
        std::vector<std::future<SeedOutcome>> batch;
        for (std::size_t i = begin; i < end; ++i)
            batch.push_back(std::async(std::launch::async, run_seed, std::cref(cfg),
                                       cfg.seeds[i]));
        for (std::size_t i = begin; i < end; ++i) outcomes[i] = batch[i - begin].get();
    }

    const bool with_regret = cfg.regret && !outcomes.front().regret_curve.empty();
    for (const SeedOutcome& outcome : outcomes) {
        std::ofstream csv(fs::path(cfg.output_dir) /
                          ("seed_" + std::to_string(outcome.seed) + ".csv"));
        csv << (with_regret ? "t,f_t,regret\n" : "t,f_t\n");
        csv.precision(12);
        for (std::size_t i = 0; i < outcome.fairness_curve.size();
             i += static_cast<std::size_t>(cfg.record_every)) {
            csv << (i + 1) << ',' << outcome.fairness_curve[i];
            if (with_regret) csv << ',' << outcome.regret_curve[i];
            csv << '\n';
        }
    }

    {
        std::ofstream csv(fs::path(cfg.output_dir) / "aggregate.csv");
        csv << "t,median,q25,q75\n";
        csv.precision(12);
        const std::size_t T = outcomes.front().fairness_curve.size();
        Vec sample(outcomes.size());
        for (std::size_t i = 0; i < T; i += static_cast<std::size_t>(cfg.record_every)) {
            for (std::size_t s = 0; s < outcomes.size(); ++s)
                sample[s] = outcomes[s].fairness_curve[i];
            csv << (i + 1) << ',' << percentile(sample, 0.5) << ','
                << percentile(sample, 0.25) << ',' << percentile(sample, 0.75) << '\n';
        }
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json summary;
    summary["config"] = json::parse(cfg.to_json());
    Vec finals;
    for (const SeedOutcome& o : outcomes) {
        finals.push_back(o.fairness_curve.back());
        summary["final_f"][std::to_string(o.seed)] = o.fairness_curve.back();
    }
    summary["final_f_median"] = percentile(finals, 0.5);
    summary["final_f_q25"] = percentile(finals, 0.25);
    summary["final_f_q75"] = percentile(finals, 0.75);
    summary["wall_clock_seconds"] = elapsed;
    std::ofstream out(fs::path(cfg.output_dir) / "summary.json");
    out << summary.dump(2) << '\n';
}

} // namespace fairrl
