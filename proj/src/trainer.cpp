#include "trapsnet/trainer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "trapsnet/threads.hpp"

namespace trapsnet {

using nn::Graph;
using nn::GradMap;
using nn::NodeId;
using nn::ParamStore;

namespace {

constexpr double kLogFloor = 1e-12;

EncoderConfig config_from(const TrainConfig& config) {
    if (config.resume) return config.resume->config;
    EncoderConfig c = EncoderConfig::for_domain(config.instances.front().domain,
                                                config.encoder);
    c.shared_encoder = config.shared_encoder;
    return c;
}

void validate(const TrainConfig& config) {
    if (config.instances.empty()) throw Error("train: no training instances");
    if (config.nstep < 1) throw Error("train: nstep must be >= 1");
    if (!(config.gamma > 0.0 && config.gamma <= 1.0))
        throw Error("train: gamma must be in (0, 1]");
    if (config.wall_clock_budget < 0.0 || config.max_rounds < 0)
        throw Error("train: budgets must be non-negative");
    DomainId domain = config.instances.front().domain;
    for (const ProblemInstance& p : config.instances) {
        p.validate();
        if (p.domain != domain)
            throw DomainMismatch("train: instances span multiple domains");
    }
    if (config.resume && config.resume->domain != domain)
        throw DomainMismatch("train: resume checkpoint domain differs");
}

} // namespace

EpisodeRunner::EpisodeRunner(const ProblemInstance& instance, RngStream rng)
    : instance_(&instance), graph_(build_graph(instance)), rng_(rng),
      state_{instance.initial_fluents} {}

double EpisodeRunner::mean_episode_return() const {
    return completed_count_ == 0 ? 0.0 : completed_total_ / completed_count_;
}

Segment EpisodeRunner::collect(const ParamStore& params, const EncoderConfig& config,
                               int nstep, bool normalize_rewards) {
    Segment seg;
    seg.instance = instance_;
    seg.rng_state_before = rng_.state();
    double scale = normalize_rewards ? 1.0 / instance_->object_count() : 1.0;
    for (int t = 0; t < nstep; ++t) {
        Graph gp;
        NodeId dist_node = policy_dist_node(gp, *instance_, graph_, state_, params, config);
        const Tensor& probs = gp.value(dist_node);
        PolicyDistribution dist;
        dist.probs.assign(probs.data().begin(), probs.data().end());
        for (double p : dist.probs)
            dist.log_probs.push_back(std::log(std::max(p, kLogFloor)));

        Graph gv;
        double value =
            gv.value(value_node(gv, *instance_, graph_, state_, params, config)).item();

        GroundAction action = sample_action(*instance_, dist, rng_);
        auto [next, r] = step(*instance_, state_, action, rng_);

        seg.states.push_back(state_);
        seg.actions.push_back(action);
        seg.rewards.push_back(r * scale);
        seg.values.push_back(value);
        seg.log_probs.push_back(dist.log_probs[action_index(*instance_, action)]);
        seg.entropies.push_back(dist.entropy());
        episode_reward_ += r;

        state_ = std::move(next);
        ++steps_done_;
        if (steps_done_ >= instance_->horizon || is_terminal(*instance_, state_)) {
            seg.episode_ended = true;
            completed_total_ += episode_reward_;
            ++completed_count_;
            episode_reward_ = 0.0;
            steps_done_ = 0;
            state_ = GroundState{instance_->initial_fluents};
            break;
        }
    }
    if (!seg.episode_ended) {
        Graph gv;
        seg.bootstrap =
            gv.value(value_node(gv, *instance_, graph_, state_, params, config)).item();
    }
    return seg;
}

Segment collect_segment(EpisodeRunner& runner, const ParamStore& params,
                        const EncoderConfig& config, int nstep,
                        bool normalize_rewards) {
    return runner.collect(params, config, nstep, normalize_rewards);
}

AdvantageBatch compute_advantages(const Segment& segment, double gamma) {
    int n = segment.length();
    AdvantageBatch batch;
    batch.returns.resize(n);
    batch.advantages.resize(n);
    double r = segment.bootstrap;
    for (int t = n - 1; t >= 0; --t) {
        r = segment.rewards[t] + gamma * r;
        batch.returns[t] = r;
        batch.advantages[t] = r - segment.values[t];
    }
    return batch;
}

NodeId loss_node(Graph& g, const Segment& segment, const AdvantageBatch& advantages,
                 const ParamStore& params, const EncoderConfig& config,
                 double value_loss_weight, double entropy_weight) {
    const ProblemInstance& instance = *segment.instance;
    ObjectGraph graph = build_graph(instance);
    NodeId policy_sum = -1, value_sum = -1, entropy_sum = -1;
    auto accumulate = [&g](NodeId& sum, NodeId term) {
        sum = sum < 0 ? term : g.add(sum, term);
    };
    for (int t = 0; t < segment.length(); ++t) {
        NodeId dist = policy_dist_node(g, instance, graph, segment.states[t],
                                       params, config);
        int a = action_index(instance, segment.actions[t]);
        NodeId log_prob = g.log(g.clamp_min(g.element(dist, 0, a), kLogFloor));
        accumulate(policy_sum, g.scale(log_prob, advantages.advantages[t]));

        NodeId log_dist = g.log(g.clamp_min(dist, kLogFloor));
        accumulate(entropy_sum, g.scale(g.sum_all(g.mul(dist, log_dist)), -1.0));

        NodeId v = value_node(g, instance, graph, segment.states[t], params, config);
        NodeId diff = g.sub(g.constant(Tensor::scalar(advantages.returns[t])), v);
        accumulate(value_sum, g.mul(diff, diff));
    }
    if (segment.length() == 0)
        return g.constant(Tensor::scalar(0.0));
    return g.add(g.add(g.scale(policy_sum, -1.0), g.scale(value_sum, value_loss_weight)),
                 g.scale(entropy_sum, -entropy_weight));
}

double loss(const Segment& segment, const AdvantageBatch& advantages,
            const ParamStore& params, const EncoderConfig& config,
            double value_loss_weight, double entropy_weight) {
    Graph g;
    return g.value(loss_node(g, segment, advantages, params, config,
                             value_loss_weight, entropy_weight)).item();
}

RoundStats accumulate_and_apply(const std::vector<Segment>& segments,
                                ParamStore& params, nn::RMSPropState& opt,
                                const TrainConfig& config) {
    EncoderConfig model_config = config_from(config);
    int n = static_cast<int>(segments.size());
    std::vector<GradMap> grads(n);
    std::vector<RoundStats> stats(n);
    run_units(n, config.threads, [&](int i) {
        const Segment& seg = segments[i];
        AdvantageBatch adv = compute_advantages(seg, config.gamma);
        Graph g;
        NodeId total = loss_node(g, seg, adv, params, model_config,
                                 config.value_loss_weight, config.entropy_weight);
        g.backward(total);
        grads[i] = g.param_grads();
        stats[i].total_loss = g.value(total).item();
        for (int t = 0; t < seg.length(); ++t) {
            stats[i].policy_loss -= seg.log_probs[t] * adv.advantages[t];
            stats[i].value_loss +=
                (adv.returns[t] - seg.values[t]) * (adv.returns[t] - seg.values[t]);
            stats[i].entropy += seg.entropies[t];
        }
    });

    GradMap total = std::move(grads[0]);
    for (int i = 1; i < n; ++i)
        for (auto& [name, g] : grads[i]) {
            Tensor& acc = total[name];
            if (acc.size() == 0) {
                acc = std::move(g);
            } else {
                for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += g[k];
            }
        }

    for (const auto& [name, g] : total)
        if (!g.all_finite()) {
            std::ostringstream msg;
            msg << "non-finite gradient in parameter " << name << "; segment seeds:";
            for (const Segment& seg : segments)
                msg << " " << seg.rng_state_before;
            throw NonFiniteGradient(msg.str());
        }

    RoundStats round;
    for (const RoundStats& s : stats) {
        round.policy_loss += s.policy_loss;
        round.value_loss += s.value_loss;
        round.entropy += s.entropy;
        round.total_loss += s.total_loss;
    }
    round.grad_norm = nn::clip_global_norm(total, config.grad_clip_norm);
    rmsprop_update(params, total, opt);
    return round;
}

Checkpoint train(const TrainConfig& config, const CheckpointSink& sink,
                 const TrainLogger& logger) {
    validate(config);
    EncoderConfig model_config = config_from(config);
    DomainId domain = config.instances.front().domain;
    if (model_config.feature_count != feature_count(domain))
        throw FeatureCountMismatch("train: checkpoint feature count differs from domain");

    ParamStore params = config.resume ? config.resume->params
                                      : init_params(model_config, config.seed);
    nn::RMSPropState opt;
    std::uint64_t steps = config.resume ? config.resume->meta.gradient_steps : 0;
    double wall_offset = config.resume ? config.resume->meta.wall_seconds : 0.0;

    RngStream master(config.seed);
    std::vector<EpisodeRunner> runners;
    runners.reserve(config.instances.size());
    for (std::size_t i = 0; i < config.instances.size(); ++i)
        runners.emplace_back(config.instances[i], master.derive(1000 + i));

    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return wall_offset + std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start).count();
    };
    // Pure round-budget runs carry a virtual clock (1 round = 1 tick) so the
    // emitted checkpoint sequence is deterministic end to end.
    bool virtual_clock = config.max_rounds > 0 && config.wall_clock_budget == 0.0;
    long round = 0;
    auto checkpoint_time = [&] {
        return virtual_clock ? wall_offset + static_cast<double>(round) : elapsed();
    };
    auto make_checkpoint = [&](double wall) {
        Checkpoint cp;
        cp.domain = domain;
        cp.config = model_config;
        cp.params = params;
        cp.meta = CheckpointMeta{wall, steps, config.seed};
        return cp;
    };

    // The pre-training checkpoint sits at exactly the resume offset (or 0),
    // so transfer curves get an exact t=0 zero-shot point.
    Checkpoint latest = make_checkpoint(wall_offset);
    if (sink) sink(latest);
    std::uint64_t last_emitted_steps = steps;
    double last_emit_time = wall_offset;

    int consecutive_failures = 0;
    while (true) {
        if (config.max_rounds > 0 && round >= config.max_rounds) break;
        if (config.wall_clock_budget > 0.0 && elapsed() >= config.wall_clock_budget)
            break;
        if (config.max_rounds == 0 && config.wall_clock_budget == 0.0) break;

        std::vector<Segment> segments(runners.size());
        run_units(static_cast<int>(runners.size()), config.threads, [&](int i) {
            segments[i] = runners[i].collect(params, model_config, config.nstep,
                                             config.normalize_rewards);
        });
        try {
            RoundStats stats = accumulate_and_apply(segments, params, opt, config);
            consecutive_failures = 0;
            ++steps;
            ++round;
            if (logger) {
                TrainLogRow row;
                row.wall_seconds = elapsed();
                row.round = round;
                for (const EpisodeRunner& r : runners)
                    row.problem_returns.push_back(r.mean_episode_return());
                row.stats = stats;
                logger(row);
            }
        } catch (const NonFiniteGradient&) {
            ++consecutive_failures;
            if (consecutive_failures >= 3) throw;
            continue;   // skip the update, keep collecting
        }

        bool emit = false;
        if (config.checkpoint_every_rounds > 0 &&
            round % config.checkpoint_every_rounds == 0)
            emit = true;
        if (config.checkpoint_interval > 0.0 &&
            elapsed() - last_emit_time >= config.checkpoint_interval)
            emit = true;
        if (emit && steps > last_emitted_steps) {
            latest = make_checkpoint(checkpoint_time());
            if (sink) sink(latest);
            last_emitted_steps = steps;
            last_emit_time = latest.meta.wall_seconds;
        }
    }

    if (steps > last_emitted_steps) {
        latest = make_checkpoint(checkpoint_time());
        if (sink) sink(latest);
    }
    return latest;
}

ModelEval transfer_init(const Checkpoint& checkpoint,
                        const ProblemInstance& target_instance) {
    target_instance.validate();
    if (checkpoint.domain != target_instance.domain)
        throw DomainMismatch("checkpoint domain " + domain_name(checkpoint.domain) +
                             " does not match instance domain " +
                             domain_name(target_instance.domain));
    if (checkpoint.config.feature_count != feature_count(target_instance.domain))
        throw FeatureCountMismatch("checkpoint expects " +
                                   std::to_string(checkpoint.config.feature_count) +
                                   " node features");
    return ModelEval(target_instance, checkpoint.params, checkpoint.config);
}

} // namespace trapsnet
