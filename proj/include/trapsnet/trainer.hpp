#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "trapsnet/instance_io.hpp"
#include "trapsnet/mdp.hpp"
#include "trapsnet/model.hpp"

namespace trapsnet {

struct TrainConfig {
    std::vector<ProblemInstance> instances;
    int nstep = 20;
    double gamma = 0.99;
    double entropy_weight = 0.01;
    double value_loss_weight = 0.5;
    double grad_clip_norm = 40.0;

    /// Stop after this much wall time (seconds). 0 disables the time budget.
    double wall_clock_budget = 0.0;
    /// Emit a checkpoint whenever this much time has passed since the last.
    double checkpoint_interval = 0.0;
    /// Deterministic alternative: stop after this many accumulation rounds
    /// (0 disables) and checkpoint every so many rounds.
    long max_rounds = 0;
    long checkpoint_every_rounds = 0;

    std::uint64_t seed = 0;
    EncoderKind encoder = EncoderKind::Gat;
    bool shared_encoder = false;
    /// Divide rewards by the instance's object count during training.
    bool normalize_rewards = false;
    int threads = 1;

    /// Continue from a previous checkpoint instead of fresh parameters.
    std::optional<Checkpoint> resume;
};

/// One n-step slice of one problem's episode, collected against a fixed
/// parameter snapshot.
struct Segment {
    const ProblemInstance* instance = nullptr;
    std::vector<GroundState> states;
    std::vector<GroundAction> actions;
    std::vector<double> rewards;
    std::vector<double> values;       // V(s_t) under the snapshot
    std::vector<double> log_probs;    // log pi(a_t | s_t) at collection time
    std::vector<double> entropies;
    double bootstrap = 0.0;           // 0 when the episode ended in this slice
    bool episode_ended = false;
    std::uint64_t rng_state_before = 0;

    int length() const { return static_cast<int>(rewards.size()); }
};

struct AdvantageBatch {
    std::vector<double> returns;      // n-step returns R_t
    std::vector<double> advantages;   // R_t - V(s_t)
};

/// Tracks one training problem's episode across segments: current state,
/// step count, and its private random stream.
class EpisodeRunner {
public:
    EpisodeRunner(const ProblemInstance& instance, RngStream rng);

    Segment collect(const nn::ParamStore& params, const EncoderConfig& config,
                    int nstep, bool normalize_rewards);

    const ProblemInstance& instance() const { return *instance_; }
    /// Undiscounted return averaged over completed episodes (0 before any).
    double mean_episode_return() const;

private:
    const ProblemInstance* instance_;
    ObjectGraph graph_;
    RngStream rng_;
    GroundState state_;
    int steps_done_ = 0;
    double episode_reward_ = 0.0;
    double completed_total_ = 0.0;
    long completed_count_ = 0;
};

Segment collect_segment(EpisodeRunner& runner, const nn::ParamStore& params,
                        const EncoderConfig& config, int nstep,
                        bool normalize_rewards = false);

AdvantageBatch compute_advantages(const Segment& segment, double gamma);

/// A3C loss node over one segment:
///   -sum_t log pi(a_t|s_t) * A_t + w_v * sum_t (R_t - V(s_t))^2
///   - w_e * sum_t H(pi(.|s_t))
/// with the advantages and returns treated as constants.
nn::NodeId loss_node(nn::Graph& g, const Segment& segment,
                     const AdvantageBatch& advantages,
                     const nn::ParamStore& params, const EncoderConfig& config,
                     double value_loss_weight, double entropy_weight);

double loss(const Segment& segment, const AdvantageBatch& advantages,
            const nn::ParamStore& params, const EncoderConfig& config,
            double value_loss_weight, double entropy_weight);

struct RoundStats {
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double total_loss = 0.0;
    double grad_norm = 0.0;   // pre-clip
};

/// Sum the per-problem loss gradients, clip by global norm, and apply one
/// optimizer update. Throws NonFiniteGradient (without touching the
/// parameters) if any accumulated gradient is non-finite.
RoundStats accumulate_and_apply(const std::vector<Segment>& segments,
                                nn::ParamStore& params, nn::RMSPropState& opt,
                                const TrainConfig& config);

struct TrainLogRow {
    double wall_seconds = 0.0;
    long round = 0;
    std::vector<double> problem_returns;   // one per training problem
    RoundStats stats;
};

using CheckpointSink = std::function<void(const Checkpoint&)>;
using TrainLogger = std::function<void(const TrainLogRow&)>;

/// Synchronous multi-problem training loop: collect one segment per problem
/// against the current snapshot, accumulate their gradients, apply one
/// update, repeat until the budget runs out. Emits an initial checkpoint
/// before the first round and one at every checkpoint interval. Returns the
/// final checkpoint.
///
/// Within a round the per-problem units (segment collection, loss, gradient)
/// may run on worker threads; each problem owns its episode state and random
/// stream and reads one immutable parameter snapshot, and gradients are
/// summed in problem order, so the thread count never changes the result.
/// The optimizer update is applied by the single caller thread.
Checkpoint train(const TrainConfig& config, const CheckpointSink& sink = {},
                 const TrainLogger& logger = {});

/// Validate a checkpoint against a target instance and build evaluation
/// closures over its parameters. Throws DomainMismatch/FeatureCountMismatch.
ModelEval transfer_init(const Checkpoint& checkpoint,
                        const ProblemInstance& target_instance);

} // namespace trapsnet
