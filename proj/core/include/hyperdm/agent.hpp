#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hyperdm/embedding.hpp"
#include "hyperdm/hypergraph.hpp"
#include "hyperdm/rng.hpp"
#include "hyperdm/synthgen.hpp"

namespace hyperdm {

// Episode termination rule. FullyFragmented (no hyperedge of size >= 2
// remains) keeps episodes long enough to feed the replay buffer;
// FirstDisconnect stops at the first loss of connectedness.
enum class Termination { FullyFragmented, FirstDisconnect };

struct TrainConfig {
    double gamma = 0.99;       // reward discount in the bootstrap term
    int n_step = 5;            // reward accumulation window
    double epsilon = 0.05;     // exploration probability
    int episodes = 100000;     // N
    int target_copy = 1000;    // C, target-network copy frequency
    int warmup = 1000;         // episodes without parameter updates
    int buffer_capacity = 50000;
    int batch_size = 64;
    double learning_rate = 1e-3;
    double recon_weight = 1.0;  // alpha, weight of the reconstruction loss
    int validation_interval = 50;
    int validation_size = 50;
    double validation_batch_frac = 0.01;
    Termination termination = Termination::FullyFragmented;
    EmbedDims dims{3, 64};
};

// Punishment reward: the negated connectivity of the residual.
double reward(const Hypernetwork& residual, int original_n);

// epsilon-greedy: a uniformly random remaining node with probability
// epsilon, otherwise the remaining node with the highest q value (ties by
// smallest node id). Errors with "no-actions" on an empty hypernetwork.
int select_action(const Hypernetwork& g, const ParameterSet& params, double epsilon, Rng& rng);

struct DecisionStep {
    int action;
    double reward;
};

// Full decision sequence s_0, a_0, r_0, ..., s_T of one dismantling episode.
struct EpisodeTrace {
    std::vector<std::shared_ptr<const Hypernetwork>> states;  // T + 1 snapshots
    std::vector<DecisionStep> steps;                          // T entries
    int original_n = 0;

    int length() const { return static_cast<int>(steps.size()); }
};

EpisodeTrace run_episode(const Hypernetwork& start, const ParameterSet& params,
                         const TrainConfig& cfg, Rng& rng);

// n-step experience: the window sum of rewards is inclusive
// (r_t + ... + r_{t+n}, truncated at the last step) and undiscounted; the
// discount enters only the bootstrap target.
struct Experience {
    std::shared_ptr<const Hypernetwork> state;       // s_t
    int action = -1;                                 // a_t
    double reward_acc = 0.0;                         // r_{t, t+n} <= 0
    std::shared_ptr<const Hypernetwork> next_state;  // s_{t+n} or s_T
    bool terminal = false;                           // window reached s_T
};

std::vector<Experience> extract_experiences(const EpisodeTrace& trace, int n_step);

// Fixed-capacity ring with strictly oldest-first eviction.
class ReplayBuffer {
public:
    explicit ReplayBuffer(int capacity);

    void push(Experience exp);
    int size() const { return static_cast<int>(ring_.size()); }
    int capacity() const { return capacity_; }

    // Element i in oldest-first order.
    const Experience& at(int i) const;

    // Distinct uniform sample of min(k, size()) experiences.
    std::vector<const Experience*> sample(int k, Rng& rng) const;

private:
    int capacity_;
    std::vector<Experience> ring_;
    size_t cursor_ = 0;
};

// Mean squared TD error over the batch. Terminal experiences bootstrap from
// the accumulated reward alone.
double td_loss(const std::vector<const Experience*>& batch, const ParameterSet& params,
               const ParameterSet& target_params, double gamma);

// Hyperedge-embedding reconstruction penalty: the double sum over neighbor
// pairs of squared embedding distances (each unordered pair counted twice).
double recon_loss(const Eigen::MatrixXd& y, const Hypernetwork& g);
double recon_loss(const Eigen::MatrixXd& y, const EmbeddingGraph& graph);

// Gradient of the reconstruction loss with respect to y.
Eigen::MatrixXd recon_seed(const Eigen::MatrixXd& y, const EmbeddingGraph& graph);

// Combined objective: TD loss plus recon_weight times the reconstruction
// loss of each experience's s_t embeddings, both averaged over the batch.
double total_loss(const std::vector<const Experience*>& batch, const ParameterSet& params,
                  const ParameterSet& target_params, const TrainConfig& cfg);

struct LossGrad {
    double loss = 0.0;
    ParameterSet grad;
};

LossGrad total_loss_gradients(const std::vector<const Experience*>& batch,
                              const ParameterSet& params, const ParameterSet& target_params,
                              const TrainConfig& cfg);

// Mean ANC of the greedy policy over a held-out set, using the batch
// removal protocol.
double validation_anc(const std::vector<Hypernetwork>& instances, const ParameterSet& params,
                      double batch_frac);

struct TrainResult {
    ParameterSet best_params;   // minimal validation ANC over the run
    ParameterSet final_params;
    std::vector<std::pair<int, double>> validation_curve;  // (episode, mean ANC)
    double initial_validation_anc = 0.0;
    double best_validation_anc = 0.0;
};

// Full training loop: per episode, generate an instance, dismantle it
// epsilon-greedily, store the extracted experiences, then (after warmup)
// sample a batch and take one SGD step; the target network is refreshed
// every target_copy episodes and the validation set is scored every
// validation_interval episodes.
TrainResult train(const TrainConfig& cfg, const GenConfig& gen_cfg, uint64_t seed,
                  const std::function<void(int, double)>& on_validation = {});

}  // namespace hyperdm
