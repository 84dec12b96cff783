#include "hyperdm/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperdm/dismantle.hpp"
#include "hyperdm/error.hpp"

namespace hyperdm {

double reward(const Hypernetwork& residual, int original_n) {
    return -connectivity(residual, original_n);
}

int select_action(const Hypernetwork& g, const ParameterSet& params, double epsilon, Rng& rng) {
    if (g.empty()) fail("no-actions", "no nodes remain");
    double u = rng.uniform01();
    if (u < epsilon) {
        std::vector<int> ids = g.nodes();
        return ids[rng.uniform_int(0, static_cast<int>(ids.size()) - 1)];
    }
    auto scores = q_scores_all(g, params);
    int best = scores.front().first;
    double best_q = scores.front().second;
    for (const auto& [id, q] : scores) {
        if (q > best_q) {
            best = id;
            best_q = q;
        }
    }
    return best;
}

namespace {

bool episode_done(const Hypernetwork& g, Termination mode) {
    if (g.empty()) return true;
    if (mode == Termination::FullyFragmented) return g.fully_fragmented();
    return components(g).count() != 1;
}

}  // namespace

EpisodeTrace run_episode(const Hypernetwork& start, const ParameterSet& params,
                         const TrainConfig& cfg, Rng& rng) {
    EpisodeTrace trace;
    trace.original_n = start.node_count();
    trace.states.push_back(std::make_shared<Hypernetwork>(start));
    Hypernetwork cur = start;
    while (!episode_done(cur, cfg.termination)) {
        int action = select_action(cur, params, cfg.epsilon, rng);
        cur.remove_node_in_place(action);
        double r = reward(cur, trace.original_n);
        trace.states.push_back(std::make_shared<Hypernetwork>(cur));
        trace.steps.push_back({action, r});
    }
    return trace;
}

std::vector<Experience> extract_experiences(const EpisodeTrace& trace, int n_step) {
    if (n_step < 1) fail("invalid-config", "step length must be >= 1");
    int t_end = trace.length();
    std::vector<Experience> out;
    out.reserve(t_end);
    for (int t = 0; t < t_end; ++t) {
        Experience exp;
        exp.state = trace.states[t];
        exp.action = trace.steps[t].action;
        int hi = std::min(t + n_step, t_end - 1);
        for (int j = t; j <= hi; ++j) exp.reward_acc += trace.steps[j].reward;
        exp.next_state = trace.states[std::min(t + n_step, t_end)];
        exp.terminal = t + n_step >= t_end;
        out.push_back(std::move(exp));
    }
    return out;
}

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
    if (capacity < 1) fail("invalid-config", "buffer capacity must be >= 1");
    ring_.reserve(capacity);
}

void ReplayBuffer::push(Experience exp) {
    if (size() < capacity_) {
        ring_.push_back(std::move(exp));
    } else {
        ring_[cursor_] = std::move(exp);
        cursor_ = (cursor_ + 1) % capacity_;
    }
}

const Experience& ReplayBuffer::at(int i) const {
    return ring_[(cursor_ + static_cast<size_t>(i)) % ring_.size()];
}

std::vector<const Experience*> ReplayBuffer::sample(int k, Rng& rng) const {
    if (ring_.empty()) fail("insufficient-experience", "replay buffer is empty");
    k = std::min<int>(k, size());
    std::vector<int> indices(ring_.size());
    for (size_t i = 0; i < ring_.size(); ++i) indices[i] = static_cast<int>(i);
    std::vector<const Experience*> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        int j = static_cast<int>(rng.uniform_int(i, static_cast<int>(indices.size()) - 1));
        std::swap(indices[i], indices[j]);
        out.push_back(&ring_[indices[i]]);
    }
    return out;
}

namespace {

double bootstrap_target(const Experience& exp, const ParameterSet& target_params, double gamma) {
    if (exp.terminal) return exp.reward_acc;
    auto scores = q_scores_all(*exp.next_state, target_params);
    double best = scores.front().second;
    for (const auto& [id, q] : scores) best = std::max(best, q);
    return exp.reward_acc + gamma * best;
}

double q_of_action(const Embedding& fwd, const StateCache& state, int action,
                   const ParameterSet& params) {
    return q_values(fwd, state, {action}, params)(0);
}

}  // namespace

double td_loss(const std::vector<const Experience*>& batch, const ParameterSet& params,
               const ParameterSet& target_params, double gamma) {
    if (batch.empty()) fail("insufficient-experience", "empty batch");
    double total = 0.0;
    for (const Experience* exp : batch) {
        Embedding fwd = embed(*exp->state, params);
        StateCache state = state_embed(fwd, params);
        double predicted = q_of_action(fwd, state, exp->action, params);
        double target = bootstrap_target(*exp, target_params, gamma);
        double diff = predicted - target;
        total += diff * diff;
    }
    return total / static_cast<double>(batch.size());
}

double recon_loss(const Eigen::MatrixXd& y, const EmbeddingGraph& graph) {
    double total = 0.0;
    for (int e = 0; e < graph.edge_count(); ++e) {
        for (int o : graph.edge_neighbors[e]) total += (y.row(e) - y.row(o)).squaredNorm();
    }
    return total;
}

double recon_loss(const Eigen::MatrixXd& y, const Hypernetwork& g) {
    return recon_loss(y, EmbeddingGraph::build(g));
}

Eigen::MatrixXd recon_seed(const Eigen::MatrixXd& y, const EmbeddingGraph& graph) {
    Eigen::MatrixXd seed = Eigen::MatrixXd::Zero(y.rows(), y.cols());
    for (int e = 0; e < graph.edge_count(); ++e) {
        for (int o : graph.edge_neighbors[e]) seed.row(e) += 4.0 * (y.row(e) - y.row(o));
    }
    return seed;
}

double total_loss(const std::vector<const Experience*>& batch, const ParameterSet& params,
                  const ParameterSet& target_params, const TrainConfig& cfg) {
    if (batch.empty()) fail("insufficient-experience", "empty batch");
    double q_part = td_loss(batch, params, target_params, cfg.gamma);
    double recon_part = 0.0;
    for (const Experience* exp : batch) {
        Embedding fwd = embed(*exp->state, params);
        recon_part += recon_loss(fwd.hyperedge_embeddings(), fwd.graph);
    }
    recon_part /= static_cast<double>(batch.size());
    return q_part + cfg.recon_weight * recon_part;
}

LossGrad total_loss_gradients(const std::vector<const Experience*>& batch,
                              const ParameterSet& params, const ParameterSet& target_params,
                              const TrainConfig& cfg) {
    if (batch.empty()) fail("insufficient-experience", "empty batch");
    double inv_b = 1.0 / static_cast<double>(batch.size());

    LossGrad out;
    out.grad = ParameterSet::zeros(params.dims);
    for (const Experience* exp : batch) {
        Embedding fwd = embed(*exp->state, params);
        StateCache state = state_embed(fwd, params);
        double predicted = q_of_action(fwd, state, exp->action, params);
        double target = bootstrap_target(*exp, target_params, cfg.gamma);
        double diff = predicted - target;

        BackwardSeeds seeds;
        seeds.dq = 2.0 * diff * inv_b;
        seeds.action_node = exp->action;
        double recon = 0.0;
        if (cfg.recon_weight != 0.0 && fwd.hyperedge_embeddings().size() > 0) {
            recon = recon_loss(fwd.hyperedge_embeddings(), fwd.graph);
            seeds.d_y_final =
                cfg.recon_weight * inv_b * recon_seed(fwd.hyperedge_embeddings(), fwd.graph);
        }
        out.loss += inv_b * (diff * diff + cfg.recon_weight * recon);
        gradients(fwd, state, seeds, params, *exp->state, out.grad);
    }
    return out;
}

double validation_anc(const std::vector<Hypernetwork>& instances, const ParameterSet& params,
                      double batch_frac) {
    if (instances.empty()) fail("invalid-config", "empty validation set");
    Strategy agent{StrategyKind::Agent};
    agent.agent_params = &params;
    double total = 0.0;
    for (const Hypernetwork& g : instances) total += anc(dismantle(g, agent, batch_frac));
    return total / static_cast<double>(instances.size());
}

TrainResult train(const TrainConfig& cfg, const GenConfig& gen_cfg, uint64_t seed,
                  const std::function<void(int, double)>& on_validation) {
    if (cfg.episodes < 0 || cfg.n_step < 1 || cfg.target_copy < 1)
        fail("invalid-config", "bad training configuration");
    if (cfg.gamma < 0.0 || cfg.gamma > 1.0 || cfg.epsilon < 0.0 || cfg.epsilon > 1.0)
        fail("invalid-config", "gamma and epsilon must lie in [0,1]");

    Rng init_rng(derive_seed(seed, Stream::Init));
    Rng explore_rng(derive_seed(seed, Stream::Exploration));
    uint64_t gen_stream = derive_seed(seed, Stream::Generation);

    ParameterSet params = ParameterSet::random(cfg.dims, init_rng);
    ParameterSet target_params = params;

    GenConfig val_gen = gen_cfg;
    val_gen.seed = derive_seed(seed, Stream::Validation);
    std::vector<Hypernetwork> val_set = generate_batch(val_gen, cfg.validation_size);

    TrainResult result;
    result.initial_validation_anc = validation_anc(val_set, params, cfg.validation_batch_frac);
    result.best_validation_anc = std::numeric_limits<double>::infinity();
    result.best_params = params;

    ReplayBuffer buffer(cfg.buffer_capacity);
    for (int episode = 1; episode <= cfg.episodes; ++episode) {
        GenConfig ep_gen = gen_cfg;
        ep_gen.seed = derive_seed(gen_stream, static_cast<uint64_t>(episode));
        Hypernetwork g = generate(ep_gen);

        EpisodeTrace trace = run_episode(g, params, cfg, explore_rng);
        for (Experience& exp : extract_experiences(trace, cfg.n_step)) buffer.push(std::move(exp));

        if (episode > cfg.warmup) {
            auto batch = buffer.sample(cfg.batch_size, explore_rng);
            LossGrad lg = total_loss_gradients(batch, params, target_params, cfg);
            params.add_scaled(lg.grad, -cfg.learning_rate);
        }
        if (episode % cfg.target_copy == 0) target_params = params;

        if (cfg.validation_interval > 0 && episode % cfg.validation_interval == 0) {
            double anc_value = validation_anc(val_set, params, cfg.validation_batch_frac);
            result.validation_curve.emplace_back(episode, anc_value);
            if (anc_value < result.best_validation_anc) {
                result.best_validation_anc = anc_value;
                result.best_params = params;
            }
            if (on_validation) on_validation(episode, anc_value);
        }
    }
    result.final_params = params;
    if (!std::isfinite(result.best_validation_anc))
        result.best_validation_anc = result.initial_validation_anc;
    return result;
}

}  // namespace hyperdm
