#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgrx/graph.hpp"
#include "kgrx/rng.hpp"

namespace kgrx {

// Two-part entity/relation representation: a modulus vector controls radial
// distance and a phase vector controls angular position. A triple (h, r, t)
// is scored
//
//   s = -|| h_mod * r_mod - t_mod ||_2
//       - lambda * sum_j | sin((h_phase_j + r_phase_j - t_phase_j) / 2) |
//
// so s <= 0, and larger (closer to zero) means more plausible.
struct HakeParams {
    int dim = 0;
    double lambda = 0.5;

    std::vector<std::string> entities;   // sorted unique ids
    std::vector<std::string> relations;  // sorted unique names
    std::unordered_map<std::string, int> entity_slot;
    std::unordered_map<std::string, int> relation_slot;

    // Flat row-major storage, one row of `dim` values per entity/relation.
    std::vector<double> ent_mod, ent_phase;
    std::vector<double> rel_mod, rel_phase;

    int entity_index(const std::string& id) const;      // NotFoundError
    int relation_index(const std::string& name) const;  // NotFoundError

    const double* ent_mod_row(int slot) const { return ent_mod.data() + static_cast<std::size_t>(slot) * dim; }
    const double* ent_phase_row(int slot) const { return ent_phase.data() + static_cast<std::size_t>(slot) * dim; }
    const double* rel_mod_row(int slot) const { return rel_mod.data() + static_cast<std::size_t>(slot) * dim; }
    const double* rel_phase_row(int slot) const { return rel_phase.data() + static_cast<std::size_t>(slot) * dim; }
};

double score_triple(const HakeParams& p, const std::string& h, const std::string& r,
                    const std::string& t);

// Literature-support weights, one per graph triple (aligned with
// Graph::triples() order). The prior is w0 = 1 + ln(1 + article_count) and
// the learnable weight starts at w0 / max(w0), so the best-supported triple
// starts at exactly 1.
struct TripleWeights {
    std::vector<Triple> triples;
    std::vector<double> w0;
    std::vector<double> w;
    std::unordered_map<std::string, int> slot;  // triple_key -> index

    int index_of(const std::string& h, const std::string& r, const std::string& t) const;
    double weight_of(const std::string& h, const std::string& r, const std::string& t) const;
};

TripleWeights init_weights(const Graph& g);

struct TrainConfig {
    int dim = 64;
    int epochs = 200;
    int batch_size = 128;
    double learning_rate = 0.05;
    int negatives_per_positive = 4;
    double lambda = 0.5;
    double gamma = 200.0;  // margin added to scores inside the loss
    bool weighted = false;
    std::uint64_t seed = 1;
};

// Moduli start uniform in (-0.5, 0.5), phases uniform in (-pi, pi). The same
// seed always produces the same parameters; `train` threads one stream
// through init, shuffling and negative sampling.
HakeParams init_params(const Graph& g, const TrainConfig& cfg);
HakeParams init_params(const Graph& g, const TrainConfig& cfg, Rng& rng);

// Replaces the head or the tail (fair coin) with a uniformly drawn entity of
// the same kind, rejecting corruptions that exist in the graph. After 100
// draws on the chosen side it tries the other side; when both sides fail an
// ExhaustionError is thrown.
Triple sample_negative(const Graph& g, const Triple& positive, Rng& rng);

// One positive with its sampled corruptions.
struct TrainInstance {
    Triple positive;
    std::vector<Triple> negatives;
};

// Gradient accumulators shaped exactly like HakeParams / TripleWeights.
struct HakeGradients {
    std::vector<double> ent_mod, ent_phase, rel_mod, rel_phase;
    std::vector<double> weight;

    void resize_like(const HakeParams& p, std::size_t n_weights);
    void clear();
};

// Weighted binary cross-entropy with margin `gamma`:
//
//   c_j = -log sigmoid(gamma + s(pos_j))
//         - mean_k log sigmoid(-(gamma + s(neg_jk)))
//   L   = sum_j w_j c_j / sum_j w_j
//
// where w_j is the learnable weight of positive j (treated as exactly 1 when
// `weighted` is false). Every positive must be a graph triple known to
// `weights`.
double loss_batch(const HakeParams& p, const TripleWeights& weights,
                  const std::vector<TrainInstance>& batch, double gamma, bool weighted);

// Same value as loss_batch, plus analytic gradients with respect to every
// embedding entry and (when `weighted`) every triple weight. `out` must be
// sized with resize_like; it is cleared first.
double loss_batch_grad(const HakeParams& p, const TripleWeights& weights,
                       const std::vector<TrainInstance>& batch, double gamma, bool weighted,
                       HakeGradients& out);

struct TrainResult {
    HakeParams params;
    TripleWeights weights;
    TrainConfig config;                   // the configuration that produced this model
    std::vector<double> epoch_mean_loss;  // mean of batch losses, one per epoch
};

// Plain SGD over shuffled triples. Weights are projected back into [0, 1]
// after every step; with `weighted` off they stay at exactly 1.
TrainResult train(const Graph& g, const TrainConfig& cfg);

// Scores (drug, relation, disease) for every drug entity and returns the
// top_k by score (ties broken by drug id). top_k <= 0 means all drugs.
std::vector<std::pair<std::string, double>> rank_drugs(const HakeParams& p, const Graph& g,
                                                       const std::string& disease,
                                                       const std::string& relation, int top_k);

void save_checkpoint(const TrainResult& r, const std::string& path);
TrainResult load_checkpoint(const std::string& path);

}  // namespace kgrx
