#include "kgrx/hake.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "kgrx/text.hpp"

namespace kgrx {

namespace {

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// -log sigmoid(x) = softplus(-x), computed without overflow.
double neg_log_sigmoid(double x) {
    if (x >= 0) return std::log1p(std::exp(-x));
    return -x + std::log1p(std::exp(x));
}

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

struct TripleRef {
    int h, r, t;
};

TripleRef resolve(const HakeParams& p, const Triple& tr) {
    return {p.entity_index(tr.head), p.relation_index(tr.relation), p.entity_index(tr.tail)};
}

double score_resolved(const HakeParams& p, const TripleRef& x) {
    const double* hm = p.ent_mod_row(x.h);
    const double* rm = p.rel_mod_row(x.r);
    const double* tm = p.ent_mod_row(x.t);
    const double* hp = p.ent_phase_row(x.h);
    const double* rp = p.rel_phase_row(x.r);
    const double* tp = p.ent_phase_row(x.t);
    double sq = 0, pen = 0;
    for (int j = 0; j < p.dim; ++j) {
        const double m = hm[j] * rm[j] - tm[j];
        sq += m * m;
        pen += std::abs(std::sin((hp[j] + rp[j] - tp[j]) / 2.0));
    }
    return -std::sqrt(sq) - p.lambda * pen;
}

// Adds d/ds contributions scaled by `coef` into `out` for one triple.
void accumulate_score_grad(const HakeParams& p, const TripleRef& x, double coef,
                           HakeGradients& out) {
    const double* hm = p.ent_mod_row(x.h);
    const double* rm = p.rel_mod_row(x.r);
    const double* tm = p.ent_mod_row(x.t);
    const double* hp = p.ent_phase_row(x.h);
    const double* rp = p.rel_phase_row(x.r);
    const double* tp = p.ent_phase_row(x.t);

    double sq = 0;
    for (int j = 0; j < p.dim; ++j) {
        const double m = hm[j] * rm[j] - tm[j];
        sq += m * m;
    }
    const double dist = std::sqrt(sq);

    const std::size_t hb = static_cast<std::size_t>(x.h) * p.dim;
    const std::size_t rb = static_cast<std::size_t>(x.r) * p.dim;
    const std::size_t tb = static_cast<std::size_t>(x.t) * p.dim;
    for (int j = 0; j < p.dim; ++j) {
        // Modulus part: s contributes -||m||, so ds/dm_j = -m_j / ||m||.
        // The norm is not differentiable at 0; use 0 there.
        if (dist > 0) {
            const double m = hm[j] * rm[j] - tm[j];
            const double dm = -m / dist;
            out.ent_mod[hb + j] += coef * dm * rm[j];
            out.rel_mod[rb + j] += coef * dm * hm[j];
            out.ent_mod[tb + j] += coef * (-dm);
        }
        // Phase part: s contributes -lambda * |sin(phi/2)| with
        // phi = hp + rp - tp, so ds/dhp = -lambda/2 * sign(sin) * cos(phi/2).
        const double half = (hp[j] + rp[j] - tp[j]) / 2.0;
        const double dphase = -p.lambda * 0.5 * sign(std::sin(half)) * std::cos(half);
        out.ent_phase[hb + j] += coef * dphase;
        out.rel_phase[rb + j] += coef * dphase;
        out.ent_phase[tb + j] += coef * (-dphase);
    }
}

struct InstanceCost {
    double cost;     // c_j
    double dc_dpos;  // dc_j / ds(pos)
    std::vector<double> dc_dneg;
};

InstanceCost instance_cost(const HakeParams& p, const TrainInstance& inst, double gamma,
                           bool want_grad) {
    if (inst.negatives.empty()) throw ValidationError("training instance has no negatives");
    InstanceCost out;
    const double s_pos = score_resolved(p, resolve(p, inst.positive));
    out.cost = neg_log_sigmoid(gamma + s_pos);
    out.dc_dpos = want_grad ? sigmoid(gamma + s_pos) - 1.0 : 0.0;
    const double invk = 1.0 / static_cast<double>(inst.negatives.size());
    for (const Triple& neg : inst.negatives) {
        const double s_neg = score_resolved(p, resolve(p, neg));
        out.cost += invk * neg_log_sigmoid(-(gamma + s_neg));
        if (want_grad) out.dc_dneg.push_back(invk * sigmoid(gamma + s_neg));
    }
    return out;
}

}  // namespace

int HakeParams::entity_index(const std::string& id) const {
    auto it = entity_slot.find(id);
    if (it == entity_slot.end()) throw NotFoundError("unknown entity in model: " + id);
    return it->second;
}

int HakeParams::relation_index(const std::string& name) const {
    auto it = relation_slot.find(name);
    if (it == relation_slot.end()) throw NotFoundError("unknown relation in model: " + name);
    return it->second;
}

double score_triple(const HakeParams& p, const std::string& h, const std::string& r,
                    const std::string& t) {
    return score_resolved(p, {p.entity_index(h), p.relation_index(r), p.entity_index(t)});
}

int TripleWeights::index_of(const std::string& h, const std::string& r,
                            const std::string& t) const {
    auto it = slot.find(triple_key(h, r, t));
    if (it == slot.end()) throw NotFoundError("triple has no weight: " + h + " " + r + " " + t);
    return it->second;
}

double TripleWeights::weight_of(const std::string& h, const std::string& r,
                                const std::string& t) const {
    return w[index_of(h, r, t)];
}

TripleWeights init_weights(const Graph& g) {
    if (g.triples().empty()) throw ValidationError("cannot build weights for an empty graph");
    TripleWeights tw;
    tw.triples = g.triples();
    tw.w0.reserve(tw.triples.size());
    double max_w0 = 0;
    for (const Triple& t : tw.triples) {
        const double v = 1.0 + std::log1p(static_cast<double>(t.article_count));
        tw.w0.push_back(v);
        max_w0 = std::max(max_w0, v);
    }
    tw.w.reserve(tw.triples.size());
    for (double v : tw.w0) tw.w.push_back(v / max_w0);
    for (std::size_t i = 0; i < tw.triples.size(); ++i) {
        const Triple& t = tw.triples[i];
        tw.slot.emplace(triple_key(t.head, t.relation, t.tail), static_cast<int>(i));
    }
    return tw;
}

HakeParams init_params(const Graph& g, const TrainConfig& cfg) {
    Rng rng(cfg.seed);
    return init_params(g, cfg, rng);
}

HakeParams init_params(const Graph& g, const TrainConfig& cfg, Rng& rng) {
    if (cfg.dim <= 0) throw ConfigError("embedding dimension must be positive");
    if (cfg.lambda < 0) throw ConfigError("lambda must be non-negative");
    HakeParams p;
    p.dim = cfg.dim;
    p.lambda = cfg.lambda;
    for (const Entity& e : g.entities()) p.entities.push_back(e.id);  // already sorted
    p.relations = g.relations();
    for (std::size_t i = 0; i < p.entities.size(); ++i)
        p.entity_slot.emplace(p.entities[i], static_cast<int>(i));
    for (std::size_t i = 0; i < p.relations.size(); ++i)
        p.relation_slot.emplace(p.relations[i], static_cast<int>(i));

    const std::size_t en = p.entities.size() * cfg.dim;
    const std::size_t rn = p.relations.size() * cfg.dim;
    p.ent_mod.resize(en);
    p.ent_phase.resize(en);
    p.rel_mod.resize(rn);
    p.rel_phase.resize(rn);
    constexpr double pi = std::numbers::pi;
    for (std::size_t i = 0; i < en; ++i) p.ent_mod[i] = rng.uniform(-0.5, 0.5);
    for (std::size_t i = 0; i < en; ++i) p.ent_phase[i] = rng.uniform(-pi, pi);
    for (std::size_t i = 0; i < rn; ++i) p.rel_mod[i] = rng.uniform(-0.5, 0.5);
    for (std::size_t i = 0; i < rn; ++i) p.rel_phase[i] = rng.uniform(-pi, pi);
    return p;
}

Triple sample_negative(const Graph& g, const Triple& positive, Rng& rng) {
    const bool head_first = rng.coin();
    for (int attempt = 0; attempt < 2; ++attempt) {
        const bool corrupt_head = attempt == 0 ? head_first : !head_first;
        const std::string& original = corrupt_head ? positive.head : positive.tail;
        const std::vector<std::string> pool = g.ids_of_kind(g.entity(original).kind);
        if (pool.size() < 2) continue;
        for (int trial = 0; trial < 100; ++trial) {
            const std::string& cand = pool[rng.index(pool.size())];
            if (cand == original) continue;
            Triple neg = positive;
            (corrupt_head ? neg.head : neg.tail) = cand;
            if (!g.has_triple(neg.head, neg.relation, neg.tail)) return neg;
        }
    }
    throw ExhaustionError("no negative found for " + positive.head + " " + positive.relation +
                          " " + positive.tail);
}

void HakeGradients::resize_like(const HakeParams& p, std::size_t n_weights) {
    ent_mod.assign(p.ent_mod.size(), 0.0);
    ent_phase.assign(p.ent_phase.size(), 0.0);
    rel_mod.assign(p.rel_mod.size(), 0.0);
    rel_phase.assign(p.rel_phase.size(), 0.0);
    weight.assign(n_weights, 0.0);
}

void HakeGradients::clear() {
    std::fill(ent_mod.begin(), ent_mod.end(), 0.0);
    std::fill(ent_phase.begin(), ent_phase.end(), 0.0);
    std::fill(rel_mod.begin(), rel_mod.end(), 0.0);
    std::fill(rel_phase.begin(), rel_phase.end(), 0.0);
    std::fill(weight.begin(), weight.end(), 0.0);
}

double loss_batch(const HakeParams& p, const TripleWeights& weights,
                  const std::vector<TrainInstance>& batch, double gamma, bool weighted) {
    if (batch.empty()) throw ValidationError("empty batch");
    double num = 0, den = 0;
    for (const TrainInstance& inst : batch) {
        const int wi = weights.index_of(inst.positive.head, inst.positive.relation,
                                        inst.positive.tail);
        const double w = weighted ? weights.w[wi] : 1.0;
        num += w * instance_cost(p, inst, gamma, false).cost;
        den += w;
    }
    if (den <= 0) throw DegenerateError("batch has zero total weight");
    return num / den;
}

double loss_batch_grad(const HakeParams& p, const TripleWeights& weights,
                       const std::vector<TrainInstance>& batch, double gamma, bool weighted,
                       HakeGradients& out) {
    if (batch.empty()) throw ValidationError("empty batch");
    out.clear();

    std::vector<InstanceCost> costs;
    std::vector<int> wslot;
    costs.reserve(batch.size());
    double num = 0, den = 0;
    for (const TrainInstance& inst : batch) {
        const int wi = weights.index_of(inst.positive.head, inst.positive.relation,
                                        inst.positive.tail);
        wslot.push_back(wi);
        costs.push_back(instance_cost(p, inst, gamma, true));
        const double w = weighted ? weights.w[wi] : 1.0;
        num += w * costs.back().cost;
        den += w;
    }
    if (den <= 0) throw DegenerateError("batch has zero total weight");
    const double loss = num / den;

    for (std::size_t j = 0; j < batch.size(); ++j) {
        const TrainInstance& inst = batch[j];
        const double w = weighted ? weights.w[wslot[j]] : 1.0;
        const double scale = w / den;
        accumulate_score_grad(p, resolve(p, inst.positive), scale * costs[j].dc_dpos, out);
        for (std::size_t k = 0; k < inst.negatives.size(); ++k)
            accumulate_score_grad(p, resolve(p, inst.negatives[k]), scale * costs[j].dc_dneg[k],
                                  out);
        // dL/dw_j = (c_j - L) / sum(w), by the quotient rule.
        if (weighted) out.weight[wslot[j]] += (costs[j].cost - loss) / den;
    }
    return loss;
}

TrainResult train(const Graph& g, const TrainConfig& cfg) {
    if (cfg.epochs < 0) throw ConfigError("epochs must be non-negative");
    if (cfg.batch_size <= 0) throw ConfigError("batch size must be positive");
    if (cfg.learning_rate <= 0) throw ConfigError("learning rate must be positive");
    if (cfg.negatives_per_positive <= 0) throw ConfigError("need at least one negative per positive");
    if (g.triples().empty()) throw ValidationError("cannot train on an empty graph");

    TrainResult result;
    result.config = cfg;
    Rng rng(cfg.seed);
    result.params = init_params(g, cfg, rng);
    result.weights = init_weights(g);
    if (!cfg.weighted) std::fill(result.weights.w.begin(), result.weights.w.end(), 1.0);

    HakeGradients grads;
    grads.resize_like(result.params, result.weights.w.size());

    std::vector<std::size_t> order(g.triples().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0;
        int batches = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            std::vector<TrainInstance> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                TrainInstance inst;
                inst.positive = g.triples()[order[i]];
                for (int k = 0; k < cfg.negatives_per_positive; ++k)
                    inst.negatives.push_back(sample_negative(g, inst.positive, rng));
                batch.push_back(std::move(inst));
            }
            loss_sum += loss_batch_grad(result.params, result.weights, batch, cfg.gamma,
                                        cfg.weighted, grads);
            ++batches;

            HakeParams& p = result.params;
            const double lr = cfg.learning_rate;
            for (std::size_t i = 0; i < p.ent_mod.size(); ++i) p.ent_mod[i] -= lr * grads.ent_mod[i];
            for (std::size_t i = 0; i < p.ent_phase.size(); ++i) p.ent_phase[i] -= lr * grads.ent_phase[i];
            for (std::size_t i = 0; i < p.rel_mod.size(); ++i) p.rel_mod[i] -= lr * grads.rel_mod[i];
            for (std::size_t i = 0; i < p.rel_phase.size(); ++i) p.rel_phase[i] -= lr * grads.rel_phase[i];
            if (cfg.weighted) {
                std::vector<double>& w = result.weights.w;
                for (std::size_t i = 0; i < w.size(); ++i)
                    w[i] = std::clamp(w[i] - lr * grads.weight[i], 0.0, 1.0);
            }
        }
        result.epoch_mean_loss.push_back(batches > 0 ? loss_sum / batches : 0.0);
    }
    return result;
}

std::vector<std::pair<std::string, double>> rank_drugs(const HakeParams& p, const Graph& g,
                                                       const std::string& disease,
                                                       const std::string& relation, int top_k) {
    if (g.entity(disease).kind != EntityKind::disease)
        throw ValidationError(disease + " is not a disease entity");
    std::vector<std::pair<std::string, double>> scored;
    for (const std::string& drug : g.ids_of_kind(EntityKind::drug))
        scored.emplace_back(drug, score_triple(p, drug, relation, disease));
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (top_k > 0 && static_cast<int>(scored.size()) > top_k) scored.resize(top_k);
    return scored;
}

void save_checkpoint(const TrainResult& r, const std::string& path) {
    nlohmann::json j;
    j["format"] = "kgrx-checkpoint";
    j["version"] = 1;
    j["dim"] = r.params.dim;
    j["lambda"] = r.params.lambda;
    j["gamma"] = r.config.gamma;
    j["weighted"] = r.config.weighted;
    j["seed"] = r.config.seed;
    j["epochs"] = r.config.epochs;
    j["epoch_mean_loss"] = r.epoch_mean_loss;

    nlohmann::json ents = nlohmann::json::object();
    for (std::size_t i = 0; i < r.params.entities.size(); ++i) {
        nlohmann::json e;
        e["mod"] = std::vector<double>(r.params.ent_mod_row(static_cast<int>(i)),
                                       r.params.ent_mod_row(static_cast<int>(i)) + r.params.dim);
        e["phase"] = std::vector<double>(r.params.ent_phase_row(static_cast<int>(i)),
                                         r.params.ent_phase_row(static_cast<int>(i)) + r.params.dim);
        ents[r.params.entities[i]] = std::move(e);
    }
    j["entities"] = std::move(ents);

    nlohmann::json rels = nlohmann::json::object();
    for (std::size_t i = 0; i < r.params.relations.size(); ++i) {
        nlohmann::json e;
        e["mod"] = std::vector<double>(r.params.rel_mod_row(static_cast<int>(i)),
                                       r.params.rel_mod_row(static_cast<int>(i)) + r.params.dim);
        e["phase"] = std::vector<double>(r.params.rel_phase_row(static_cast<int>(i)),
                                         r.params.rel_phase_row(static_cast<int>(i)) + r.params.dim);
        rels[r.params.relations[i]] = std::move(e);
    }
    j["relations"] = std::move(rels);

    nlohmann::json triples = nlohmann::json::array();
    for (std::size_t i = 0; i < r.weights.triples.size(); ++i) {
        const Triple& t = r.weights.triples[i];
        triples.push_back({{"head", t.head},
                           {"relation", t.relation},
                           {"tail", t.tail},
                           {"article_count", t.article_count},
                           {"w0", r.weights.w0[i]},
                           {"w", r.weights.w[i]}});
    }
    j["triples"] = std::move(triples);

    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

TrainResult load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "kgrx-checkpoint")
            throw ValidationError(path + ": not a model checkpoint");
        if (j.at("version").get<int>() != 1)
            throw ValidationError(path + ": unsupported checkpoint version");

        TrainResult r;
        r.params.dim = j.at("dim").get<int>();
        r.params.lambda = j.at("lambda").get<double>();
        r.config.dim = r.params.dim;
        r.config.lambda = r.params.lambda;
        r.config.gamma = j.at("gamma").get<double>();
        r.config.weighted = j.at("weighted").get<bool>();
        r.config.seed = j.at("seed").get<std::uint64_t>();
        r.config.epochs = j.at("epochs").get<int>();
        r.epoch_mean_loss = j.at("epoch_mean_loss").get<std::vector<double>>();

        for (const auto& [id, e] : j.at("entities").items()) {
            r.params.entity_slot.emplace(id, static_cast<int>(r.params.entities.size()));
            r.params.entities.push_back(id);
            const auto mod = e.at("mod").get<std::vector<double>>();
            const auto phase = e.at("phase").get<std::vector<double>>();
            if (static_cast<int>(mod.size()) != r.params.dim ||
                static_cast<int>(phase.size()) != r.params.dim)
                throw ValidationError(path + ": embedding size mismatch for " + id);
            r.params.ent_mod.insert(r.params.ent_mod.end(), mod.begin(), mod.end());
            r.params.ent_phase.insert(r.params.ent_phase.end(), phase.begin(), phase.end());
        }
        for (const auto& [name, e] : j.at("relations").items()) {
            r.params.relation_slot.emplace(name, static_cast<int>(r.params.relations.size()));
            r.params.relations.push_back(name);
            const auto mod = e.at("mod").get<std::vector<double>>();
            const auto phase = e.at("phase").get<std::vector<double>>();
            if (static_cast<int>(mod.size()) != r.params.dim ||
                static_cast<int>(phase.size()) != r.params.dim)
                throw ValidationError(path + ": embedding size mismatch for " + name);
            r.params.rel_mod.insert(r.params.rel_mod.end(), mod.begin(), mod.end());
            r.params.rel_phase.insert(r.params.rel_phase.end(), phase.begin(), phase.end());
        }
        for (const auto& t : j.at("triples")) {
            Triple tr{t.at("head").get<std::string>(), t.at("relation").get<std::string>(),
                      t.at("tail").get<std::string>(), t.at("article_count").get<long long>()};
            r.weights.slot.emplace(triple_key(tr.head, tr.relation, tr.tail),
                                   static_cast<int>(r.weights.triples.size()));
            r.weights.triples.push_back(std::move(tr));
            r.weights.w0.push_back(t.at("w0").get<double>());
            r.weights.w.push_back(t.at("w").get<double>());
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace kgrx
