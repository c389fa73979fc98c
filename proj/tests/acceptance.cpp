// Acceptance suite: one PASS/FAIL line per criterion, exit code = number of
// failed criteria. Derived values are checked against deliberately naive
// oracles written from the documented behavior, never against the library's
// own arithmetic. The two end-to-end criteria drive the installed CLI binary
// on the bundled rehearsal world under tests/data/rehearsal.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#if __has_include(<sys/wait.h>)
#include <sys/wait.h>
#endif

#include <json.hpp>

#include "kgrx/errors.hpp"
#include "kgrx/evidence.hpp"
#include "kgrx/graph.hpp"
#include "kgrx/hake.hpp"
#include "kgrx/paths.hpp"
#include "kgrx/rng.hpp"
#include "kgrx/signature.hpp"
#include "kgrx/stats.hpp"
#include "kgrx/survival.hpp"

namespace fs = std::filesystem;
using namespace kgrx;
using nlohmann::json;

namespace {

// ------------------------------------------------------------------ plumbing

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename T>
std::string str(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure(what);
}

void require_close(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol))
        throw Failure(what + ": got " + str(got) + ", want " + str(want) + " (tol " + str(tol) +
                      ")");
}

std::string data_path(const std::string& name) {
    return std::string(KGRX_TEST_DATA_DIR) + "/" + name;
}

fs::path scratch_root() {
    static const fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "kgrx_acceptance";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(static_cast<bool>(in), "cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& body) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    require(static_cast<bool>(out), "cannot write " + p.string());
    out << body;
}

std::vector<std::string> nonempty_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> cols;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            cols.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cols.push_back(cur);
    return cols;
}

// ------------------------------------------------------- criterion 1: grads

// Relative agreement between an analytic derivative and its central
// finite-difference estimate.
bool grad_matches(double analytic, double fd) {
    const double scale = std::max({1.0, std::fabs(analytic), std::fabs(fd)});
    return std::fabs(analytic - fd) <= 1e-4 * scale;
}

std::vector<TrainInstance> sample_batch(const Graph& g, Rng& rng, int n, int negatives) {
    std::vector<TrainInstance> batch;
    const auto& triples = g.triples();
    for (int i = 0; i < n; ++i) {
        TrainInstance inst;
        inst.positive = triples[rng.index(triples.size())];
        for (int k = 0; k < negatives; ++k)
            inst.negatives.push_back(sample_negative(g, inst.positive, rng));
        batch.push_back(std::move(inst));
    }
    return batch;
}

std::string criterion_gradients() {
    const Graph g = Graph::load(data_path("toy_graph.tsv"));
    Rng rng(9001);
    long checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        TrainConfig cfg;
        cfg.dim = 2 + static_cast<int>(rng.below(7));  // 2..8
        cfg.lambda = rng.uniform(0.2, 1.0);
        HakeParams p = init_params(g, cfg, rng);
        TripleWeights tw = init_weights(g);
        const bool weighted = trial % 2 == 0;
        const double gamma = rng.uniform(-2.0, 2.0);
        const std::vector<TrainInstance> batch =
            sample_batch(g, rng, 1 + static_cast<int>(rng.below(4)),
                         1 + static_cast<int>(rng.below(4)));

        HakeGradients grad;
        grad.resize_like(p, tw.w.size());
        loss_batch_grad(p, tw, batch, gamma, weighted, grad);

        const double h = 1e-6;
        auto fd_sweep = [&](std::vector<double>& storage, const std::vector<double>& analytic,
                            const char* bank) {
            for (std::size_t i = 0; i < storage.size(); ++i) {
                const double keep = storage[i];
                storage[i] = keep + h;
                const double up = loss_batch(p, tw, batch, gamma, weighted);
                storage[i] = keep - h;
                const double down = loss_batch(p, tw, batch, gamma, weighted);
                storage[i] = keep;
                const double fd = (up - down) / (2.0 * h);
                if (!grad_matches(analytic[i], fd))
                    throw Failure(std::string(bank) + "[" + str(i) + "] trial " + str(trial) +
                                  ": analytic " + str(analytic[i]) + " vs fd " + str(fd));
                ++checked;
            }
        };
        fd_sweep(p.ent_mod, grad.ent_mod, "ent_mod");
        fd_sweep(p.ent_phase, grad.ent_phase, "ent_phase");
        fd_sweep(p.rel_mod, grad.rel_mod, "rel_mod");
        fd_sweep(p.rel_phase, grad.rel_phase, "rel_phase");
        if (weighted) fd_sweep(tw.w, grad.weight, "triple_weight");
    }
    return "50 instances, " + str(checked) + " coordinates within 1e-4 of central differences";
}

// -------------------------------------------------- criterion 2: toy training

std::string criterion_training_progress() {
    const Graph full = Graph::load(data_path("toy_graph.tsv"));
    const std::vector<std::pair<std::string, std::string>> held_out = {
        {"drugA2", "diseaseA1"},
        {"drugA4", "diseaseA2"},
        {"drugB2", "diseaseB1"},
        {"drugB4", "diseaseB2"},
    };
    auto is_held_out = [&](const Triple& t) {
        if (t.relation != "indication") return false;
        for (const auto& [drug, disease] : held_out)
            if (t.head == drug && t.tail == disease) return true;
        return false;
    };

    // Rebuild the training graph through the normal loader so entity kinds
    // survive; every entity still appears in at least one remaining triple.
    std::ostringstream tsv;
    std::size_t removed = 0;
    for (const Triple& t : full.triples()) {
        if (is_held_out(t)) {
            ++removed;
            continue;
        }
        tsv << t.head << '\t' << kind_name(full.entity(t.head).kind) << '\t' << t.relation << '\t'
            << t.tail << '\t' << kind_name(full.entity(t.tail).kind) << '\t' << t.article_count
            << '\n';
    }
    require(removed == 4, "expected to hold out 4 indication triples, removed " + str(removed));
    const fs::path train_tsv = scratch_root() / "toy_train.tsv";
    spit(train_tsv, tsv.str());
    const Graph g = Graph::load(train_tsv.string());

    TrainConfig cfg;
    cfg.dim = 24;
    cfg.epochs = 400;
    cfg.learning_rate = 1.0;
    cfg.negatives_per_positive = 32;
    cfg.gamma = 6.0;
    cfg.seed = 4;
    const TrainResult result = train(g, cfg);

    require(result.epoch_mean_loss.size() == 400, "epoch loss history incomplete");
    for (int e = 0; e + 1 < 10; ++e)
        require(result.epoch_mean_loss[e + 1] < result.epoch_mean_loss[e],
                "mean epoch loss not monotone at epoch " + str(e + 1) + ": " +
                    str(result.epoch_mean_loss[e]) + " -> " + str(result.epoch_mean_loss[e + 1]));

    // Filtered rank of each held-out positive among drugs that kept no
    // training indication for that disease (worst rank under ties).
    const std::vector<std::string> drugs = g.ids_of_kind(EntityKind::drug);
    int n_candidates = -1;
    int rank_sum = 0;
    for (const auto& [held_drug, disease] : held_out) {
        std::vector<std::string> candidates;
        for (const std::string& drug : drugs)
            if (!g.has_triple(drug, "indication", disease)) candidates.push_back(drug);
        if (n_candidates < 0) n_candidates = static_cast<int>(candidates.size());
        require(static_cast<int>(candidates.size()) == n_candidates,
                "candidate pool size changed across diseases");
        const double held_score = score_triple(result.params, held_drug, "indication", disease);
        int rank = 1;
        for (const std::string& drug : candidates) {
            if (drug == held_drug) continue;
            const double s = score_triple(result.params, drug, "indication", disease);
            if (s >= held_score) ++rank;
        }
        rank_sum += rank;
    }
    require(n_candidates == 7, "expected 7 filtered candidates per disease, saw " +
                                   str(n_candidates));

    // Exact permutation null: the sum of four independent uniform{1..7} ranks.
    long total = 0, at_most = 0;
    for (int a = 1; a <= 7; ++a)
        for (int b = 1; b <= 7; ++b)
            for (int c = 1; c <= 7; ++c)
                for (int d = 1; d <= 7; ++d) {
                    ++total;
                    if (a + b + c + d <= rank_sum) ++at_most;
                }
    const double p = static_cast<double>(at_most) / static_cast<double>(total);
    require(p < 0.01, "held-out rank sum " + str(rank_sum) + " gives permutation p = " + str(p));
    return "10-epoch loss decrease monotone; held-out rank sum " + str(rank_sum) +
           " of 4 (permutation p = " + str(p) + ")";
}

// ------------------------------------------------- criterion 3: equation anchors

std::string criterion_equation_anchors() {
    // Hand-evaluated two-dimensional score: moduli give an L2 term of exactly
    // 1, phases give |sin(pi/2)| + |sin(0)| = 1, lambda = 0.5.
    HakeParams p;
    p.dim = 2;
    p.lambda = 0.5;
    p.entities = {"h", "t"};
    p.relations = {"r"};
    p.entity_slot = {{"h", 0}, {"t", 1}};
    p.relation_slot = {{"r", 0}};
    p.ent_mod = {2.0, 1.0, /*t*/ 1.0, 2.0};
    p.ent_phase = {std::numbers::pi / 2.0, 0.0, /*t*/ 0.0, std::numbers::pi};
    p.rel_mod = {0.5, 3.0};
    p.rel_phase = {std::numbers::pi / 2.0, 0.0};
    // h_mod*r_mod - t_mod = (0, 1); angles = (pi, -pi).
    const double want_score = -1.0 - 0.5 * (std::fabs(std::sin(std::numbers::pi / 2.0)) +
                                            std::fabs(std::sin(-std::numbers::pi / 2.0)));
    require_close(score_triple(p, "h", "r", "t"), want_score, 1e-9, "score_triple hand case");

    // Literature prior w0 = 1 + ln(1 + article_count), normalized by the max.
    const std::vector<Entity> ents = {{"a", "a", EntityKind::gene},
                                      {"b", "b", EntityKind::gene}};
    const std::vector<Triple> trips = {{"a", "r", "b", 0}, {"b", "r", "a", 4}};
    const TripleWeights tw = init_weights(Graph(ents, trips));
    require(tw.w0.size() == 2, "expected two triple weights");
    for (std::size_t i = 0; i < tw.triples.size(); ++i) {
        const double count = static_cast<double>(tw.triples[i].article_count);
        require_close(tw.w0[i], 1.0 + std::log(1.0 + count), 1e-9, "w0 prior");
        require_close(tw.w[i], tw.w0[i] / (1.0 + std::log(5.0)), 1e-9, "normalized weight");
    }

    const PathScoringConfig path_cfg;  // mu = 350, sigma = 100
    require_close(normalize_edge_score(-350.0, path_cfg), 0.5, 1e-9, "edge value at d = mu");
    require_close(geometric_mean({0.25, 1.0}), 0.5, 1e-9, "two-edge geometric mean");

    const SignatureConfig sig_cfg;
    require_close(ic50_weight(4.0, sig_cfg), 0.25, 1e-9, "ic50 weight at 4 uM");
    require_close(dose_weight(std::exp(2.0) - 1.0, 0.5), std::exp(-1.0), 1e-9,
                  "dose weight at e^2 - 1 uM");
    return "score_triple, w0, edge value, geometric mean, ic50 and dose weights all within 1e-9";
}

// ------------------------------------------------- criterion 4: path oracle

struct OraclePath {
    std::vector<std::string> nodes;
    std::vector<std::string> relations;
    std::vector<bool> forward;

    bool operator<(const OraclePath& o) const {
        if (nodes != o.nodes) return nodes < o.nodes;
        if (relations != o.relations) return relations < o.relations;
        for (std::size_t i = 0; i < forward.size(); ++i)
            if (forward[i] != o.forward[i]) return forward[i];
        return false;
    }
    bool operator==(const OraclePath& o) const {
        return nodes == o.nodes && relations == o.relations && forward == o.forward;
    }
};

void oracle_extend(const Graph& g, const std::string& dst, const std::set<std::string>& excluded,
                   OraclePath& cur, std::set<std::string>& visited,
                   std::vector<OraclePath>& out) {
    const std::string here = cur.nodes.back();  // copy: push_back may reallocate
    if (here == dst) {
        out.push_back(cur);
        return;
    }
    for (const Triple& t : g.triples()) {
        if (excluded.count(t.relation)) continue;
        for (const bool fwd : {true, false}) {
            const std::string& from = fwd ? t.head : t.tail;
            const std::string& to = fwd ? t.tail : t.head;
            if (from != here || visited.count(to)) continue;
            cur.nodes.push_back(to);
            cur.relations.push_back(t.relation);
            cur.forward.push_back(fwd);
            visited.insert(to);
            oracle_extend(g, dst, excluded, cur, visited, out);
            visited.erase(to);
            cur.forward.pop_back();
            cur.relations.pop_back();
            cur.nodes.pop_back();
        }
    }
}

std::vector<OraclePath> oracle_minimal_paths(const Graph& g, const std::string& src,
                                             const std::string& dst,
                                             const std::set<std::string>& excluded) {
    std::vector<OraclePath> all;
    OraclePath cur;
    cur.nodes.push_back(src);
    std::set<std::string> visited = {src};
    oracle_extend(g, dst, excluded, cur, visited, all);
    if (all.empty()) return {};
    std::size_t best = all[0].nodes.size();
    for (const OraclePath& p : all) best = std::min(best, p.nodes.size());
    std::vector<OraclePath> minimal;
    for (const OraclePath& p : all)
        if (p.nodes.size() == best) minimal.push_back(p);
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

std::string criterion_path_oracle() {
    Rng rng(404);
    long compared = 0;
    int graphs_with_exclusions = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int n_nodes = 3 + static_cast<int>(rng.below(6));  // 3..8
        const int n_edges = 8 + static_cast<int>(rng.below(14));
        const int n_relations = 1 + static_cast<int>(rng.below(3));
        const bool with_excluded = trial % 3 == 0;

        std::vector<Entity> entities;
        for (int i = 0; i < n_nodes; ++i) {
            const std::string id = "n" + std::to_string(i);
            entities.push_back({id, id, EntityKind::gene});
        }
        std::set<std::string> seen;
        std::vector<Triple> triples;
        for (int i = 0; i < n_edges; ++i) {
            Triple t;
            t.head = "n" + std::to_string(rng.below(static_cast<std::uint64_t>(n_nodes)));
            t.tail = "n" + std::to_string(rng.below(static_cast<std::uint64_t>(n_nodes)));
            if (t.head == t.tail) continue;
            std::uint64_t r = rng.below(static_cast<std::uint64_t>(n_relations));
            t.relation = (with_excluded && r == 0) ? "synergistic interaction"
                                                   : "r" + std::to_string(r);
            if (!seen.insert(triple_key(t.head, t.relation, t.tail)).second) continue;
            triples.push_back(std::move(t));
        }
        if (triples.empty()) triples.push_back({"n0", "r0", "n1", 0});
        const Graph g(entities, triples);
        if (with_excluded) ++graphs_with_exclusions;

        PathScoringConfig cfg;  // default exclusion: synergistic interaction
        const int k = 1 + static_cast<int>(rng.below(6));
        const std::vector<Path> got = k_shortest_paths(g, "n0", "n1", k, cfg);
        std::vector<OraclePath> want =
            oracle_minimal_paths(g, "n0", "n1", cfg.excluded_relations);
        if (want.size() > static_cast<std::size_t>(k)) want.resize(k);

        require(got.size() == want.size(),
                "trial " + str(trial) + ": " + str(got.size()) + " paths, oracle has " +
                    str(want.size()));
        for (std::size_t i = 0; i < got.size(); ++i) {
            OraclePath o;
            o.nodes = got[i].nodes;
            for (const PathEdge& e : got[i].edges) {
                o.relations.push_back(e.triple.relation);
                o.forward.push_back(e.forward);
            }
            require(o == want[i], "trial " + str(trial) + ": path " + str(i) + " differs");
            ++compared;
        }
        for (const Path& path : got)
            for (const PathEdge& e : path.edges)
                require(e.triple.relation != "synergistic interaction",
                        "excluded relation appeared on a path");
    }
    return "30 random graphs, " + str(compared) + " paths equal to exhaustive enumeration (" +
           str(graphs_with_exclusions) + " graphs carried the excluded relation)";
}

// --------------------------------------------- criterion 5: signature oracle

// Reference signature builder, written against the documented behavior.
DrugSignature reference_signature(const std::vector<PerturbationRecord>& records,
                                  const SignatureConfig& cfg) {
    std::map<std::string, std::vector<PerturbationRecord>> by_gene;
    for (const PerturbationRecord& r : records) by_gene[r.gene].push_back(r);

    struct Row {
        std::string gene;
        double ic50 = 0, dose = 0;
    };
    std::vector<Row> rows;
    double max_ic50 = 0, max_dose = 0;
    for (const auto& [gene, recs] : by_gene) {
        double ic50_num = 0, dose_num = 0;
        for (const PerturbationRecord& r : recs) {
            const double sign = r.direction == Direction::up ? 1.0 : -1.0;
            double w_ic50 = cfg.default_ic50_weight;
            if (r.ic50_um) w_ic50 = std::min(1.0 / *r.ic50_um, 1.0);
            const double um = convert_dose_to_micromolar(r.dose_value, r.dose_unit);
            ic50_num += sign * w_ic50;
            dose_num += sign * std::pow(1.0 + um, -cfg.k);
        }
        Row row;
        row.gene = gene;
        row.ic50 = ic50_num / static_cast<double>(recs.size());
        row.dose = dose_num / static_cast<double>(recs.size());
        rows.push_back(row);
        max_ic50 = std::max(max_ic50, std::fabs(row.ic50));
        max_dose = std::max(max_dose, std::fabs(row.dose));
    }

    DrugSignature sig;
    sig.drug = records.front().drug;
    for (const Row& row : rows) {
        const double ic50 = max_ic50 > 0 ? row.ic50 / max_ic50 : row.ic50;
        const double dose = max_dose > 0 ? row.dose / max_dose : row.dose;
        const double final_s = cfg.alpha * dose + (1.0 - cfg.alpha) * ic50;
        if (final_s > 0)
            sig.up.push_back({row.gene, final_s});
        else if (final_s < 0)
            sig.down.push_back({row.gene, final_s});
    }
    auto by_magnitude = [](const ScoredGene& a, const ScoredGene& b) {
        if (std::fabs(a.score) != std::fabs(b.score))
            return std::fabs(a.score) > std::fabs(b.score);
        return a.gene < b.gene;
    };
    std::sort(sig.up.begin(), sig.up.end(), by_magnitude);
    std::sort(sig.down.begin(), sig.down.end(), by_magnitude);
    const std::size_t cap = static_cast<std::size_t>(cfg.top_n);
    if (sig.up.size() > cap) sig.up.resize(cap);
    if (sig.down.size() > cap) sig.down.resize(cap);
    return sig;
}

std::string criterion_signature_oracle() {
    Rng rng(505);
    const std::vector<std::string> genes = {"g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8"};
    for (int trial = 0; trial < 100; ++trial) {
        SignatureConfig cfg;
        cfg.top_n = 1 + static_cast<int>(rng.below(6));
        const int n = 1 + static_cast<int>(rng.below(30));
        std::vector<PerturbationRecord> records;
        for (int i = 0; i < n; ++i) {
            PerturbationRecord r;
            r.drug = "drugX";
            r.signature_id = "sig" + std::to_string(rng.below(3));
            r.gene = genes[rng.index(genes.size())];
            r.direction = rng.coin() ? Direction::up : Direction::down;
            r.dose_value = rng.uniform(0.0, 50.0);
            r.dose_unit = static_cast<DoseUnit>(rng.below(3));
            if (rng.coin()) r.ic50_um = rng.uniform(0.1, 20.0);
            records.push_back(std::move(r));
        }
        const DrugSignature got = build_signature(records, cfg);
        const DrugSignature want = reference_signature(records, cfg);
        require(got.up.size() == want.up.size() && got.down.size() == want.down.size(),
                "trial " + str(trial) + ": side sizes differ");
        for (std::size_t i = 0; i < got.up.size(); ++i)
            require(got.up[i].gene == want.up[i].gene && got.up[i].score == want.up[i].score,
                    "trial " + str(trial) + ": up[" + str(i) + "] differs");
        for (std::size_t i = 0; i < got.down.size(); ++i)
            require(got.down[i].gene == want.down[i].gene &&
                        got.down[i].score == want.down[i].score,
                    "trial " + str(trial) + ": down[" + str(i) + "] differs");
    }
    return "100 random record sets rebuilt exactly by the reference implementation";
}

// ------------------------------------------------ criterion 6: ssGSEA oracle

std::vector<double> oracle_average_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double oracle_es_column(const std::vector<double>& column, const std::vector<char>& member,
                        double tau) {
    const std::size_t n = column.size();
    std::size_t members = 0;
    for (char m : member) members += m ? 1 : 0;
    const std::vector<double> ranks = oracle_average_ranks(column);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ranks[a] != ranks[b]) return ranks[a] > ranks[b];
        return a < b;
    });
    double weight_total = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (member[i]) weight_total += std::pow(ranks[i], tau);
    double cum = 0, sum = 0;
    for (std::size_t i : order) {
        if (member[i])
            cum += std::pow(ranks[i], tau) / weight_total;
        else
            cum -= 1.0 / static_cast<double>(n - members);
        sum += cum;
    }
    return sum;
}

std::string criterion_ssgsea_oracle() {
    Rng rng(606);
    long cells = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n_genes = 5 + rng.below(46);   // 5..50
        const std::size_t n_samples = 2 + rng.below(9);  // 2..10
        ExpressionMatrix m;
        for (std::size_t gi = 0; gi < n_genes; ++gi) m.genes.push_back("g" + str(gi));
        for (std::size_t si = 0; si < n_samples; ++si) m.samples.push_back("s" + str(si));
        m.values.resize(n_genes * n_samples);
        for (double& v : m.values)
            v = rng.coin() ? static_cast<double>(rng.below(6))  // heavy ties
                           : rng.uniform(-5.0, 5.0);

        const std::size_t n_members = 1 + rng.below(n_genes - 1);
        std::vector<char> member(n_genes, 0);
        std::set<std::string> gene_set;
        while (gene_set.size() < n_members) {
            const std::size_t pick = rng.below(n_genes);
            member[pick] = 1;
            gene_set.insert(m.genes[pick]);
        }

        const double tau = 0.25;
        const std::vector<double> got = ssgsea(m, gene_set, tau);
        require(got.size() == n_samples, "sample count mismatch");
        for (std::size_t si = 0; si < n_samples; ++si) {
            std::vector<double> column(n_genes);
            for (std::size_t gi = 0; gi < n_genes; ++gi) column[gi] = m.at(gi, si);
            require_close(got[si], oracle_es_column(column, member, tau), 1e-9,
                          "trial " + str(trial) + " sample " + str(si));
            ++cells;
        }

        // Strictly monotone transforms leave the rank structure, and so the
        // score, exactly unchanged.
        ExpressionMatrix affine = m, cubed = m;
        for (double& v : affine.values) v = 3.0 * v + 7.0;
        for (double& v : cubed.values) v = v * v * v;
        const std::vector<double> got_affine = ssgsea(affine, gene_set, tau);
        const std::vector<double> got_cubed = ssgsea(cubed, gene_set, tau);
        for (std::size_t si = 0; si < n_samples; ++si) {
            require(got_affine[si] == got[si], "affine transform changed the score");
            require(got_cubed[si] == got[si], "cubic transform changed the score");
        }
    }
    return "20 fixtures match the running-sum oracle to 1e-9; monotone transforms exact";
}

// --------------------------------------------------- criterion 7: Cox oracle

// Breslow log partial likelihood for two groups (x = 1 for high).
double breslow_loglik(const std::vector<std::tuple<double, bool, int>>& subjects, double beta) {
    std::vector<std::size_t> order(subjects.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::get<0>(subjects[a]) < std::get<0>(subjects[b]);
    });
    const double eb = std::exp(beta);
    double ll = 0;
    double n1 = 0, n0 = 0;
    std::size_t i = order.size();
    while (i > 0) {
        const double t = std::get<0>(subjects[order[i - 1]]);
        double d = 0, d1 = 0;
        while (i > 0 && std::get<0>(subjects[order[i - 1]]) == t) {
            const auto& [time, event, x] = subjects[order[i - 1]];
            (x == 1 ? n1 : n0) += 1;
            if (event) {
                d += 1;
                if (x == 1) d1 += 1;
            }
            --i;
        }
        if (d > 0) ll += d1 * beta - d * std::log(n0 + n1 * eb);
    }
    return ll;
}

std::string criterion_cox_oracle() {
    Rng rng(707);
    int usable = 0;
    int attempts = 0;
    double worst_gap = 0;
    while (usable < 20) {
        require(++attempts < 200, "could not build 20 converged fixtures");
        StratifiedCohort cohort;
        std::vector<SurvivalRecord> surv;
        std::vector<std::tuple<double, bool, int>> subjects;
        const int n_high = 8 + static_cast<int>(rng.below(7));
        const int n_low = 8 + static_cast<int>(rng.below(7));
        int events = 0;
        for (int i = 0; i < n_high + n_low; ++i) {
            const bool high = i < n_high;
            const std::string id = (high ? "h" : "l") + str(i);
            const double time = std::floor(rng.uniform(1.0, 60.0));
            const bool event = rng.uniform01() < 0.8;
            events += event ? 1 : 0;
            (high ? cohort.high : cohort.low).push_back(id);
            surv.push_back({id, time, event, std::nullopt});
            subjects.emplace_back(time, event, high ? 1 : 0);
        }
        if (events < 2) continue;

        CoxFit fit;
        try {
            fit = cox_univariable(cohort, surv);
        } catch (const Error&) {
            continue;
        }
        if (!fit.converged || std::fabs(fit.beta) > 4.5) continue;
        ++usable;

        // Grid-search maximization, step 1e-4 over [-5, 5].
        double best_beta = -5.0, best_ll = breslow_loglik(subjects, -5.0);
        for (long k = 1; k <= 100000; ++k) {
            const double beta = -5.0 + 1e-4 * static_cast<double>(k);
            const double ll = breslow_loglik(subjects, beta);
            if (ll > best_ll) {
                best_ll = ll;
                best_beta = beta;
            }
        }
        const double gap = std::fabs(std::exp(best_beta) - fit.hazard_ratio);
        worst_gap = std::max(worst_gap, gap);
        require(gap < 1e-3, "fixture " + str(usable) + ": grid HR " + str(std::exp(best_beta)) +
                                " vs Newton HR " + str(fit.hazard_ratio));

        // Swapping the group labels must invert the hazard ratio.
        StratifiedCohort swapped;
        swapped.high = cohort.low;
        swapped.low = cohort.high;
        const CoxFit inv = cox_univariable(swapped, surv);
        require(std::fabs(fit.hazard_ratio * inv.hazard_ratio - 1.0) <= 1e-10,
                "label swap did not invert the hazard ratio");
    }

    // Identical groups carry no information: the hazard ratio is exactly 1.
    StratifiedCohort same;
    std::vector<SurvivalRecord> surv;
    for (int i = 0; i < 8; ++i) {
        same.high.push_back("h" + str(i));
        same.low.push_back("l" + str(i));
        const double time = 5.0 + 3.0 * i;
        const bool event = i % 4 != 3;
        surv.push_back({"h" + str(i), time, event, std::nullopt});
        surv.push_back({"l" + str(i), time, event, std::nullopt});
    }
    const CoxFit fit = cox_univariable(same, surv);
    require(fit.hazard_ratio == 1.0, "identical groups gave HR " + str(fit.hazard_ratio));

    return "20 fixtures: |HR - grid argmax| <= " + str(worst_gap) +
           "; label swap inverts to 1e-10; identical groups give HR = 1";
}

// ------------------------------------------- criterion 8: rule scorer bands

std::string criterion_rule_scorer() {
    const int dd_points[3] = {0, 40, 20};
    const int gene_points[3] = {0, 30, 15};
    const int pw_points[3] = {0, 20, 10};
    int combos = 0;
    for (int dd = 0; dd < 3; ++dd)
        for (int gene = 0; gene < 3; ++gene)
            for (int pw = 0; pw < 3; ++pw)
                for (int fda = 0; fda < 2; ++fda) {
                    ++combos;
                    EvidenceFlags f;
                    f.disease_drug_clinical = dd == 1;
                    f.disease_drug_preclinical = dd == 2;
                    f.gene_strong = gene == 1;
                    f.gene_limited = gene == 2;
                    f.pathway_significant = pw == 1;
                    f.pathway_nominal = pw == 2;
                    f.fda_approved_any = fda == 1;
                    const int expected = std::min(
                        dd_points[dd] + gene_points[gene] + pw_points[pw] + fda * 10, 100);
                    const RuleScore rs = rule_score(f);
                    require(rs.score == expected,
                            "combo " + str(combos) + ": score " + str(rs.score) + " want " +
                                str(expected));
                    require(static_cast<int>(rs.rationale.size()) ==
                                (dd != 0) + (gene != 0) + (pw != 0) + (fda != 0),
                            "combo " + str(combos) + ": rationale count");
                }
    require(combos == 54, "expected 54 consistent combinations");
    EvidenceFlags top;
    top.disease_drug_clinical = top.gene_strong = top.pathway_significant =
        top.fda_approved_any = true;
    require(rule_score(top).score == 100, "all-strong combination must hit the cap");

    // Trial banding over the ordered rules, including both patience
    // boundaries (phase 1-2: two years, phase 3+/unknown: five years).
    const int year = 2026;
    auto trial = [](std::string id, std::string phase, std::string status, int start,
                    int completion, bool has_results, std::optional<bool> positive) {
        TrialMeta t;
        t.trial_id = std::move(id);
        t.disease = "D";
        t.drug = "RX";
        t.phase = std::move(phase);
        t.status = std::move(status);
        t.start_year = start;
        t.completion_year = completion;
        t.has_results = has_results;
        t.positive = positive;
        return t;
    };
    const std::vector<std::pair<TrialMeta, TrialBand>> table = {
        {trial("t01", "3", "completed", 2015, 2018, true, false), TrialBand::negative_bad},
        {trial("t02", "1", "ongoing", 2025, 0, true, true), TrialBand::positive_good},
        {trial("t03", "2", "Completed", 2020, 2024, false, std::nullopt),
         TrialBand::completed_no_result},
        {trial("t04", "2", "completed", 2025, 2026, false, std::nullopt),
         TrialBand::ongoing_in_reasonable_term},
        {trial("t05", "1", "ongoing", 2024, 0, false, std::nullopt),
         TrialBand::ongoing_long_term_incomplete},
        {trial("t06", "2", "ongoing", 2025, 0, false, std::nullopt),
         TrialBand::ongoing_in_reasonable_term},
        {trial("t07", "3", "ongoing", 2021, 0, false, std::nullopt),
         TrialBand::ongoing_long_term_incomplete},
        {trial("t08", "Phase III", "ongoing", 2022, 0, false, std::nullopt),
         TrialBand::ongoing_in_reasonable_term},
        {trial("t09", "NA", "ongoing", 2021, 0, false, std::nullopt),
         TrialBand::ongoing_long_term_incomplete},
        {trial("t10", "NA", "ongoing", 2022, 0, false, std::nullopt),
         TrialBand::ongoing_in_reasonable_term},
        {trial("t11", "2", "completed", 2015, 2016, true, std::nullopt),
         TrialBand::ongoing_in_reasonable_term},
        {trial("t12", "1", "ongoing", 0, 0, false, std::nullopt),
         TrialBand::ongoing_in_reasonable_term},
    };
    const std::map<TrialBand, std::pair<int, int>> ranges = {
        {TrialBand::negative_bad, {0, 19}},
        {TrialBand::completed_no_result, {20, 34}},
        {TrialBand::ongoing_long_term_incomplete, {35, 49}},
        {TrialBand::ongoing_in_reasonable_term, {50, 79}},
        {TrialBand::positive_good, {80, 100}},
    };
    for (const auto& [meta, band] : table) {
        const TrialBandResult r = trial_result_status(meta, year);
        require(r.band == band, meta.trial_id + ": wrong band");
        const auto [lo, hi] = ranges.at(band);
        require(r.score_lo == lo && r.score_hi == hi, meta.trial_id + ": wrong score range");
        require(!r.rationale.empty(), meta.trial_id + ": empty rationale");
    }
    bool threw = false;
    try {
        trial_result_status(table[0].first, 0);
    } catch (const ConfigError&) {
        threw = true;
    }
    require(threw, "current_year = 0 must be rejected");
    return "54 rubric combinations exact with cap 100; 12-case trial table reproduced";
}

// ----------------------------------------------------- criterion 9: statistics

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-28) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-30) continue;
                const double phi = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(phi), s = std::sin(phi);
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
}

std::string criterion_statistics() {
    // Hand case with a tie in each input: ranks x = {1, 2.5, 2.5, 4},
    // y = {4, 1.5, 1.5, 3}; covariance -1.5, both variances 4.5.
    {
        const SpearmanResult r = spearman({1, 2, 2, 4}, {3, 1, 1, 2});
        require_close(r.rho, -1.0 / 3.0, 1e-12, "hand spearman with ties");
        require(r.n == 4, "hand spearman n");
    }
    Rng rng(909);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 3 + rng.below(10);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.below(5));  // tie-heavy
            y[i] = static_cast<double>(rng.below(5));
        }
        // Both inputs need spread.
        if (std::set<double>(x.begin(), x.end()).size() < 2) x[0] += 10.0;
        if (std::set<double>(y.begin(), y.end()).size() < 2) y[0] += 10.0;
        const SpearmanResult r = spearman(x, y);
        require_close(r.rho, oracle_pearson(oracle_average_ranks(x), oracle_average_ranks(y)),
                      1e-12, "spearman trial " + str(trial));
    }

    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 4 + rng.below(20);
        std::vector<double> scores(n);
        std::vector<bool> labels(n);
        bool any_pos = false, any_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.below(6));
            labels[i] = rng.coin();
            (labels[i] ? any_pos : any_neg) = true;
        }
        if (!any_pos) labels[0] = true;
        if (!any_neg) labels[n - 1] = !labels[n - 1] || n > 1 ? false : labels[n - 1];
        if (labels == std::vector<bool>(n, labels[0])) labels[0] = !labels[0];
        double wins = 0, pairs = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!labels[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[j]) continue;
                pairs += 1;
                if (scores[i] > scores[j])
                    wins += 1;
                else if (scores[i] == scores[j])
                    wins += 0.5;
            }
        }
        require_close(roc_auc(scores, labels, true), wins / pairs, 1e-12,
                      "roc trial " + str(trial));
    }

    double worst_eig = 0, worst_ortho = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t rows_n = 8 + rng.below(7);
        const std::size_t cols_n = 3 + rng.below(3);
        std::vector<std::vector<double>> rows(rows_n, std::vector<double>(cols_n));
        for (auto& row : rows)
            for (double& v : row) v = rng.uniform(-3.0, 3.0);

        const PcaResult got = pca(rows, static_cast<int>(cols_n));

        std::vector<double> mean(cols_n, 0.0);
        for (const auto& row : rows)
            for (std::size_t c = 0; c < cols_n; ++c) mean[c] += row[c];
        for (double& m : mean) m /= static_cast<double>(rows_n);
        std::vector<std::vector<double>> cov(cols_n, std::vector<double>(cols_n, 0.0));
        for (const auto& row : rows)
            for (std::size_t a = 0; a < cols_n; ++a)
                for (std::size_t b = 0; b < cols_n; ++b)
                    cov[a][b] += (row[a] - mean[a]) * (row[b] - mean[b]);
        for (auto& r : cov)
            for (double& v : r) v /= static_cast<double>(rows_n - 1);

        const std::vector<double> want = jacobi_eigenvalues(cov);
        require(got.eigenvalues.size() == want.size(), "eigenvalue count");
        for (std::size_t i = 0; i < want.size(); ++i) {
            worst_eig = std::max(worst_eig, std::fabs(got.eigenvalues[i] - want[i]));
            require_close(got.eigenvalues[i], want[i], 1e-8,
                          "pca trial " + str(trial) + " eigenvalue " + str(i));
        }
        for (std::size_t a = 0; a < got.components.size(); ++a) {
            for (std::size_t b = a; b < got.components.size(); ++b) {
                double dot = 0;
                for (std::size_t c = 0; c < cols_n; ++c)
                    dot += got.components[a][c] * got.components[b][c];
                const double want_dot = a == b ? 1.0 : 0.0;
                worst_ortho = std::max(worst_ortho, std::fabs(dot - want_dot));
                require(std::fabs(dot - want_dot) <= 1e-10,
                        "pca trial " + str(trial) + ": components not orthonormal");
            }
        }
    }
    return "spearman/roc oracles to 1e-12; eigenvalue gap <= " + str(worst_eig) +
           ", orthonormality gap <= " + str(worst_ortho);
}

// ------------------------------------------- criteria 10/11: rehearsal world

struct Rehearsal {
    bool ready = false;
    fs::path out1, out2, out_ab;
};
Rehearsal g_rehearsal;

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(KGRX_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
#ifdef WIFEXITED
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
#else
    return status;
#endif
}

void require_cli(const std::string& args, const fs::path& log) {
    const int code = run_cli(args, log);
    if (code != 0)
        throw Failure("CLI exited with " + str(code) + " for: " + args + "\n  log: " +
                      (fs::exists(log) ? slurp(log).substr(0, 400) : "<missing>"));
}

std::map<std::string, std::string> dir_contents(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    return out;
}

// (disease, drug) -> confidence score cell (raw string; empty for errors).
std::map<std::pair<std::string, std::string>, std::string> ranked_scores(const fs::path& csv) {
    const std::vector<std::string> lines = nonempty_lines(slurp(csv));
    require(!lines.empty(), "empty ranked.csv");
    const std::vector<std::string> header = split(lines[0], ',');
    require(header.size() >= 3 && header[0] == "disease" && header[1] == "drug" &&
                header[2] == "confidence_score",
            "unexpected ranked.csv header");
    std::map<std::pair<std::string, std::string>, std::string> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> cells = split(lines[i], ',');
        out[{cells[0], cells[1]}] = cells[2];
    }
    return out;
}

std::string criterion_rehearsal() {
    const fs::path world = fs::path(data_path("rehearsal"));
    const fs::path tmp = scratch_root() / "rehearsal";
    fs::create_directories(tmp);
    const fs::path plain = tmp / "plain.json";
    const fs::path weighted = tmp / "weighted.json";

    const std::string train_common = " --graph " + (world / "graph.tsv").string() +
                                     " --dim 16 --epochs 25 --batch-size 32" +
                                     " --learning-rate 0.3 --negatives 4 --gamma 6";
    require_cli("train" + train_common + " --seed 7 --out " + plain.string(),
                tmp / "train_plain.log");
    require_cli("train" + train_common + " --seed 8 --weighted --out " + weighted.string(),
                tmp / "train_weighted.log");

    json cfg;
    cfg["graph"] = (world / "graph.tsv").string();
    cfg["checkpoint_plain"] = plain.string();
    cfg["checkpoint_weighted"] = weighted.string();
    cfg["fixtures"] = (world / "fixtures").string();
    cfg["perturbations"] = (world / "perturbations.tsv").string();
    cfg["survival_dir"] = (world / "survival").string();
    cfg["benchmark"] = (world / "benchmark.tsv").string();
    cfg["out_dir"] = (tmp / "out1").string();
    cfg["diseases"] = {"melanoma", "lung-carcinoma", "colorectal-carcinoma"};
    cfg["external_candidates"] = {"rx24", "rx25"};
    cfg["top_k_per_model"] = 100;
    cfg["current_year"] = 2026;
    const fs::path cfg_path = tmp / "config.json";
    spit(cfg_path, cfg.dump(2) + "\n");

    // Two seeded serial runs must be byte-identical.
    require_cli("run --config " + cfg_path.string() + " --serial", tmp / "run1.log");
    require_cli("run --config " + cfg_path.string() + " --out-dir " + (tmp / "out2").string() +
                    " --serial",
                tmp / "run2.log");
    const auto files1 = dir_contents(tmp / "out1");
    const auto files2 = dir_contents(tmp / "out2");
    require(files1.size() == files2.size(), "rerun produced a different file set");
    for (const auto& [rel, body] : files1) {
        const auto it = files2.find(rel);
        require(it != files2.end(), "rerun is missing " + rel);
        require(it->second == body, "rerun differs in " + rel);
    }
    require(files1.count("ranked.csv") == 1 && files1.count("run_summary.json") == 1,
            "report files missing");
    std::size_t dossiers = 0;
    for (const auto& [rel, body] : files1)
        if (rel.rfind("dossiers/", 0) == 0) ++dossiers;
    require(dossiers == 75, "expected 75 dossiers, found " + str(dossiers));

    const json summary = json::parse(files1.at("run_summary.json"));
    require(summary.at("partial") == false, "run reported partial");
    require(summary.at("pairs_total") == 75 && summary.at("pairs_failed") == 0,
            "unexpected pair counts");
    for (const char* disease : {"melanoma", "lung-carcinoma", "colorectal-carcinoma"})
        require(summary.at("diseases").at(disease).at("recall") == 1.0,
                std::string("recall for ") + disease + " is not 1");
    require(summary.at("survival_alignment").at("n") == 8, "expected 8 hazard-fitted pairs");
    const double rho_summary = summary.at("survival_alignment").at("rho");
    require(rho_summary < 0, "pooled spearman is not negative: " + str(rho_summary));

    // Planted rubric tiers for the on-target pairs.
    const auto scores = ranked_scores(tmp / "out1" / "ranked.csv");
    const std::vector<std::tuple<std::string, std::string, std::string>> planted = {
        {"melanoma", "rx01", "100"},       {"lung-carcinoma", "rx09", "90"},
        {"colorectal-carcinoma", "rx17", "85"}, {"melanoma", "rx02", "70"},
        {"lung-carcinoma", "rx10", "55"},  {"colorectal-carcinoma", "rx18", "45"},
        {"melanoma", "rx03", "35"},        {"lung-carcinoma", "rx11", "25"},
    };
    for (const auto& [disease, drug, want] : planted)
        require(scores.at({disease, drug}) == want,
                disease + "/" + drug + ": score " + scores.at({disease, drug}) + ", planted " +
                    want);

    // The excluded relation must never appear on a dossier path, and at least
    // one dossier must actually carry paths.
    bool any_paths = false;
    for (const auto& [rel, body] : files1) {
        if (rel.rfind("dossiers/", 0) != 0) continue;
        const json dossier = json::parse(body);
        for (const auto& path : dossier.at("paths")) {
            any_paths = true;
            for (const auto& relation : path.at("relations"))
                require(relation != "synergistic interaction",
                        "excluded relation on a path in " + rel);
        }
    }
    require(any_paths, "no dossier carries explanatory paths");

    // eval-recall: every disease at recall 1 -> union recall 1.
    const fs::path recall_log = tmp / "recall.log";
    require_cli("eval-recall --run-dir " + (tmp / "out1").string() + " --benchmark " +
                    (world / "benchmark.tsv").string(),
                recall_log);
    const std::vector<std::string> recall_lines = nonempty_lines(slurp(recall_log));
    require(recall_lines.size() == 3, "expected 3 recall lines");
    for (const std::string& line : recall_lines) {
        const std::vector<std::string> cells = split(line, '\t');
        require(cells.size() == 2 && std::stod(cells[1]) == 1.0,
                "recall line not 1.0: " + line);
    }

    // eval-survival: pooled spearman between confidence and hazard ratios.
    const fs::path surv_log = tmp / "survival.log";
    require_cli("eval-survival --run-dir " + (tmp / "out1").string(), surv_log);
    double rho = 1;
    for (const std::string& line : nonempty_lines(slurp(surv_log))) {
        const std::vector<std::string> cells = split(line, '\t');
        if (cells.size() == 2 && cells[0] == "rho") rho = std::stod(cells[1]);
    }
    require(rho < 0, "eval-survival rho is not negative: " + str(rho));

    // ablate: pathway channel muted (consumed by the locality criterion).
    require_cli("ablate --config " + cfg_path.string() + " --drop pathway --out-dir " +
                    (tmp / "out_ab").string() + " --serial",
                tmp / "ablate.log");

    // subtype-pca over the finished run.
    const fs::path pca_csv = tmp / "subtype.csv";
    require_cli("subtype-pca --run-dir " + (tmp / "out1").string() + " --out " +
                    pca_csv.string(),
                tmp / "subtype.log");
    const std::vector<std::string> pca_lines = nonempty_lines(slurp(pca_csv));
    require(pca_lines.size() == 4 && pca_lines[0] == "disease,pc1,pc2",
            "unexpected subtype projection output");

    g_rehearsal.ready = true;
    g_rehearsal.out1 = tmp / "out1";
    g_rehearsal.out2 = tmp / "out2";
    g_rehearsal.out_ab = tmp / "out_ab";
    return "75 pairs byte-identical across serial reruns; union recall 1.0; pooled rho = " +
           str(rho);
}

std::string criterion_ablation_locality() {
    require(g_rehearsal.ready, "rehearsal outputs unavailable (previous criterion failed)");
    const auto base = ranked_scores(g_rehearsal.out1 / "ranked.csv");
    const auto ablated = ranked_scores(g_rehearsal.out_ab / "ranked.csv");
    require(base.size() == ablated.size() && base.size() == 75, "pair sets differ");

    std::map<int, int> histogram;
    for (const auto& e : fs::directory_iterator(g_rehearsal.out1 / "dossiers")) {
        const json dossier = json::parse(slurp(e.path()));
        const std::string disease = dossier.at("disease").at("id");
        const std::string drug = dossier.at("drug").at("id");
        const int expected = dossier.at("flags").at("pathway_significant") == true ? 20
                             : dossier.at("flags").at("pathway_nominal") == true  ? 10
                                                                                  : 0;
        const int full = std::stoi(base.at({disease, drug}));
        const int dropped = std::stoi(ablated.at({disease, drug}));
        const int delta = full - dropped;
        require(delta == 0 || delta == 10 || delta == 20,
                disease + "/" + drug + ": delta " + str(delta) + " outside {0, 10, 20}");
        require(delta == expected, disease + "/" + drug + ": delta " + str(delta) +
                                       " but flags carry " + str(expected));
        ++histogram[delta];
    }
    require(histogram[0] + histogram[10] + histogram[20] == 75, "expected 75 dossiers");
    require(histogram[10] > 0 && histogram[20] > 0,
            "rehearsal world must exercise both pathway increments");
    return "all 75 pairs: drop_pathway delta equals the flagged increment (" +
           str(histogram[0]) + "x0, " + str(histogram[10]) + "x10, " + str(histogram[20]) +
           "x20)";
}

// ------------------------------------------------------------------- driver

struct Criterion {
    int id;
    const char* title;
    std::function<std::string()> body;
    double budget_seconds;  // 0 = no explicit budget
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "loss gradients vs central differences", criterion_gradients, 10.0},
        {2, "seeded toy training: monotone loss, held-out ranks", criterion_training_progress,
         60.0},
        {3, "closed-form equation anchors", criterion_equation_anchors, 0.0},
        {4, "minimal-hop paths vs exhaustive enumeration", criterion_path_oracle, 5.0},
        {5, "consensus signatures vs reference build", criterion_signature_oracle, 0.0},
        {6, "enrichment scores vs running-sum oracle", criterion_ssgsea_oracle, 0.0},
        {7, "hazard fit vs likelihood grid search", criterion_cox_oracle, 0.0},
        {8, "additive rubric and trial banding tables", criterion_rule_scorer, 0.0},
        {9, "rank statistics and principal components", criterion_statistics, 0.0},
        {10, "rehearsal pipeline end-to-end", criterion_rehearsal, 120.0},
        {11, "pathway ablation locality", criterion_ablation_locality, 0.0},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string verdict, detail;
        try {
            detail = c.body();
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (c.budget_seconds > 0 && elapsed > c.budget_seconds) {
                verdict = "FAIL";
                detail = "exceeded the " + str(c.budget_seconds) + "s budget (" + str(elapsed) +
                         "s)";
            } else {
                verdict = "PASS";
            }
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (verdict == "FAIL") ++failures;
        std::printf("criterion %2d: %s  %s — %s  [%.2fs]\n", c.id, verdict.c_str(), c.title,
                    detail.c_str(), elapsed);
        std::fflush(stdout);
    }
    if (failures > 0) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures;
}
