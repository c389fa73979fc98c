#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgrx/evidence.hpp"
#include "kgrx/graph.hpp"
#include "kgrx/hake.hpp"
#include "kgrx/paths.hpp"
#include "kgrx/signature.hpp"
#include "kgrx/stats.hpp"
#include "kgrx/survival.hpp"

namespace kgrx {

// Evidence channels that can be muted when scoring (sensitivity analysis).
struct AblationConfig {
    bool drop_disease_drug = false;
    bool drop_gene = false;
    bool drop_pathway = false;
    bool drop_fda = false;
};

// Masks the dropped channels' flags and recomputes the rubric, confidence
// band and nothing else; the underlying evidence stays in the profile.
void apply_ablation(EvidenceProfile& profile, const AblationConfig& ablation);

struct RunConfig {
    std::string graph_path;
    std::string checkpoint_plain;     // unweighted model
    std::string checkpoint_weighted;  // literature-weighted model
    std::string fixtures_dir;
    std::string perturbations_path;  // optional
    std::string survival_dir;        // optional; expects <disease>.expr.tsv + <disease>.surv.tsv
    std::string benchmark_path;      // optional gold standard
    std::string taxonomy_path;       // optional; built-in ladder when empty
    std::string out_dir;

    std::vector<std::string> diseases;             // disease entity ids to process
    std::vector<std::string> external_candidates;  // drug ids always added to the pool
    std::string indication_relation = "indication";
    int top_k_per_model = 100;
    int current_year = 0;  // must be set explicitly; keeps reruns identical
    bool with_survival = true;
    int threads = 1;  // 1 = serial; 0 = hardware concurrency

    SignatureConfig signature;
    PathScoringConfig path_scoring;
    HazardConfig hazard;
    AblationConfig ablation;

    // Reads the JSON config; relative paths resolve against the file's
    // directory. Missing keys keep their defaults; unknown keys are errors.
    static RunConfig load(const std::string& path);
};

struct BenchmarkRow {
    std::string disease_id;
    std::string disease_name;
    std::string drug_name;
    std::string category;  // gold rows carry "indication"
};

// TSV with header: disease_id, disease_name, drug_name, category.
std::vector<BenchmarkRow> load_benchmark(const std::string& path);

// Candidate pool for one disease: the union of each model's top-k drugs plus
// externally supplied candidates present in the graph.
struct CandidateSets {
    std::set<std::string> from_plain;
    std::set<std::string> from_weighted;
    std::set<std::string> external;
    std::vector<std::string> pool;  // sorted union
};

CandidateSets generate_candidates(const Graph& g, const HakeParams& plain,
                                  const HakeParams& weighted, const std::string& disease,
                                  const std::string& relation, int top_k,
                                  const std::vector<std::string>& external);

struct PairResult {
    std::string disease;
    std::string drug;
    EvidenceProfile profile;
    bool from_plain = false;
    bool from_weighted = false;
    bool is_external = false;
    std::string error;  // non-empty when this pair could not be assembled
};

// Recall of the gold indications (category == "indication") for one disease
// among the retrieved drugs, by canonicalized name.
double evaluate_recall(const std::vector<std::string>& retrieved_drugs,
                       const std::vector<BenchmarkRow>& benchmark, const std::string& disease_id);

// Pooled rank correlation between the rubric confidence score and the Cox
// hazard ratio across every pair that has a fitted hazard. Needs three such
// pairs; an aligned pipeline trends negative (better drugs, lower hazard).
std::optional<SpearmanResult> evaluate_survival_alignment(const std::vector<PairResult>& pairs);

// Per-disease development-stage composition reduced to principal components.
struct SubtypeProjection {
    std::vector<std::string> diseases;             // row order
    std::vector<std::string> stages;               // column order (taxonomy order)
    std::vector<std::vector<double>> fractions;    // diseases x stages
    PcaResult components;
};

SubtypeProjection subtype_profile(const std::vector<std::pair<std::string, std::string>>& rows,
                                  const StageTaxonomy& taxonomy, int n_components);

struct RunOutcome {
    std::vector<PairResult> pairs;  // disease-major, drug-minor order
    std::map<std::string, CandidateSets> candidates;
    std::map<std::string, double> recall;  // per disease, when a benchmark is given
    std::optional<SpearmanResult> survival_alignment;
    std::optional<SubtypeProjection> subtypes;
    std::vector<std::string> warnings;
    bool partial = false;  // some pairs failed but the run finished
};

// Full evidence-integration run: candidate generation from both checkpoints,
// per-pair path search, signature, survival and profile assembly
// (parallelized across pairs; results do not depend on the thread count), and
// report files under cfg.out_dir:
//   ranked.csv, dossiers/<disease>__<drug>.json, run_summary.json and the
//   figures/ CSVs (recall, candidate overlap, score-vs-hazard, ablation
//   deltas, subtype projection).
RunOutcome run_pipeline(const RunConfig& cfg);

}  // namespace kgrx
