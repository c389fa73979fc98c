#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgrx/paths.hpp"
#include "kgrx/providers.hpp"
#include "kgrx/signature.hpp"
#include "kgrx/survival.hpp"

namespace kgrx {

// ---- gene-level evidence ----------------------------------------------

// Evidence categories a gene can accumulate for a (disease, drug) pair.
inline constexpr const char* kCategoryNetwork = "network";        // on a kept graph path
inline constexpr const char* kCategoryPerturbation = "perturbation";  // in the drug signature
inline constexpr const char* kCategoryLiterature = "literature";  // drug-gene co-mentions
inline constexpr const char* kCategoryResource = "resource";      // curated drug-gene record

struct GeneEvidence {
    std::string gene;
    std::set<std::string> categories;
    std::map<std::string, std::vector<std::string>> details;  // category -> evidence notes
};

// Union of all gene-level sources for a pair, one entry per gene, ordered by
// category count (descending) then gene id. `graph` supplies entity kinds so
// only gene entities on paths count as network evidence.
std::vector<GeneEvidence> select_genes(const Graph& graph, const std::string& drug,
                                       const std::vector<ScoredPath>& paths,
                                       const DrugSignature* signature,
                                       const Providers& providers);

// ---- pathway over-representation ---------------------------------------

struct OraResult {
    std::string term;
    int overlap = 0;
    int term_size = 0;   // after intersecting with the universe
    int query_size = 0;  // after intersecting with the universe
    double p = 1;
    double fdr = 1;
    std::vector<std::string> overlap_genes;
};

// Hypergeometric over-representation of `query` in each gene set, against the
// given universe; p-values are BH-adjusted across the terms. Results sorted
// by (p, term). A query that shares no genes with the universe is an error.
std::vector<OraResult> ora(const std::set<std::string>& query,
                           const std::map<std::string, std::set<std::string>>& gene_sets,
                           const std::set<std::string>& universe);

// ---- rule-based scoring --------------------------------------------------

struct EvidenceFlags {
    bool disease_drug_clinical = false;     // trials for this pair or approval for this disease
    bool disease_drug_preclinical = false;  // co-mentions or graph paths only
    bool gene_strong = false;               // >= 3 genes with >= 2 evidence categories
    bool gene_limited = false;              // some gene evidence, short of strong
    bool pathway_significant = false;       // BH-adjusted p < 0.05
    bool pathway_nominal = false;           // raw p < 0.05 only
    bool fda_approved_any = false;          // approved for some indication
};

// Throws ValidationError when mutually exclusive flags are both set.
void validate_flags(const EvidenceFlags& flags);

struct RuleScore {
    int score = 0;  // 0..100
    std::vector<std::string> rationale;
};

// Additive rubric: disease-drug evidence +40 clinical / +20 preclinical,
// gene-level +30 strong / +15 limited, pathway +20 significant / +10 nominal,
// FDA approval for any indication +10; capped at 100.
RuleScore rule_score(const EvidenceFlags& flags);

// Seven bands over [0, 100]: Very Low, Low, Moderately Low, Moderate,
// Moderately High, High, Very High (15-point steps, Very High spans 90-100).
std::string confidence_level(int score);

// ---- trial interpretation -------------------------------------------------

enum class TrialBand {
    negative_bad,
    positive_good,
    completed_no_result,
    ongoing_long_term_incomplete,
    ongoing_in_reasonable_term,
};

const char* trial_band_name(TrialBand band);

struct TrialBandResult {
    TrialBand band = TrialBand::ongoing_in_reasonable_term;
    int score_lo = 50;
    int score_hi = 79;
    std::string rationale;
};

// Highest phase digit mentioned in free text ("Phase II/III" -> 3); 0 when
// none is recognizable.
int parse_phase(const std::string& phase);

// Band assignment, checked in order: posted negative results are bad [0, 19];
// posted positive results are good [80, 100]; a completed trial whose results
// are overdue (completed before `current_year`, none posted) is
// completed_no_result [20, 34]; a trial running without results past its
// phase's patience window (2 years for phase 1-2, 5 years for phase 3 and up
// or unknown phase) is ongoing_long_term_incomplete [35, 49]; everything else
// is ongoing_in_reasonable_term [50, 79].
TrialBandResult trial_result_status(const TrialMeta& trial, int current_year);

// ---- development-stage taxonomy -------------------------------------------

struct StageRule {
    std::string name;
    std::string kind;               // "approved", "trial", "preclinical", "none"
    std::set<int> phases;           // for kind == "trial"; 0 = unknown phase
    std::set<std::string> bands;    // trial band names
};

// Ordered stage rules; earlier rules are more advanced stages. Validated at
// load time: there must be an approved, a preclinical and a none rule, and
// the trial rules must cover every (phase, band) combination.
class StageTaxonomy {
public:
    static StageTaxonomy load(const std::string& path);
    static StageTaxonomy builtin();  // the default 17-stage ladder

    const std::vector<StageRule>& rules() const { return rules_; }

    // Index of the first rule matching the inputs; smaller is more advanced.
    std::size_t stage_index(bool approved_for_disease,
                            const std::vector<std::pair<int, TrialBand>>& trials,
                            bool has_preclinical_evidence) const;
    const std::string& stage_name(std::size_t index) const;

private:
    void validate() const;
    std::vector<StageRule> rules_;
};

// Convenience wrapper returning the stage name directly.
std::string categorize_stage(const StageTaxonomy& taxonomy, bool approved_for_disease,
                             const std::vector<std::pair<int, TrialBand>>& trials,
                             bool has_preclinical_evidence);

// ---- full profile ----------------------------------------------------------

struct TrialAssessment {
    TrialMeta trial;
    TrialBandResult banded;
};

struct EvidenceProfile {
    std::string disease_id, disease_name;
    std::string drug_id, drug_name;
    std::optional<double> score_kge;   // plain model score for the pair
    std::optional<double> score_kgwe;  // literature-weighted model score
    std::vector<ScoredPath> paths;
    std::vector<GeneEvidence> genes;
    std::vector<OraResult> ora_up, ora_down;
    std::vector<TrialAssessment> trials;
    EvidenceFlags flags;
    bool fda_approved_for_disease = false;
    RuleScore rubric;
    std::string confidence;  // band for rubric.score
    std::string fda_status;  // label-derived status line
    std::string development_stage;
    std::size_t development_stage_index = 0;
    std::optional<HazardOutcome> survival;
    std::vector<std::string> warnings;
};

struct ProfileInputs {
    std::string disease_id, disease_name;
    std::string drug_id, drug_name;
    std::optional<double> score_kge;
    std::optional<double> score_kgwe;
    std::vector<ScoredPath> paths;
    const DrugSignature* signature = nullptr;      // optional
    std::optional<HazardOutcome> survival;         // optional
    int current_year = 0;                          // required, keeps runs reproducible
};

// Pulls every evidence stream together: gene selection, pathway ORA of the
// signature sides (pooled BH), trial banding, flag derivation, the additive
// rubric, FDA status line and development stage.
EvidenceProfile assemble_profile(const Graph& graph, const ProfileInputs& in,
                                 const Providers& providers, const StageTaxonomy& taxonomy);

// Dossier serialization (stable key order, suitable for diffing).
nlohmann::json profile_to_json(const EvidenceProfile& p);

}  // namespace kgrx
