#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgrx/errors.hpp"
#include "kgrx/signature.hpp"

namespace kgrx {

// Genes x samples, row-major.
struct ExpressionMatrix {
    std::vector<std::string> genes;
    std::vector<std::string> samples;
    std::vector<double> values;

    double at(std::size_t gene, std::size_t sample) const {
        return values[gene * samples.size() + sample];
    }

    // TSV with a "gene" header column followed by sample ids.
    static ExpressionMatrix load(const std::string& path);
};

struct SurvivalRecord {
    std::string sample;
    double time = 0;   // days
    bool event = false;
    std::optional<double> response;  // optional extra label column
};

// TSV with header: sample, time_days, event and an optional response column
// (an empty or "NA" response field reads as absent).
std::vector<SurvivalRecord> load_survival(const std::string& path);

// Single-sample enrichment of `gene_set` in every sample. Genes are ranked
// per sample (1 = lowest expression, ties get the average rank) and walked
// from the highest rank down; member genes push a weighted empirical CDF
// (weight rank^tau), non-members push a uniform one, and the score is the sum
// of the running difference. Throws ValidationError when no member gene is in
// the matrix and DegenerateError when every matrix gene is a member.
std::vector<double> ssgsea(const ExpressionMatrix& m, const std::set<std::string>& gene_set,
                           double tau);

// Z-scores across samples using the n-1 standard deviation. Needs at least
// two samples and non-zero spread.
std::vector<double> nes(const std::vector<double>& es);

struct EnrichmentResult {
    std::vector<std::string> samples;
    std::vector<double> es_up;
    std::vector<double> es_down;   // empty when the signature has no down side
    std::vector<double> combined;  // es_up - es_down (or the single available side)
    std::vector<double> nes;       // z-scores of `combined`
};

// Top and bottom thirds (floor(n/3) each) by score, descending; equal scores
// order by sample id. Group members come back sorted by sample id. Fewer than
// three samples cannot be stratified (DegenerateError).
struct StratifiedCohort {
    std::vector<std::string> high;
    std::vector<std::string> low;
};

StratifiedCohort tertile_stratify(const std::vector<std::string>& samples,
                                  const std::vector<double>& scores);

// Both groups at least min_group samples and at least min_events events
// observed across the two groups.
bool check_eligibility(const StratifiedCohort& cohort, const std::vector<SurvivalRecord>& surv,
                       int min_group, int min_events);

struct CoxFit {
    double beta = 0;
    double hazard_ratio = 1;
    double se = 0;
    double p = 1;
    int n_events = 0;
    bool converged = false;
};

// Univariable Cox proportional hazards with the single binary covariate
// "sample is in the high group", Breslow tie handling, Newton-Raphson with
// |beta| capped at 20 when the likelihood is monotone (flagged via
// `converged`). The Wald p-value uses the normal approximation.
CoxFit cox_univariable(const StratifiedCohort& cohort, const std::vector<SurvivalRecord>& surv);

// Kaplan-Meier product-limit curve for the given samples, as (time, survival)
// steps starting at (0, 1). Censored-only groups stay flat at 1.
std::vector<std::pair<double, double>> km_curve(const std::vector<std::string>& samples,
                                                const std::vector<SurvivalRecord>& surv);

struct HazardConfig {
    double tau = 0.25;
    int min_group = 10;
    int min_events = 3;
};

// End-to-end: enrich the signature in the cohort, combine the two sides,
// z-score, stratify into tertiles and fit the Cox model. Statistical
// impossibilities (no usable genes, flat scores, too few samples or events)
// come back as an unset fit with `ineligible_reason` instead of exceptions.
struct HazardOutcome {
    EnrichmentResult enrichment;
    StratifiedCohort cohort;
    std::optional<CoxFit> fit;
    std::vector<std::pair<double, double>> km_high, km_low;
    std::string ineligible_reason;  // empty when `fit` is set
    std::vector<std::string> warnings;
};

HazardOutcome hazard_for_pair(const ExpressionMatrix& expr, const DrugSignature& sig,
                              const std::vector<SurvivalRecord>& surv, const HazardConfig& cfg);

}  // namespace kgrx
