#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgrx/errors.hpp"

namespace kgrx {

enum class Direction { up, down };
enum class DoseUnit { nanomolar, micromolar, millimolar };

Direction parse_direction(const std::string& s);  // "up" / "down", case-insensitive
DoseUnit parse_dose_unit(const std::string& s);   // "nM" / "uM" / "mM" (also "um" etc.)

// One differential-expression call from a perturbation experiment.
struct PerturbationRecord {
    std::string drug;
    std::string signature_id;
    std::string gene;
    Direction direction = Direction::up;
    double dose_value = 0;
    DoseUnit dose_unit = DoseUnit::micromolar;
    std::optional<double> ic50_um;  // absent when the assay reported none
};

struct SignatureConfig {
    double k = 0.5;                   // dose decay exponent
    double alpha = 0.2;               // dose share of the final score
    int top_n = 200;                  // genes kept per direction
    double default_ic50_weight = 0.5; // used when a record has no IC50
};

double convert_dose_to_micromolar(double value, DoseUnit unit);

// Potency weight: min(1 / IC50_uM, 1). Records without an IC50 fall back to
// the configured default.
double ic50_weight(const std::optional<double>& ic50_um, const SignatureConfig& cfg);

// Dose weight: (1 + dose_uM)^(-k), so higher doses count less.
double dose_weight(double dose_um, double k);

// Direction-consensus scores for one gene under one drug, each in [-1, 1]:
//   score = (sum of weights over up calls - sum over down calls) / total calls
struct GeneAggregate {
    std::string gene;
    int n_up = 0;
    int n_down = 0;
    double ic50_score = 0;
    double dose_score = 0;
};

GeneAggregate aggregate_gene(const std::string& gene,
                             const std::vector<PerturbationRecord>& records,
                             const SignatureConfig& cfg);

// Per-drug normalization denominators: the largest |score| of each kind
// across the drug's genes. A zero maximum leaves scores untouched.
struct ScoreNormalizer {
    double max_abs_ic50 = 0;
    double max_abs_dose = 0;
};

// alpha * normalized dose score + (1 - alpha) * normalized IC50 score.
double final_score(const GeneAggregate& agg, const ScoreNormalizer& norm,
                   const SignatureConfig& cfg);

struct ScoredGene {
    std::string gene;
    double score = 0;
};

// Consensus signature: up = genes with positive final score, down = negative,
// each sorted by |score| descending (gene id breaks ties) and truncated to
// top_n. Genes with a final score of exactly 0 appear on neither side.
struct DrugSignature {
    std::string drug;
    std::vector<ScoredGene> up;
    std::vector<ScoredGene> down;

    std::vector<std::string> up_genes() const;
    std::vector<std::string> down_genes() const;
};

// All records must belong to one drug.
DrugSignature build_signature(const std::vector<PerturbationRecord>& records,
                              const SignatureConfig& cfg);

// Tab-separated with header:
// drug, signature_id, gene, direction, dose_value, dose_unit, ic50_um
// An empty or "NA" ic50_um field means the assay reported none.
std::vector<PerturbationRecord> load_perturbations(const std::string& path);

void save_signature(const DrugSignature& sig, const std::string& path);
DrugSignature load_signature(const std::string& path);

}  // namespace kgrx
