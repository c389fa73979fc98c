#include "kgrx/signature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "kgrx/text.hpp"

namespace kgrx {

Direction parse_direction(const std::string& s) {
    const std::string d = canonical_name(s);
    if (d == "up") return Direction::up;
    if (d == "down") return Direction::down;
    throw ParseError("bad direction '" + s + "' (expected up or down)");
}

DoseUnit parse_dose_unit(const std::string& s) {
    const std::string u = canonical_name(s);
    if (u == "nm") return DoseUnit::nanomolar;
    if (u == "um" || u == "\xc2\xb5m") return DoseUnit::micromolar;  // accepts a micro sign
    if (u == "mm") return DoseUnit::millimolar;
    throw ParseError("bad dose unit '" + s + "' (expected nM, uM or mM)");
}

double convert_dose_to_micromolar(double value, DoseUnit unit) {
    switch (unit) {
        case DoseUnit::nanomolar: return value / 1000.0;
        case DoseUnit::micromolar: return value;
        case DoseUnit::millimolar: return value * 1000.0;
    }
    throw ValidationError("unhandled dose unit");
}

double ic50_weight(const std::optional<double>& ic50_um, const SignatureConfig& cfg) {
    if (!ic50_um) return cfg.default_ic50_weight;
    if (!(*ic50_um > 0)) throw ValidationError("IC50 must be positive");
    return std::min(1.0 / *ic50_um, 1.0);
}

double dose_weight(double dose_um, double k) {
    if (dose_um < 0) throw ValidationError("dose must be non-negative");
    return std::pow(1.0 + dose_um, -k);
}

GeneAggregate aggregate_gene(const std::string& gene,
                             const std::vector<PerturbationRecord>& records,
                             const SignatureConfig& cfg) {
    if (records.empty()) throw ValidationError("no records for gene " + gene);
    GeneAggregate agg;
    agg.gene = gene;
    double ic50_net = 0, dose_net = 0;
    for (const PerturbationRecord& r : records) {
        if (r.gene != gene) throw ValidationError("record for " + r.gene + " aggregated under " + gene);
        const double sgn = r.direction == Direction::up ? 1.0 : -1.0;
        if (r.direction == Direction::up)
            ++agg.n_up;
        else
            ++agg.n_down;
        ic50_net += sgn * ic50_weight(r.ic50_um, cfg);
        dose_net += sgn * dose_weight(convert_dose_to_micromolar(r.dose_value, r.dose_unit), cfg.k);
    }
    const double total = static_cast<double>(agg.n_up + agg.n_down);
    agg.ic50_score = ic50_net / total;
    agg.dose_score = dose_net / total;
    return agg;
}

double final_score(const GeneAggregate& agg, const ScoreNormalizer& norm,
                   const SignatureConfig& cfg) {
    const double ic50 = norm.max_abs_ic50 > 0 ? agg.ic50_score / norm.max_abs_ic50 : agg.ic50_score;
    const double dose = norm.max_abs_dose > 0 ? agg.dose_score / norm.max_abs_dose : agg.dose_score;
    return cfg.alpha * dose + (1.0 - cfg.alpha) * ic50;
}

std::vector<std::string> DrugSignature::up_genes() const {
    std::vector<std::string> out;
    out.reserve(up.size());
    for (const ScoredGene& g : up) out.push_back(g.gene);
    return out;
}

std::vector<std::string> DrugSignature::down_genes() const {
    std::vector<std::string> out;
    out.reserve(down.size());
    for (const ScoredGene& g : down) out.push_back(g.gene);
    return out;
}

DrugSignature build_signature(const std::vector<PerturbationRecord>& records,
                              const SignatureConfig& cfg) {
    if (records.empty()) throw ValidationError("cannot build a signature from no records");
    if (cfg.top_n <= 0) throw ConfigError("top_n must be positive");
    DrugSignature sig;
    sig.drug = records.front().drug;

    std::map<std::string, std::vector<PerturbationRecord>> by_gene;
    for (const PerturbationRecord& r : records) {
        if (r.drug != sig.drug)
            throw ValidationError("records mix drugs " + sig.drug + " and " + r.drug);
        by_gene[r.gene].push_back(r);
    }

    std::vector<GeneAggregate> aggs;
    aggs.reserve(by_gene.size());
    ScoreNormalizer norm;
    for (const auto& [gene, recs] : by_gene) {
        aggs.push_back(aggregate_gene(gene, recs, cfg));
        norm.max_abs_ic50 = std::max(norm.max_abs_ic50, std::abs(aggs.back().ic50_score));
        norm.max_abs_dose = std::max(norm.max_abs_dose, std::abs(aggs.back().dose_score));
    }

    for (const GeneAggregate& agg : aggs) {
        const double s = final_score(agg, norm, cfg);
        if (s > 0)
            sig.up.push_back({agg.gene, s});
        else if (s < 0)
            sig.down.push_back({agg.gene, s});
    }
    auto by_strength = [](const ScoredGene& a, const ScoredGene& b) {
        const double aa = std::abs(a.score), ab = std::abs(b.score);
        if (aa != ab) return aa > ab;
        return a.gene < b.gene;
    };
    std::sort(sig.up.begin(), sig.up.end(), by_strength);
    std::sort(sig.down.begin(), sig.down.end(), by_strength);
    const std::size_t keep = static_cast<std::size_t>(cfg.top_n);
    if (sig.up.size() > keep) sig.up.resize(keep);
    if (sig.down.size() > keep) sig.down.resize(keep);
    return sig;
}

std::vector<PerturbationRecord> load_perturbations(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ParseError(path + ": empty file");
    const std::vector<std::string> expected = {"drug",       "signature_id", "gene",   "direction",
                                               "dose_value", "dose_unit",    "ic50_um"};
    std::vector<std::string> header = split(lines[0], '\t');
    for (std::string& h : header) h = canonical_name(h);
    if (header != expected)
        throw ParseError(path + ": unexpected header (want drug, signature_id, gene, direction, "
                                "dose_value, dose_unit, ic50_um)");

    std::vector<PerturbationRecord> out;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::string where = path + ":" + std::to_string(ln + 1);
        const std::vector<std::string> cols = split(lines[ln], '\t');
        if (cols.size() != expected.size())
            throw ParseError(where + ": expected " + std::to_string(expected.size()) + " columns");
        PerturbationRecord r;
        r.drug = trim(cols[0]);
        r.signature_id = trim(cols[1]);
        r.gene = trim(cols[2]);
        if (r.drug.empty() || r.gene.empty()) throw ParseError(where + ": empty drug or gene");
        r.direction = parse_direction(cols[3]);
        r.dose_value = parse_double(cols[4], where);
        if (r.dose_value < 0) throw ValidationError(where + ": negative dose");
        r.dose_unit = parse_dose_unit(cols[5]);
        const std::string ic50 = canonical_name(cols[6]);
        if (!ic50.empty() && ic50 != "na") {
            r.ic50_um = parse_double(cols[6], where);
            if (!(*r.ic50_um > 0)) throw ValidationError(where + ": IC50 must be positive");
        }
        out.push_back(std::move(r));
    }
    return out;
}

void save_signature(const DrugSignature& sig, const std::string& path) {
    nlohmann::json j;
    j["drug"] = sig.drug;
    auto genes = [](const std::vector<ScoredGene>& side) {
        nlohmann::json arr = nlohmann::json::array();
        for (const ScoredGene& g : side) arr.push_back({{"gene", g.gene}, {"score", g.score}});
        return arr;
    };
    j["up"] = genes(sig.up);
    j["down"] = genes(sig.down);
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

DrugSignature load_signature(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
        DrugSignature sig;
        sig.drug = j.at("drug").get<std::string>();
        for (const auto& g : j.at("up"))
            sig.up.push_back({g.at("gene").get<std::string>(), g.at("score").get<double>()});
        for (const auto& g : j.at("down"))
            sig.down.push_back({g.at("gene").get<std::string>(), g.at("score").get<double>()});
        return sig;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace kgrx
