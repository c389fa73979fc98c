#include "kgrx/evidence.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "kgrx/stats.hpp"
#include "kgrx/text.hpp"

namespace kgrx {

namespace {

std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

GeneEvidence& slot_for(std::map<std::string, GeneEvidence>& by_gene, const std::string& gene) {
    GeneEvidence& ev = by_gene[gene];
    ev.gene = gene;
    return ev;
}

}  // namespace

std::vector<GeneEvidence> select_genes(const Graph& graph, const std::string& drug,
                                       const std::vector<ScoredPath>& paths,
                                       const DrugSignature* signature,
                                       const Providers& providers) {
    std::map<std::string, GeneEvidence> by_gene;

    for (const ScoredPath& sp : paths) {
        std::string route;
        for (std::size_t i = 0; i < sp.path.nodes.size(); ++i) {
            if (i) route += " - ";
            route += sp.path.nodes[i];
        }
        for (const std::string& node : sp.path.nodes) {
            if (!graph.has_entity(node) || graph.entity(node).kind != EntityKind::gene) continue;
            GeneEvidence& ev = slot_for(by_gene, node);
            ev.categories.insert(kCategoryNetwork);
            std::vector<std::string>& notes = ev.details[kCategoryNetwork];
            if (std::find(notes.begin(), notes.end(), route) == notes.end()) notes.push_back(route);
        }
    }

    if (signature) {
        for (const ScoredGene& g : signature->up) {
            GeneEvidence& ev = slot_for(by_gene, g.gene);
            ev.categories.insert(kCategoryPerturbation);
            ev.details[kCategoryPerturbation].push_back("up-regulated, score " +
                                                        format_score(g.score));
        }
        for (const ScoredGene& g : signature->down) {
            GeneEvidence& ev = slot_for(by_gene, g.gene);
            ev.categories.insert(kCategoryPerturbation);
            ev.details[kCategoryPerturbation].push_back("down-regulated, score " +
                                                        format_score(g.score));
        }
    }

    for (const std::string& gene : providers.literature.genes_with_snippets(drug)) {
        GeneEvidence& ev = slot_for(by_gene, gene);
        ev.categories.insert(kCategoryLiterature);
        for (const Snippet& s : providers.literature.gene_snippets(drug, gene))
            ev.details[kCategoryLiterature].push_back(s.id);
    }

    for (const ResourceRecord& r : providers.resources.records(drug)) {
        GeneEvidence& ev = slot_for(by_gene, r.gene);
        ev.categories.insert(kCategoryResource);
        ev.details[kCategoryResource].push_back(
            r.note.empty() ? r.source : r.source + ": " + r.note);
    }

    std::vector<GeneEvidence> out;
    out.reserve(by_gene.size());
    for (auto& [gene, ev] : by_gene) out.push_back(std::move(ev));
    std::sort(out.begin(), out.end(), [](const GeneEvidence& a, const GeneEvidence& b) {
        if (a.categories.size() != b.categories.size())
            return a.categories.size() > b.categories.size();
        return a.gene < b.gene;
    });
    return out;
}

std::vector<OraResult> ora(const std::set<std::string>& query,
                           const std::map<std::string, std::set<std::string>>& gene_sets,
                           const std::set<std::string>& universe) {
    if (universe.empty()) throw ValidationError("ora universe is empty");
    std::set<std::string> q;
    for (const std::string& g : query)
        if (universe.count(g)) q.insert(g);
    if (q.empty()) throw ValidationError("query shares no genes with the universe");

    std::vector<OraResult> out;
    std::vector<double> raw;
    for (const auto& [term, genes] : gene_sets) {
        OraResult r;
        r.term = term;
        r.query_size = static_cast<int>(q.size());
        std::set<std::string> members;
        for (const std::string& g : genes)
            if (universe.count(g)) members.insert(g);
        r.term_size = static_cast<int>(members.size());
        for (const std::string& g : q)
            if (members.count(g)) r.overlap_genes.push_back(g);
        r.overlap = static_cast<int>(r.overlap_genes.size());
        r.p = hypergeometric_tail(r.overlap, r.query_size, r.term_size,
                                  static_cast<int>(universe.size()));
        raw.push_back(r.p);
        out.push_back(std::move(r));
    }
    const std::vector<double> fdr = bh_adjust(raw);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].fdr = fdr[i];
    std::sort(out.begin(), out.end(), [](const OraResult& a, const OraResult& b) {
        if (a.p != b.p) return a.p < b.p;
        return a.term < b.term;
    });
    return out;
}

void validate_flags(const EvidenceFlags& f) {
    if (f.disease_drug_clinical && f.disease_drug_preclinical)
        throw ValidationError("clinical and preclinical disease-drug evidence are exclusive");
    if (f.gene_strong && f.gene_limited)
        throw ValidationError("strong and limited gene evidence are exclusive");
    if (f.pathway_significant && f.pathway_nominal)
        throw ValidationError("significant and nominal pathway evidence are exclusive");
}

RuleScore rule_score(const EvidenceFlags& f) {
    validate_flags(f);
    RuleScore out;
    if (f.disease_drug_clinical) {
        out.score += 40;
        out.rationale.push_back("Rule triggered: Disease-Drug evidence (+40).");
    } else if (f.disease_drug_preclinical) {
        out.score += 20;
        out.rationale.push_back("Rule triggered: Disease-Drug evidence (+20).");
    }
    if (f.gene_strong) {
        out.score += 30;
        out.rationale.push_back("Rule triggered: Gene-level evidence (+30).");
    } else if (f.gene_limited) {
        out.score += 15;
        out.rationale.push_back("Rule triggered: Gene-level evidence (+15).");
    }
    if (f.pathway_significant) {
        out.score += 20;
        out.rationale.push_back("Rule triggered: GSEA pathway evidence (+20).");
    } else if (f.pathway_nominal) {
        out.score += 10;
        out.rationale.push_back("Rule triggered: GSEA pathway evidence (+10).");
    }
    if (f.fda_approved_any) {
        out.score += 10;
        out.rationale.push_back("Rule triggered: FDA approval (+10).");
    }
    out.score = std::min(out.score, 100);
    return out;
}

std::string confidence_level(int score) {
    if (score < 0 || score > 100) throw ValidationError("confidence score must lie in [0, 100]");
    if (score <= 14) return "Very Low";
    if (score <= 29) return "Low";
    if (score <= 44) return "Moderately Low";
    if (score <= 59) return "Moderate";
    if (score <= 74) return "Moderately High";
    if (score <= 89) return "High";
    return "Very High";
}

const char* trial_band_name(TrialBand band) {
    switch (band) {
        case TrialBand::negative_bad: return "negative_bad";
        case TrialBand::positive_good: return "positive_good";
        case TrialBand::completed_no_result: return "completed_no_result";
        case TrialBand::ongoing_long_term_incomplete: return "ongoing_long_term_incomplete";
        case TrialBand::ongoing_in_reasonable_term: return "ongoing_in_reasonable_term";
    }
    return "ongoing_in_reasonable_term";
}

namespace {

TrialBand trial_band_from_name(const std::string& name) {
    for (TrialBand b : {TrialBand::negative_bad, TrialBand::positive_good,
                        TrialBand::completed_no_result, TrialBand::ongoing_long_term_incomplete,
                        TrialBand::ongoing_in_reasonable_term})
        if (name == trial_band_name(b)) return b;
    throw ValidationError("unknown trial band: " + name);
}

}  // namespace

int parse_phase(const std::string& phase) {
    const std::string s = lower(phase);
    int best = 0;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) return;
        if (token == "i")
            best = std::max(best, 1);
        else if (token == "ii")
            best = std::max(best, 2);
        else if (token == "iii")
            best = std::max(best, 3);
        else if (token == "iv")
            best = std::max(best, 4);
        else {
            bool digits = true;
            for (char c : token)
                if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
            if (digits) {
                const int v = std::atoi(token.c_str());
                if (v >= 1 && v <= 4) best = std::max(best, v);
            }
        }
        token.clear();
    };
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            token += c;
        else
            flush();
    }
    flush();
    return best;
}

TrialBandResult trial_result_status(const TrialMeta& trial, int current_year) {
    if (current_year <= 0) throw ConfigError("current year must be set");
    TrialBandResult out;
    const int phase = parse_phase(trial.phase);

    if (trial.has_results && trial.positive.has_value()) {
        if (*trial.positive) {
            out.band = TrialBand::positive_good;
            out.score_lo = 80;
            out.score_hi = 100;
            out.rationale = "posted results are positive";
        } else {
            out.band = TrialBand::negative_bad;
            out.score_lo = 0;
            out.score_hi = 19;
            out.rationale = "posted results are negative";
        }
        return out;
    }

    const bool completed = canonical_name(trial.status) == "completed";
    if (completed && !trial.has_results && trial.completion_year > 0 &&
        current_year > trial.completion_year) {
        out.band = TrialBand::completed_no_result;
        out.score_lo = 20;
        out.score_hi = 34;
        out.rationale = "completed without posted results";
        return out;
    }

    const int patience = phase >= 3 || phase == 0 ? 5 : 2;
    if (!trial.has_results && trial.start_year > 0 && current_year - trial.start_year >= patience) {
        out.band = TrialBand::ongoing_long_term_incomplete;
        out.score_lo = 35;
        out.score_hi = 49;
        out.rationale = "running " + std::to_string(current_year - trial.start_year) +
                        " years without results";
        return out;
    }

    out.band = TrialBand::ongoing_in_reasonable_term;
    out.score_lo = 50;
    out.score_hi = 79;
    out.rationale = "in progress within the expected timeline";
    return out;
}

StageTaxonomy StageTaxonomy::builtin() {
    StageTaxonomy t;
    auto trial_stage = [](std::string name, std::set<int> phases, std::set<std::string> bands) {
        return StageRule{std::move(name), "trial", std::move(phases), std::move(bands)};
    };
    t.rules_.push_back({"approved", "approved", {}, {}});
    const std::set<std::string> stalled = {"ongoing_long_term_incomplete", "completed_no_result"};
    for (int phase = 4; phase >= 1; --phase) {
        const std::string p = std::to_string(phase);
        t.rules_.push_back(trial_stage("phase-" + p + "-positive", {phase}, {"positive_good"}));
        t.rules_.push_back(
            trial_stage("phase-" + p + "-active", {phase}, {"ongoing_in_reasonable_term"}));
        t.rules_.push_back(trial_stage("phase-" + p + "-stalled", {phase}, stalled));
    }
    t.rules_.push_back(trial_stage("trial-negative", {0, 1, 2, 3, 4}, {"negative_bad"}));
    t.rules_.push_back(trial_stage(
        "trial-unknown-phase", {0},
        {"positive_good", "ongoing_in_reasonable_term", "ongoing_long_term_incomplete",
         "completed_no_result"}));
    t.rules_.push_back({"preclinical-evidence", "preclinical", {}, {}});
    t.rules_.push_back({"insufficient-evidence", "none", {}, {}});
    t.validate();
    return t;
}

StageTaxonomy StageTaxonomy::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    StageTaxonomy t;
    try {
        if (j.at("format").get<std::string>() != "kgrx-stage-taxonomy")
            throw ValidationError(path + ": not a stage taxonomy file");
        if (j.at("version").get<int>() != 1)
            throw ValidationError(path + ": unsupported taxonomy version");
        for (const auto& s : j.at("stages")) {
            StageRule r;
            r.name = s.at("name").get<std::string>();
            r.kind = s.at("kind").get<std::string>();
            if (s.contains("phases"))
                for (int p : s.at("phases")) r.phases.insert(p);
            if (s.contains("bands"))
                for (const auto& b : s.at("bands"))
                    r.bands.insert(trial_band_name(trial_band_from_name(b.get<std::string>())));
            t.rules_.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    t.validate();
    return t;
}

void StageTaxonomy::validate() const {
    if (rules_.empty()) throw ValidationError("stage taxonomy has no rules");
    bool has_approved = false, has_preclinical = false, has_none = false;
    std::set<std::string> names;
    for (const StageRule& r : rules_) {
        if (r.name.empty()) throw ValidationError("stage with an empty name");
        if (!names.insert(r.name).second)
            throw ValidationError("duplicate stage name: " + r.name);
        if (r.kind == "approved")
            has_approved = true;
        else if (r.kind == "preclinical")
            has_preclinical = true;
        else if (r.kind == "none")
            has_none = true;
        else if (r.kind == "trial") {
            if (r.phases.empty() || r.bands.empty())
                throw ValidationError("trial stage " + r.name + " must list phases and bands");
            for (int p : r.phases)
                if (p < 0 || p > 4)
                    throw ValidationError("stage " + r.name + " has an out-of-range phase");
        } else {
            throw ValidationError("stage " + r.name + " has unknown kind " + r.kind);
        }
    }
    if (!has_approved || !has_preclinical || !has_none)
        throw ValidationError("taxonomy needs approved, preclinical and none stages");
    // Every (phase, band) pair must land somewhere.
    for (int phase = 0; phase <= 4; ++phase) {
        for (TrialBand band :
             {TrialBand::negative_bad, TrialBand::positive_good, TrialBand::completed_no_result,
              TrialBand::ongoing_long_term_incomplete, TrialBand::ongoing_in_reasonable_term}) {
            bool covered = false;
            for (const StageRule& r : rules_)
                if (r.kind == "trial" && r.phases.count(phase) &&
                    r.bands.count(trial_band_name(band))) {
                    covered = true;
                    break;
                }
            if (!covered)
                throw ValidationError("taxonomy leaves phase " + std::to_string(phase) +
                                      ", band " + trial_band_name(band) + " uncovered");
        }
    }
}

std::size_t StageTaxonomy::stage_index(bool approved_for_disease,
                                       const std::vector<std::pair<int, TrialBand>>& trials,
                                       bool has_preclinical_evidence) const {
    auto first_of_kind = [&](const std::string& kind) {
        for (std::size_t i = 0; i < rules_.size(); ++i)
            if (rules_[i].kind == kind) return i;
        throw ValidationError("taxonomy lacks a " + kind + " stage");  // unreachable post-validate
    };
    if (approved_for_disease) return first_of_kind("approved");
    std::size_t best = rules_.size();
    for (const auto& [phase, band] : trials) {
        for (std::size_t i = 0; i < rules_.size() && i < best; ++i) {
            const StageRule& r = rules_[i];
            if (r.kind == "trial" && r.phases.count(phase) && r.bands.count(trial_band_name(band))) {
                best = i;
                break;
            }
        }
    }
    if (best < rules_.size()) return best;
    return first_of_kind(has_preclinical_evidence ? "preclinical" : "none");
}

const std::string& StageTaxonomy::stage_name(std::size_t index) const {
    if (index >= rules_.size()) throw ValidationError("stage index out of range");
    return rules_[index].name;
}

std::string categorize_stage(const StageTaxonomy& taxonomy, bool approved_for_disease,
                             const std::vector<std::pair<int, TrialBand>>& trials,
                             bool has_preclinical_evidence) {
    return taxonomy.stage_name(
        taxonomy.stage_index(approved_for_disease, trials, has_preclinical_evidence));
}

EvidenceProfile assemble_profile(const Graph& graph, const ProfileInputs& in,
                                 const Providers& providers, const StageTaxonomy& taxonomy) {
    EvidenceProfile p;
    p.disease_id = in.disease_id;
    p.disease_name = in.disease_name.empty() ? in.disease_id : in.disease_name;
    p.drug_id = in.drug_id;
    p.drug_name = in.drug_name.empty() ? in.drug_id : in.drug_name;
    p.score_kge = in.score_kge;
    p.score_kgwe = in.score_kgwe;
    p.paths = in.paths;
    p.survival = in.survival;

    p.genes = select_genes(graph, p.drug_id, p.paths, in.signature, providers);

    // Pathway over-representation of the signature sides, with one pooled
    // BH correction across both sides' terms.
    if (in.signature && !providers.pathways.gene_sets().empty()) {
        const std::vector<std::string> up = in.signature->up_genes();
        const std::vector<std::string> down = in.signature->down_genes();
        std::set<std::string> universe = providers.pathways.all_genes();
        universe.insert(up.begin(), up.end());
        universe.insert(down.begin(), down.end());
        if (!up.empty())
            p.ora_up = ora({up.begin(), up.end()}, providers.pathways.gene_sets(), universe);
        if (!down.empty())
            p.ora_down = ora({down.begin(), down.end()}, providers.pathways.gene_sets(), universe);
        std::vector<double> pooled;
        for (const OraResult& r : p.ora_up) pooled.push_back(r.p);
        for (const OraResult& r : p.ora_down) pooled.push_back(r.p);
        if (!pooled.empty()) {
            const std::vector<double> fdr = bh_adjust(pooled);
            std::size_t k = 0;
            for (OraResult& r : p.ora_up) r.fdr = fdr[k++];
            for (OraResult& r : p.ora_down) r.fdr = fdr[k++];
        }
    } else if (!in.signature) {
        p.warnings.push_back("no perturbation signature available for " + p.drug_id);
    }

    for (const TrialMeta& t : providers.trials.trials(p.disease_id, p.drug_id)) {
        TrialAssessment a{t, trial_result_status(t, in.current_year)};
        if (parse_phase(t.phase) == 0)
            p.warnings.push_back("trial " + t.trial_id +
                                 " has no recognizable phase; using the longest patience window");
        p.trials.push_back(std::move(a));
    }

    const std::optional<LabelRecord> label = providers.labels.label(p.drug_id);
    if (label) {
        for (const auto& [section, text] : label->sections) {
            if (text.empty()) continue;
            p.flags.fda_approved_any = true;
            if (section == "indications_and_usage" &&
                canonical_name(text).find(canonical_name(p.disease_name)) != std::string::npos)
                p.fda_approved_for_disease = true;
        }
    }

    const std::vector<Snippet> pair_snips =
        providers.literature.pair_snippets(p.disease_id, p.drug_id);
    p.flags.disease_drug_clinical = !p.trials.empty() || p.fda_approved_for_disease;
    p.flags.disease_drug_preclinical =
        !p.flags.disease_drug_clinical && (!pair_snips.empty() || !p.paths.empty());

    std::size_t multi = 0;
    for (const GeneEvidence& g : p.genes)
        if (g.categories.size() >= 2) ++multi;
    p.flags.gene_strong = multi >= 3;
    p.flags.gene_limited = !p.flags.gene_strong && !p.genes.empty();

    bool significant = false, nominal = false;
    for (const OraResult& r : p.ora_up) {
        significant = significant || r.fdr < 0.05;
        nominal = nominal || r.p < 0.05;
    }
    for (const OraResult& r : p.ora_down) {
        significant = significant || r.fdr < 0.05;
        nominal = nominal || r.p < 0.05;
    }
    p.flags.pathway_significant = significant;
    p.flags.pathway_nominal = !significant && nominal;

    p.rubric = rule_score(p.flags);
    p.confidence = confidence_level(p.rubric.score);

    if (p.fda_approved_for_disease)
        p.fda_status = "FDA-approved for " + p.disease_name;
    else if (p.flags.fda_approved_any)
        p.fda_status = "FDA-approved for other indications but not for " + p.disease_name;
    else
        p.fda_status = "N/A";

    std::vector<std::pair<int, TrialBand>> banded;
    for (const TrialAssessment& a : p.trials)
        banded.emplace_back(parse_phase(a.trial.phase), a.banded.band);
    const bool preclinical_evidence = p.flags.disease_drug_preclinical || !p.genes.empty();
    p.development_stage_index =
        taxonomy.stage_index(p.fda_approved_for_disease, banded, preclinical_evidence);
    p.development_stage = taxonomy.stage_name(p.development_stage_index);

    if (p.survival) {
        for (const std::string& w : p.survival->warnings) p.warnings.push_back(w);
        if (!p.survival->ineligible_reason.empty())
            p.warnings.push_back("survival analysis unavailable: " + p.survival->ineligible_reason);
    }
    return p;
}

nlohmann::json profile_to_json(const EvidenceProfile& p) {
    nlohmann::json j;
    j["disease"] = {{"id", p.disease_id}, {"name", p.disease_name}};
    j["drug"] = {{"id", p.drug_id}, {"name", p.drug_name}};

    nlohmann::json scores;
    scores["kge"] = p.score_kge ? nlohmann::json(*p.score_kge) : nlohmann::json(nullptr);
    scores["kgwe"] = p.score_kgwe ? nlohmann::json(*p.score_kgwe) : nlohmann::json(nullptr);
    j["model_scores"] = std::move(scores);

    nlohmann::json paths = nlohmann::json::array();
    for (const ScoredPath& sp : p.paths) {
        nlohmann::json e;
        e["nodes"] = sp.path.nodes;
        std::vector<std::string> rels;
        for (const PathEdge& pe : sp.path.edges) rels.push_back(pe.triple.relation);
        e["relations"] = rels;
        e["score"] = sp.score;
        paths.push_back(std::move(e));
    }
    j["paths"] = std::move(paths);

    nlohmann::json genes = nlohmann::json::array();
    for (const GeneEvidence& g : p.genes) {
        nlohmann::json e;
        e["gene"] = g.gene;
        e["categories"] = std::vector<std::string>(g.categories.begin(), g.categories.end());
        e["details"] = g.details;
        genes.push_back(std::move(e));
    }
    j["genes"] = std::move(genes);

    auto ora_json = [](const std::vector<OraResult>& rs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const OraResult& r : rs)
            arr.push_back({{"term", r.term},
                           {"overlap", r.overlap},
                           {"term_size", r.term_size},
                           {"query_size", r.query_size},
                           {"p", r.p},
                           {"fdr", r.fdr},
                           {"genes", r.overlap_genes}});
        return arr;
    };
    j["pathways"] = {{"up", ora_json(p.ora_up)}, {"down", ora_json(p.ora_down)}};

    nlohmann::json trials = nlohmann::json::array();
    for (const TrialAssessment& a : p.trials) {
        trials.push_back({{"trial_id", a.trial.trial_id},
                          {"phase", a.trial.phase},
                          {"phase_parsed", parse_phase(a.trial.phase)},
                          {"status", a.trial.status},
                          {"band", trial_band_name(a.banded.band)},
                          {"score_range", {a.banded.score_lo, a.banded.score_hi}},
                          {"rationale", a.banded.rationale}});
    }
    j["trials"] = std::move(trials);

    j["flags"] = {{"disease_drug_clinical", p.flags.disease_drug_clinical},
                  {"disease_drug_preclinical", p.flags.disease_drug_preclinical},
                  {"gene_strong", p.flags.gene_strong},
                  {"gene_limited", p.flags.gene_limited},
                  {"pathway_significant", p.flags.pathway_significant},
                  {"pathway_nominal", p.flags.pathway_nominal},
                  {"fda_approved_any", p.flags.fda_approved_any},
                  {"fda_approved_for_disease", p.fda_approved_for_disease}};

    j["verdict"] = {{"overall_confidence_score", p.rubric.score},
                    {"overall_confidence_level", p.confidence},
                    {"FDA_status", p.fda_status},
                    {"development_stage", p.development_stage},
                    {"rationale_bullets", p.rubric.rationale}};

    if (p.survival) {
        const HazardOutcome& h = *p.survival;
        nlohmann::json s;
        s["eligible"] = h.fit.has_value();
        if (!h.ineligible_reason.empty()) s["reason"] = h.ineligible_reason;
        s["group_sizes"] = {{"high", h.cohort.high.size()}, {"low", h.cohort.low.size()}};
        if (h.fit) {
            s["hazard_ratio"] = h.fit->hazard_ratio;
            s["beta"] = h.fit->beta;
            s["se"] = h.fit->se;
            s["p"] = h.fit->p;
            s["n_events"] = h.fit->n_events;
            s["converged"] = h.fit->converged;
            auto km_json = [](const std::vector<std::pair<double, double>>& curve) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& [t, sv] : curve) arr.push_back({t, sv});
                return arr;
            };
            s["km_high"] = km_json(h.km_high);
            s["km_low"] = km_json(h.km_low);
        }
        j["survival"] = std::move(s);
    } else {
        j["survival"] = nullptr;
    }

    j["warnings"] = p.warnings;
    return j;
}

}  // namespace kgrx
