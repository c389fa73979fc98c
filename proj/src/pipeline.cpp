#include "kgrx/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "kgrx/text.hpp"

namespace fs = std::filesystem;

namespace kgrx {

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    int t = threads;
    if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
    if (t <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), n);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// CSV cells are written unquoted, so strip the separators out of free text.
std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::string safe_filename(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                        c == '.';
        if (!ok) c = '_';
    }
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

std::string resolve(const fs::path& base, const std::string& p) {
    if (p.empty()) return p;
    fs::path path(p);
    if (path.is_absolute()) return path.string();
    return (base / path).lexically_normal().string();
}

}  // namespace

void apply_ablation(EvidenceProfile& profile, const AblationConfig& ablation) {
    EvidenceFlags f = profile.flags;
    if (ablation.drop_disease_drug) {
        f.disease_drug_clinical = false;
        f.disease_drug_preclinical = false;
    }
    if (ablation.drop_gene) {
        f.gene_strong = false;
        f.gene_limited = false;
    }
    if (ablation.drop_pathway) {
        f.pathway_significant = false;
        f.pathway_nominal = false;
    }
    if (ablation.drop_fda) f.fda_approved_any = false;
    profile.flags = f;
    profile.rubric = rule_score(f);
    profile.confidence = confidence_level(profile.rubric.score);
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    static const std::set<std::string> known = {
        "graph",          "checkpoint_plain", "checkpoint_weighted", "fixtures",
        "perturbations",  "survival_dir",     "benchmark",           "taxonomy",
        "out_dir",        "diseases",         "external_candidates", "indication_relation",
        "top_k_per_model", "current_year",    "with_survival",       "threads",
        "signature",      "path_scoring",     "hazard",              "ablation"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError(path + ": unknown config key '" + key + "'");

    RunConfig cfg;
    const fs::path base = fs::path(path).parent_path();
    try {
        cfg.graph_path = resolve(base, j.value("graph", std::string{}));
        cfg.checkpoint_plain = resolve(base, j.value("checkpoint_plain", std::string{}));
        cfg.checkpoint_weighted = resolve(base, j.value("checkpoint_weighted", std::string{}));
        cfg.fixtures_dir = resolve(base, j.value("fixtures", std::string{}));
        cfg.perturbations_path = resolve(base, j.value("perturbations", std::string{}));
        cfg.survival_dir = resolve(base, j.value("survival_dir", std::string{}));
        cfg.benchmark_path = resolve(base, j.value("benchmark", std::string{}));
        cfg.taxonomy_path = resolve(base, j.value("taxonomy", std::string{}));
        cfg.out_dir = resolve(base, j.value("out_dir", std::string{}));
        if (j.contains("diseases")) cfg.diseases = j.at("diseases").get<std::vector<std::string>>();
        if (j.contains("external_candidates"))
            cfg.external_candidates = j.at("external_candidates").get<std::vector<std::string>>();
        cfg.indication_relation = j.value("indication_relation", cfg.indication_relation);
        cfg.top_k_per_model = j.value("top_k_per_model", cfg.top_k_per_model);
        cfg.current_year = j.value("current_year", cfg.current_year);
        cfg.with_survival = j.value("with_survival", cfg.with_survival);
        cfg.threads = j.value("threads", cfg.threads);
        if (j.contains("signature")) {
            const auto& s = j.at("signature");
            cfg.signature.k = s.value("k", cfg.signature.k);
            cfg.signature.alpha = s.value("alpha", cfg.signature.alpha);
            cfg.signature.top_n = s.value("top_n", cfg.signature.top_n);
            cfg.signature.default_ic50_weight =
                s.value("default_ic50_weight", cfg.signature.default_ic50_weight);
        }
        if (j.contains("path_scoring")) {
            const auto& s = j.at("path_scoring");
            cfg.path_scoring.mu = s.value("mu", cfg.path_scoring.mu);
            cfg.path_scoring.sigma = s.value("sigma", cfg.path_scoring.sigma);
            cfg.path_scoring.max_paths = s.value("max_paths", cfg.path_scoring.max_paths);
            cfg.path_scoring.enumeration_cap =
                s.value("enumeration_cap", cfg.path_scoring.enumeration_cap);
            if (s.contains("excluded_relations")) {
                cfg.path_scoring.excluded_relations.clear();
                for (const auto& r : s.at("excluded_relations"))
                    cfg.path_scoring.excluded_relations.insert(r.get<std::string>());
            }
        }
        if (j.contains("hazard")) {
            const auto& s = j.at("hazard");
            cfg.hazard.tau = s.value("tau", cfg.hazard.tau);
            cfg.hazard.min_group = s.value("min_group", cfg.hazard.min_group);
            cfg.hazard.min_events = s.value("min_events", cfg.hazard.min_events);
        }
        if (j.contains("ablation")) {
            const auto& s = j.at("ablation");
            cfg.ablation.drop_disease_drug = s.value("drop_disease_drug", false);
            cfg.ablation.drop_gene = s.value("drop_gene", false);
            cfg.ablation.drop_pathway = s.value("drop_pathway", false);
            cfg.ablation.drop_fda = s.value("drop_fda", false);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

std::vector<BenchmarkRow> load_benchmark(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ParseError(path + ": empty file");
    std::vector<std::string> header = split(lines[0], '\t');
    for (std::string& h : header) h = canonical_name(h);
    const std::vector<std::string> expected = {"disease_id", "disease_name", "drug_name",
                                               "category"};
    if (header != expected)
        throw ParseError(path + ": header must be disease_id, disease_name, drug_name, category");
    std::vector<BenchmarkRow> out;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::vector<std::string> cols = split(lines[ln], '\t');
        if (cols.size() != 4)
            throw ParseError(path + ":" + std::to_string(ln + 1) + ": expected 4 columns");
        out.push_back({trim(cols[0]), trim(cols[1]), trim(cols[2]), trim(cols[3])});
    }
    return out;
}

CandidateSets generate_candidates(const Graph& g, const HakeParams& plain,
                                  const HakeParams& weighted, const std::string& disease,
                                  const std::string& relation, int top_k,
                                  const std::vector<std::string>& external) {
    CandidateSets out;
    for (const auto& [drug, score] : rank_drugs(plain, g, disease, relation, top_k))
        out.from_plain.insert(drug);
    for (const auto& [drug, score] : rank_drugs(weighted, g, disease, relation, top_k))
        out.from_weighted.insert(drug);
    for (const std::string& drug : external) {
        if (!g.has_entity(drug) || g.entity(drug).kind != EntityKind::drug)
            throw ValidationError("external candidate " + drug + " is not a drug in the graph");
        out.external.insert(drug);
    }
    std::set<std::string> pool = out.from_plain;
    pool.insert(out.from_weighted.begin(), out.from_weighted.end());
    pool.insert(out.external.begin(), out.external.end());
    out.pool.assign(pool.begin(), pool.end());
    return out;
}

double evaluate_recall(const std::vector<std::string>& retrieved_drugs,
                       const std::vector<BenchmarkRow>& benchmark, const std::string& disease_id) {
    std::vector<std::string> gold;
    for (const BenchmarkRow& row : benchmark)
        if (row.disease_id == disease_id && canonical_name(row.category) == "indication")
            gold.push_back(row.drug_name);
    if (gold.empty())
        throw ValidationError("benchmark has no indications for disease " + disease_id);
    return recall_at(retrieved_drugs, gold);
}

std::optional<SpearmanResult> evaluate_survival_alignment(const std::vector<PairResult>& pairs) {
    std::vector<double> scores, hazards;
    for (const PairResult& p : pairs) {
        if (!p.error.empty() || !p.profile.survival || !p.profile.survival->fit) continue;
        scores.push_back(static_cast<double>(p.profile.rubric.score));
        hazards.push_back(p.profile.survival->fit->hazard_ratio);
    }
    if (scores.size() < 3) return std::nullopt;
    try {
        return spearman(scores, hazards);
    } catch (const DegenerateError&) {
        return std::nullopt;
    }
}

SubtypeProjection subtype_profile(const std::vector<std::pair<std::string, std::string>>& rows,
                                  const StageTaxonomy& taxonomy, int n_components) {
    SubtypeProjection out;
    for (const StageRule& r : taxonomy.rules()) out.stages.push_back(r.name);
    std::map<std::string, std::size_t> stage_col;
    for (std::size_t i = 0; i < out.stages.size(); ++i) stage_col[out.stages[i]] = i;

    std::map<std::string, std::vector<double>> counts;
    for (const auto& [disease, stage] : rows) {
        auto it = stage_col.find(stage);
        if (it == stage_col.end()) throw ValidationError("unknown stage in rows: " + stage);
        auto [slot, inserted] = counts.try_emplace(disease, out.stages.size(), 0.0);
        slot->second[it->second] += 1.0;
    }
    if (counts.size() < 2)
        throw DegenerateError("subtype projection needs at least two diseases");
    for (auto& [disease, vec] : counts) {
        double total = 0;
        for (double v : vec) total += v;
        for (double& v : vec) v /= total;
        out.diseases.push_back(disease);
        out.fractions.push_back(vec);
    }
    out.components = pca(out.fractions, n_components);
    return out;
}

namespace {

struct DiseaseData {
    std::optional<ExpressionMatrix> expr;
    std::vector<SurvivalRecord> surv;
};

void write_ranked_csv(const fs::path& path, const std::vector<const PairResult*>& ordered) {
    std::ofstream out = open_out(path);
    out << "disease,drug,confidence_score,confidence_level,development_stage,score_plain,"
           "score_weighted,hazard_ratio,hazard_p,fda_status,error\n";
    for (const PairResult* p : ordered) {
        out << csv_safe(p->disease) << ',' << csv_safe(p->drug) << ',';
        if (p->error.empty()) {
            const EvidenceProfile& pr = p->profile;
            out << pr.rubric.score << ',' << csv_safe(pr.confidence) << ','
                << csv_safe(pr.development_stage) << ','
                << (pr.score_kge ? fmt_double(*pr.score_kge) : std::string{}) << ','
                << (pr.score_kgwe ? fmt_double(*pr.score_kgwe) : std::string{}) << ',';
            if (pr.survival && pr.survival->fit)
                out << fmt_double(pr.survival->fit->hazard_ratio) << ','
                    << fmt_double(pr.survival->fit->p) << ',';
            else
                out << ",,";
            out << csv_safe(pr.fda_status) << ',' << '\n';
        } else {
            out << ",,,,,,,," << csv_safe(p->error) << '\n';
        }
    }
}

}  // namespace

RunOutcome run_pipeline(const RunConfig& cfg) {
    if (cfg.graph_path.empty()) throw ConfigError("config needs a graph path");
    if (cfg.checkpoint_plain.empty() || cfg.checkpoint_weighted.empty())
        throw ConfigError("config needs both model checkpoints");
    if (cfg.fixtures_dir.empty()) throw ConfigError("config needs a fixtures directory");
    if (cfg.out_dir.empty()) throw ConfigError("config needs an output directory");
    if (cfg.diseases.empty()) throw ConfigError("config lists no diseases");
    if (cfg.current_year <= 0) throw ConfigError("config needs current_year");
    {
        std::set<std::string> unique(cfg.diseases.begin(), cfg.diseases.end());
        if (unique.size() != cfg.diseases.size())
            throw ConfigError("config lists a disease twice");
    }

    const Graph g = Graph::load(cfg.graph_path);
    const TrainResult plain = load_checkpoint(cfg.checkpoint_plain);
    const TrainResult weighted = load_checkpoint(cfg.checkpoint_weighted);
    const Providers providers = Providers::load(cfg.fixtures_dir);
    const StageTaxonomy taxonomy = cfg.taxonomy_path.empty()
                                       ? StageTaxonomy::builtin()
                                       : StageTaxonomy::load(cfg.taxonomy_path);

    RunOutcome outcome;

    std::map<std::string, DrugSignature> signatures;
    if (!cfg.perturbations_path.empty()) {
        std::map<std::string, std::vector<PerturbationRecord>> by_drug;
        for (PerturbationRecord& r : load_perturbations(cfg.perturbations_path))
            by_drug[r.drug].push_back(std::move(r));
        for (const auto& [drug, records] : by_drug)
            signatures.emplace(drug, build_signature(records, cfg.signature));
    }

    std::map<std::string, DiseaseData> disease_data;
    for (const std::string& disease : cfg.diseases) {
        if (g.entity(disease).kind != EntityKind::disease)
            throw ValidationError(disease + " is not a disease entity");
        DiseaseData data;
        if (cfg.with_survival && !cfg.survival_dir.empty()) {
            const fs::path expr_path = fs::path(cfg.survival_dir) / (disease + ".expr.tsv");
            const fs::path surv_path = fs::path(cfg.survival_dir) / (disease + ".surv.tsv");
            const bool has_expr = fs::exists(expr_path);
            const bool has_surv = fs::exists(surv_path);
            if (has_expr && has_surv) {
                data.expr = ExpressionMatrix::load(expr_path.string());
                data.surv = load_survival(surv_path.string());
            } else if (has_expr != has_surv) {
                outcome.warnings.push_back("survival data for " + disease +
                                           " is incomplete; skipping its hazard analysis");
            }
        }
        disease_data.emplace(disease, std::move(data));
    }

    for (const std::string& disease : cfg.diseases)
        outcome.candidates.emplace(
            disease, generate_candidates(g, plain.params, weighted.params, disease,
                                         cfg.indication_relation, cfg.top_k_per_model,
                                         cfg.external_candidates));

    struct Task {
        std::string disease;
        std::string drug;
    };
    std::vector<Task> tasks;
    for (const std::string& disease : cfg.diseases)
        for (const std::string& drug : outcome.candidates.at(disease).pool)
            tasks.push_back({disease, drug});

    outcome.pairs.resize(tasks.size());
    parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
        const Task& t = tasks[i];
        PairResult r;
        r.disease = t.disease;
        r.drug = t.drug;
        const CandidateSets& sets = outcome.candidates.at(t.disease);
        r.from_plain = sets.from_plain.count(t.drug) > 0;
        r.from_weighted = sets.from_weighted.count(t.drug) > 0;
        r.is_external = sets.external.count(t.drug) > 0;
        try {
            ProfileInputs in;
            in.disease_id = t.disease;
            in.disease_name = g.entity(t.disease).name;
            in.drug_id = t.drug;
            in.drug_name = g.entity(t.drug).name;
            in.current_year = cfg.current_year;
            in.score_kge = score_triple(plain.params, t.drug, cfg.indication_relation, t.disease);
            in.score_kgwe =
                score_triple(weighted.params, t.drug, cfg.indication_relation, t.disease);
            in.paths = build_subgraph(g, weighted.params, t.disease, t.drug, cfg.path_scoring);
            auto sig_it = signatures.find(t.drug);
            const DrugSignature* sig = sig_it == signatures.end() ? nullptr : &sig_it->second;
            in.signature = sig;
            const DiseaseData& data = disease_data.at(t.disease);
            if (data.expr && sig)
                in.survival = hazard_for_pair(*data.expr, *sig, data.surv, cfg.hazard);
            r.profile = assemble_profile(g, in, providers, taxonomy);
            apply_ablation(r.profile, cfg.ablation);
        } catch (const Error& e) {
            r.error = e.what();
        }
        outcome.pairs[i] = std::move(r);
    });

    for (const PairResult& p : outcome.pairs)
        if (!p.error.empty()) outcome.partial = true;

    std::vector<BenchmarkRow> benchmark;
    if (!cfg.benchmark_path.empty()) {
        benchmark = load_benchmark(cfg.benchmark_path);
        for (const std::string& disease : cfg.diseases) {
            bool has_gold = false;
            for (const BenchmarkRow& row : benchmark)
                if (row.disease_id == disease && canonical_name(row.category) == "indication")
                    has_gold = true;
            if (!has_gold) {
                outcome.warnings.push_back("benchmark lists no indications for " + disease);
                continue;
            }
            outcome.recall[disease] =
                evaluate_recall(outcome.candidates.at(disease).pool, benchmark, disease);
        }
    }

    outcome.survival_alignment = evaluate_survival_alignment(outcome.pairs);

    std::vector<std::pair<std::string, std::string>> stage_rows;
    {
        std::set<std::string> diseases_with_results;
        for (const PairResult& p : outcome.pairs)
            if (p.error.empty()) {
                stage_rows.emplace_back(p.disease, p.profile.development_stage);
                diseases_with_results.insert(p.disease);
            }
        if (diseases_with_results.size() >= 2) {
            const int n_comp =
                std::min<int>(2, static_cast<int>(taxonomy.rules().size()));
            outcome.subtypes = subtype_profile(stage_rows, taxonomy, n_comp);
        }
    }

    // ---- report files ----
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir / "dossiers");
    fs::create_directories(out_dir / "figures");

    std::vector<const PairResult*> ordered;
    for (const PairResult& p : outcome.pairs) ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(), [](const PairResult* a, const PairResult* b) {
        if (a->disease != b->disease) return a->disease < b->disease;
        const int sa = a->error.empty() ? a->profile.rubric.score : -1;
        const int sb = b->error.empty() ? b->profile.rubric.score : -1;
        if (sa != sb) return sa > sb;
        return a->drug < b->drug;
    });
    write_ranked_csv(out_dir / "ranked.csv", ordered);

    for (const PairResult& p : outcome.pairs) {
        if (!p.error.empty()) continue;
        const fs::path path = out_dir / "dossiers" /
                              (safe_filename(p.disease) + "__" + safe_filename(p.drug) + ".json");
        std::ofstream out = open_out(path);
        out << profile_to_json(p.profile).dump(2) << '\n';
    }

    {
        std::ofstream out = open_out(out_dir / "figures" / "recall_by_disease.csv");
        out << "disease,n_gold,n_pool,recall\n";
        for (const std::string& disease : cfg.diseases) {
            auto it = outcome.recall.find(disease);
            if (it == outcome.recall.end()) continue;
            std::size_t n_gold = 0;
            for (const BenchmarkRow& row : benchmark)
                if (row.disease_id == disease && canonical_name(row.category) == "indication")
                    ++n_gold;
            out << csv_safe(disease) << ',' << n_gold << ','
                << outcome.candidates.at(disease).pool.size() << ',' << fmt_double(it->second)
                << '\n';
        }
    }

    {
        std::ofstream out = open_out(out_dir / "figures" / "candidate_overlap.csv");
        out << "disease,region,count\n";
        for (const std::string& disease : cfg.diseases) {
            const CandidateSets& s = outcome.candidates.at(disease);
            std::map<std::string, int> region_counts = {
                {"plain_only", 0},    {"weighted_only", 0},    {"external_only", 0},
                {"plain_weighted", 0}, {"plain_external", 0},  {"weighted_external", 0},
                {"all_three", 0}};
            for (const std::string& drug : s.pool) {
                const bool a = s.from_plain.count(drug) > 0;
                const bool b = s.from_weighted.count(drug) > 0;
                const bool c = s.external.count(drug) > 0;
                std::string region;
                if (a && b && c)
                    region = "all_three";
                else if (a && b)
                    region = "plain_weighted";
                else if (a && c)
                    region = "plain_external";
                else if (b && c)
                    region = "weighted_external";
                else if (a)
                    region = "plain_only";
                else if (b)
                    region = "weighted_only";
                else
                    region = "external_only";
                region_counts[region] += 1;
            }
            for (const auto& [region, count] : region_counts)
                out << csv_safe(disease) << ',' << region << ',' << count << '\n';
        }
    }

    {
        std::ofstream out = open_out(out_dir / "figures" / "score_vs_hazard.csv");
        out << "disease,drug,confidence_score,hazard_ratio,hazard_p\n";
        for (const PairResult* p : ordered) {
            if (!p->error.empty() || !p->profile.survival || !p->profile.survival->fit) continue;
            out << csv_safe(p->disease) << ',' << csv_safe(p->drug) << ','
                << p->profile.rubric.score << ','
                << fmt_double(p->profile.survival->fit->hazard_ratio) << ','
                << fmt_double(p->profile.survival->fit->p) << '\n';
        }
    }

    {
        std::ofstream out = open_out(out_dir / "figures" / "ablation_deltas.csv");
        out << "disease,drug,full_score,without_disease_drug,without_gene,without_pathway,"
               "without_fda\n";
        for (const PairResult* p : ordered) {
            if (!p->error.empty()) continue;
            auto masked = [&](const AblationConfig& a) {
                EvidenceProfile copy = p->profile;
                apply_ablation(copy, a);
                return copy.rubric.score;
            };
            AblationConfig dd, dg, dp, df;
            dd.drop_disease_drug = true;
            dg.drop_gene = true;
            dp.drop_pathway = true;
            df.drop_fda = true;
            out << csv_safe(p->disease) << ',' << csv_safe(p->drug) << ','
                << p->profile.rubric.score << ',' << masked(dd) << ',' << masked(dg) << ','
                << masked(dp) << ',' << masked(df) << '\n';
        }
    }

    {
        std::ofstream out = open_out(out_dir / "figures" / "subtype_projection.csv");
        if (outcome.subtypes) {
            const SubtypeProjection& sp = *outcome.subtypes;
            const std::size_t k = sp.components.components.size();
            out << "disease";
            for (std::size_t c = 0; c < k; ++c) out << ",pc" << (c + 1);
            out << '\n';
            for (std::size_t r = 0; r < sp.diseases.size(); ++r) {
                out << csv_safe(sp.diseases[r]);
                for (std::size_t c = 0; c < k; ++c)
                    out << ',' << fmt_double(sp.components.projections[r][c]);
                out << '\n';
            }
        } else {
            out << "disease\n";
        }
    }

    {
        nlohmann::json summary;
        summary["current_year"] = cfg.current_year;
        summary["partial"] = outcome.partial;
        summary["pairs_total"] = outcome.pairs.size();
        std::size_t failed = 0;
        for (const PairResult& p : outcome.pairs)
            if (!p.error.empty()) ++failed;
        summary["pairs_failed"] = failed;
        nlohmann::json diseases = nlohmann::json::object();
        for (const std::string& disease : cfg.diseases) {
            const CandidateSets& s = outcome.candidates.at(disease);
            nlohmann::json d;
            d["candidates"] = s.pool.size();
            d["from_plain"] = s.from_plain.size();
            d["from_weighted"] = s.from_weighted.size();
            d["external"] = s.external.size();
            if (auto it = outcome.recall.find(disease); it != outcome.recall.end())
                d["recall"] = it->second;
            diseases[disease] = std::move(d);
        }
        summary["diseases"] = std::move(diseases);
        if (outcome.survival_alignment) {
            summary["survival_alignment"] = {{"rho", outcome.survival_alignment->rho},
                                             {"p", outcome.survival_alignment->p},
                                             {"n", outcome.survival_alignment->n}};
        } else {
            summary["survival_alignment"] = nullptr;
        }
        summary["warnings"] = outcome.warnings;
        std::ofstream out = open_out(out_dir / "run_summary.json");
        out << summary.dump(2) << '\n';
    }

    return outcome;
}

}  // namespace kgrx
