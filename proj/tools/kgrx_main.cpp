#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kgrx/encoder.hpp"
#include "kgrx/errors.hpp"
#include "kgrx/evidence.hpp"
#include "kgrx/graph.hpp"
#include "kgrx/hake.hpp"
#include "kgrx/paths.hpp"
#include "kgrx/pipeline.hpp"
#include "kgrx/signature.hpp"
#include "kgrx/stats.hpp"
#include "kgrx/survival.hpp"
#include "kgrx/text.hpp"

namespace {

using kgrx::Error;

// Minimal reader for the unquoted CSVs this tool writes.
std::vector<std::map<std::string, std::string>> read_csv(const std::string& path) {
    const std::vector<std::string> lines = kgrx::read_lines(path);
    if (lines.empty()) throw kgrx::ParseError(path + ": empty file");
    const std::vector<std::string> header = kgrx::split(lines[0], ',');
    std::vector<std::map<std::string, std::string>> rows;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::vector<std::string> cols = kgrx::split(lines[ln], ',');
        if (cols.size() != header.size())
            throw kgrx::ParseError(path + ":" + std::to_string(ln + 1) + ": ragged row");
        std::map<std::string, std::string> row;
        for (std::size_t c = 0; c < header.size(); ++c) row[header[c]] = cols[c];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string resolve_disease(const kgrx::Graph& g, const std::string& id, const std::string& text) {
    if (!id.empty()) {
        if (g.entity(id).kind != kgrx::EntityKind::disease)
            throw kgrx::ValidationError(id + " is not a disease entity");
        return id;
    }
    const kgrx::TrigramEncoder enc;
    const std::string resolved = kgrx::map_disease(g, text, enc);
    std::cerr << "resolved '" << text << "' to " << resolved << "\n";
    return resolved;
}

int run_ingest(const std::string& graph_path, const std::string& out_path) {
    const kgrx::Graph g = kgrx::Graph::load(graph_path);
    std::map<std::string, int> kinds;
    for (const kgrx::Entity& e : g.entities()) kinds[kgrx::kind_name(e.kind)] += 1;
    std::cout << "entities\t" << g.entities().size() << "\n";
    for (const auto& [kind, count] : kinds) std::cout << "  " << kind << "\t" << count << "\n";
    std::cout << "triples\t" << g.triples().size() << "\n";
    std::cout << "relations\t" << g.relations().size() << "\n";
    if (!out_path.empty()) {
        g.save(out_path);
        std::cout << "written\t" << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-graph drug repurposing pipeline"};
    app.require_subcommand(1);

    // ---- ingest ----
    auto* ingest = app.add_subcommand("ingest", "validate a triples file and report stats");
    std::string in_graph, in_out;
    ingest->add_option("--graph", in_graph, "triples TSV")->required();
    ingest->add_option("--out", in_out, "write the canonical form here");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "fit embeddings on a graph");
    std::string tr_graph, tr_out;
    kgrx::TrainConfig tr_cfg;
    train_cmd->add_option("--graph", tr_graph, "triples TSV")->required();
    train_cmd->add_option("--out", tr_out, "checkpoint path")->required();
    train_cmd->add_option("--dim", tr_cfg.dim, "embedding dimension");
    train_cmd->add_option("--epochs", tr_cfg.epochs, "training epochs");
    train_cmd->add_option("--batch-size", tr_cfg.batch_size, "positives per batch");
    train_cmd->add_option("--learning-rate", tr_cfg.learning_rate, "SGD step size");
    train_cmd->add_option("--negatives", tr_cfg.negatives_per_positive, "negatives per positive");
    train_cmd->add_option("--lambda", tr_cfg.lambda, "phase penalty weight");
    train_cmd->add_option("--gamma", tr_cfg.gamma, "loss margin");
    train_cmd->add_option("--seed", tr_cfg.seed, "random seed");
    train_cmd->add_flag("--weighted", tr_cfg.weighted, "learn literature-support weights");

    // ---- rank ----
    auto* rank_cmd = app.add_subcommand("rank", "rank drugs against a disease");
    std::string rk_graph, rk_ckpt, rk_disease, rk_text, rk_relation = "indication";
    int rk_topk = 100;
    rank_cmd->add_option("--graph", rk_graph, "triples TSV")->required();
    rank_cmd->add_option("--checkpoint", rk_ckpt, "model checkpoint")->required();
    rank_cmd->add_option("--disease", rk_disease, "disease entity id");
    rank_cmd->add_option("--disease-text", rk_text, "free-text disease name to resolve");
    rank_cmd->add_option("--relation", rk_relation, "relation to score");
    rank_cmd->add_option("--top-k", rk_topk, "rows to print (0 = all)");

    // ---- paths ----
    auto* paths_cmd = app.add_subcommand("paths", "explanatory paths for a pair");
    std::string pt_graph, pt_ckpt, pt_disease, pt_drug;
    kgrx::PathScoringConfig pt_cfg;
    std::vector<std::string> pt_exclude;
    paths_cmd->add_option("--graph", pt_graph, "triples TSV")->required();
    paths_cmd->add_option("--checkpoint", pt_ckpt, "model checkpoint")->required();
    paths_cmd->add_option("--disease", pt_disease, "disease entity id")->required();
    paths_cmd->add_option("--drug", pt_drug, "drug entity id")->required();
    paths_cmd->add_option("--mu", pt_cfg.mu, "distance mapped to 0.5");
    paths_cmd->add_option("--sigma", pt_cfg.sigma, "logistic width");
    paths_cmd->add_option("--max-paths", pt_cfg.max_paths, "paths to keep");
    paths_cmd->add_option("--exclude-relation", pt_exclude, "relations to skip while walking");

    // ---- signature ----
    auto* sig_cmd = app.add_subcommand("signature", "consensus signature for one drug");
    std::string sg_pert, sg_drug, sg_out;
    kgrx::SignatureConfig sg_cfg;
    sig_cmd->add_option("--perturbations", sg_pert, "perturbation TSV")->required();
    sig_cmd->add_option("--drug", sg_drug, "drug id")->required();
    sig_cmd->add_option("--out", sg_out, "signature JSON path")->required();
    sig_cmd->add_option("--alpha", sg_cfg.alpha, "dose share of the final score");
    sig_cmd->add_option("--k", sg_cfg.k, "dose decay exponent");
    sig_cmd->add_option("--top-n", sg_cfg.top_n, "genes kept per direction");

    // ---- survive ----
    auto* surv_cmd = app.add_subcommand("survive", "signature enrichment vs patient survival");
    std::string sv_expr, sv_surv, sv_sig, sv_out;
    kgrx::HazardConfig sv_cfg;
    surv_cmd->add_option("--expression", sv_expr, "expression matrix TSV")->required();
    surv_cmd->add_option("--survival", sv_surv, "survival TSV")->required();
    surv_cmd->add_option("--signature", sv_sig, "signature JSON")->required();
    surv_cmd->add_option("--tau", sv_cfg.tau, "enrichment rank exponent");
    surv_cmd->add_option("--min-group", sv_cfg.min_group, "minimum group size");
    surv_cmd->add_option("--min-events", sv_cfg.min_events, "minimum observed events");
    surv_cmd->add_option("--out", sv_out, "write the full outcome JSON here");

    // ---- score ----
    auto* score_cmd = app.add_subcommand("score", "assemble the evidence dossier for one pair");
    std::string sc_graph, sc_fixtures, sc_disease, sc_drug, sc_ckpt_plain, sc_ckpt_weighted;
    std::string sc_signature, sc_expr, sc_surv, sc_taxonomy, sc_out;
    int sc_year = 0;
    score_cmd->add_option("--graph", sc_graph, "triples TSV")->required();
    score_cmd->add_option("--fixtures", sc_fixtures, "evidence fixtures directory")->required();
    score_cmd->add_option("--disease", sc_disease, "disease entity id")->required();
    score_cmd->add_option("--drug", sc_drug, "drug entity id")->required();
    score_cmd->add_option("--current-year", sc_year, "reference year for trial banding")
        ->required();
    score_cmd->add_option("--checkpoint-plain", sc_ckpt_plain, "unweighted model checkpoint");
    score_cmd->add_option("--checkpoint-weighted", sc_ckpt_weighted, "weighted model checkpoint");
    score_cmd->add_option("--signature", sc_signature, "signature JSON for the drug");
    score_cmd->add_option("--expression", sc_expr, "expression matrix TSV");
    score_cmd->add_option("--survival", sc_surv, "survival TSV");
    score_cmd->add_option("--taxonomy", sc_taxonomy, "stage taxonomy JSON");
    score_cmd->add_option("--out", sc_out, "dossier path (stdout when omitted)");

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "full multi-disease pipeline");
    std::string rn_config, rn_out_dir;
    bool rn_serial = false;
    int rn_threads = -1;
    run_cmd->add_option("--config", rn_config, "run configuration JSON")->required();
    run_cmd->add_option("--out-dir", rn_out_dir, "override the configured output directory");
    run_cmd->add_option("--threads", rn_threads, "worker threads (0 = hardware)");
    run_cmd->add_flag("--serial", rn_serial, "single-threaded, for byte-identical reruns");

    // ---- eval-recall ----
    auto* recall_cmd = app.add_subcommand("eval-recall", "gold-standard recall of a finished run");
    std::string ev_run_dir, ev_benchmark;
    recall_cmd->add_option("--run-dir", ev_run_dir, "directory with ranked.csv")->required();
    recall_cmd->add_option("--benchmark", ev_benchmark, "benchmark TSV")->required();

    // ---- eval-survival ----
    auto* evsurv_cmd =
        app.add_subcommand("eval-survival", "confidence vs hazard alignment of a finished run");
    std::string es_run_dir;
    evsurv_cmd->add_option("--run-dir", es_run_dir, "directory with ranked.csv")->required();

    // ---- ablate ----
    auto* ablate_cmd = app.add_subcommand("ablate", "rerun scoring with evidence channels muted");
    std::string ab_config, ab_out_dir;
    std::vector<std::string> ab_drop;
    bool ab_serial = false;
    ablate_cmd->add_option("--config", ab_config, "run configuration JSON")->required();
    ablate_cmd
        ->add_option("--drop", ab_drop, "channels to mute: disease-drug, gene, pathway, fda")
        ->required();
    ablate_cmd->add_option("--out-dir", ab_out_dir, "override the configured output directory");
    ablate_cmd->add_flag("--serial", ab_serial, "single-threaded");

    // ---- subtype-pca ----
    auto* pca_cmd = app.add_subcommand("subtype-pca", "stage-composition projection of a run");
    std::string sp_run_dir, sp_taxonomy, sp_out;
    int sp_components = 2;
    pca_cmd->add_option("--run-dir", sp_run_dir, "directory with ranked.csv")->required();
    pca_cmd->add_option("--taxonomy", sp_taxonomy, "stage taxonomy JSON (built-in when omitted)");
    pca_cmd->add_option("--components", sp_components, "principal components to keep");
    pca_cmd->add_option("--out", sp_out, "CSV output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest) return run_ingest(in_graph, in_out);

        if (*train_cmd) {
            const kgrx::Graph g = kgrx::Graph::load(tr_graph);
            const kgrx::TrainResult result = kgrx::train(g, tr_cfg);
            kgrx::save_checkpoint(result, tr_out);
            std::cout << "entities\t" << result.params.entities.size() << "\n";
            std::cout << "relations\t" << result.params.relations.size() << "\n";
            if (!result.epoch_mean_loss.empty()) {
                std::printf("first_epoch_loss\t%.6f\n", result.epoch_mean_loss.front());
                std::printf("final_epoch_loss\t%.6f\n", result.epoch_mean_loss.back());
            }
            std::cout << "checkpoint\t" << tr_out << "\n";
            return 0;
        }

        if (*rank_cmd) {
            if (rk_disease.empty() == rk_text.empty())
                throw kgrx::ConfigError("pass exactly one of --disease / --disease-text");
            const kgrx::Graph g = kgrx::Graph::load(rk_graph);
            const kgrx::TrainResult ckpt = kgrx::load_checkpoint(rk_ckpt);
            const std::string disease = resolve_disease(g, rk_disease, rk_text);
            int rank = 0;
            for (const auto& [drug, score] :
                 kgrx::rank_drugs(ckpt.params, g, disease, rk_relation, rk_topk))
                std::printf("%d\t%s\t%.10g\n", ++rank, drug.c_str(), score);
            return 0;
        }

        if (*paths_cmd) {
            if (!pt_exclude.empty())
                pt_cfg.excluded_relations = {pt_exclude.begin(), pt_exclude.end()};
            const kgrx::Graph g = kgrx::Graph::load(pt_graph);
            const kgrx::TrainResult ckpt = kgrx::load_checkpoint(pt_ckpt);
            nlohmann::json out = nlohmann::json::array();
            for (const kgrx::ScoredPath& sp :
                 kgrx::build_subgraph(g, ckpt.params, pt_disease, pt_drug, pt_cfg)) {
                nlohmann::json e;
                e["nodes"] = sp.path.nodes;
                std::vector<std::string> rels;
                for (const kgrx::PathEdge& pe : sp.path.edges) rels.push_back(pe.triple.relation);
                e["relations"] = rels;
                e["score"] = sp.score;
                out.push_back(std::move(e));
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (*sig_cmd) {
            std::vector<kgrx::PerturbationRecord> mine;
            for (kgrx::PerturbationRecord& r : kgrx::load_perturbations(sg_pert))
                if (r.drug == sg_drug) mine.push_back(std::move(r));
            if (mine.empty())
                throw kgrx::NotFoundError("no perturbation records for drug " + sg_drug);
            const kgrx::DrugSignature sig = kgrx::build_signature(mine, sg_cfg);
            kgrx::save_signature(sig, sg_out);
            std::cout << "drug\t" << sig.drug << "\n";
            std::cout << "up_genes\t" << sig.up.size() << "\n";
            std::cout << "down_genes\t" << sig.down.size() << "\n";
            std::cout << "signature\t" << sg_out << "\n";
            return 0;
        }

        if (*surv_cmd) {
            const kgrx::ExpressionMatrix expr = kgrx::ExpressionMatrix::load(sv_expr);
            const std::vector<kgrx::SurvivalRecord> surv = kgrx::load_survival(sv_surv);
            const kgrx::DrugSignature sig = kgrx::load_signature(sv_sig);
            const kgrx::HazardOutcome outcome = kgrx::hazard_for_pair(expr, sig, surv, sv_cfg);
            for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
            if (outcome.fit) {
                std::printf("hazard_ratio\t%.10g\n", outcome.fit->hazard_ratio);
                std::printf("beta\t%.10g\n", outcome.fit->beta);
                std::printf("se\t%.10g\n", outcome.fit->se);
                std::printf("p\t%.10g\n", outcome.fit->p);
                std::printf("n_events\t%d\n", outcome.fit->n_events);
                std::printf("converged\t%s\n", outcome.fit->converged ? "true" : "false");
            } else {
                std::cout << "ineligible\t" << outcome.ineligible_reason << "\n";
            }
            // When the survival table carries a response label, report how
            // well the per-sample enrichment separates responders.
            if (!outcome.enrichment.nes.empty()) {
                std::vector<double> scores;
                std::vector<bool> labels;
                std::map<std::string, double> nes_by_sample;
                for (std::size_t i = 0; i < outcome.enrichment.samples.size(); ++i)
                    nes_by_sample[outcome.enrichment.samples[i]] = outcome.enrichment.nes[i];
                for (const kgrx::SurvivalRecord& r : surv) {
                    if (!r.response) continue;
                    auto it = nes_by_sample.find(r.sample);
                    if (it == nes_by_sample.end()) continue;
                    scores.push_back(it->second);
                    labels.push_back(*r.response != 0);
                }
                if (!scores.empty()) {
                    try {
                        std::printf("response_auc\t%.10g\n", kgrx::roc_auc(scores, labels, true));
                    } catch (const kgrx::DegenerateError& e) {
                        std::cerr << "warning: response labels unusable: " << e.what() << "\n";
                    }
                }
            }
            if (!sv_out.empty()) {
                nlohmann::json j;
                j["eligible"] = outcome.fit.has_value();
                if (!outcome.ineligible_reason.empty()) j["reason"] = outcome.ineligible_reason;
                j["samples"] = outcome.enrichment.samples;
                j["es_up"] = outcome.enrichment.es_up;
                j["es_down"] = outcome.enrichment.es_down;
                j["combined"] = outcome.enrichment.combined;
                j["nes"] = outcome.enrichment.nes;
                j["high"] = outcome.cohort.high;
                j["low"] = outcome.cohort.low;
                if (outcome.fit) {
                    j["fit"] = {{"hazard_ratio", outcome.fit->hazard_ratio},
                                {"beta", outcome.fit->beta},
                                {"se", outcome.fit->se},
                                {"p", outcome.fit->p},
                                {"n_events", outcome.fit->n_events},
                                {"converged", outcome.fit->converged}};
                }
                std::ofstream out(sv_out);
                if (!out) throw kgrx::DataError("cannot write " + sv_out);
                out << j.dump(2) << "\n";
            }
            return 0;
        }

        if (*score_cmd) {
            const kgrx::Graph g = kgrx::Graph::load(sc_graph);
            const kgrx::Providers providers = kgrx::Providers::load(sc_fixtures);
            const kgrx::StageTaxonomy taxonomy = sc_taxonomy.empty()
                                                     ? kgrx::StageTaxonomy::builtin()
                                                     : kgrx::StageTaxonomy::load(sc_taxonomy);
            kgrx::ProfileInputs in;
            in.disease_id = sc_disease;
            in.disease_name = g.entity(sc_disease).name;
            in.drug_id = sc_drug;
            in.drug_name = g.entity(sc_drug).name;
            in.current_year = sc_year;

            std::optional<kgrx::TrainResult> plain, weighted;
            if (!sc_ckpt_plain.empty()) plain = kgrx::load_checkpoint(sc_ckpt_plain);
            if (!sc_ckpt_weighted.empty()) weighted = kgrx::load_checkpoint(sc_ckpt_weighted);
            if (plain)
                in.score_kge = kgrx::score_triple(plain->params, sc_drug, "indication", sc_disease);
            if (weighted)
                in.score_kgwe =
                    kgrx::score_triple(weighted->params, sc_drug, "indication", sc_disease);
            const kgrx::TrainResult* path_model =
                weighted ? &*weighted : (plain ? &*plain : nullptr);
            if (path_model)
                in.paths = kgrx::build_subgraph(g, path_model->params, sc_disease, sc_drug,
                                                kgrx::PathScoringConfig{});

            std::optional<kgrx::DrugSignature> sig;
            if (!sc_signature.empty()) {
                sig = kgrx::load_signature(sc_signature);
                in.signature = &*sig;
            }
            if (!sc_expr.empty() && !sc_surv.empty() && sig) {
                const kgrx::ExpressionMatrix expr = kgrx::ExpressionMatrix::load(sc_expr);
                const std::vector<kgrx::SurvivalRecord> surv = kgrx::load_survival(sc_surv);
                in.survival = kgrx::hazard_for_pair(expr, *sig, surv, kgrx::HazardConfig{});
            }
            const kgrx::EvidenceProfile profile =
                kgrx::assemble_profile(g, in, providers, taxonomy);
            const nlohmann::json j = kgrx::profile_to_json(profile);
            if (sc_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream out(sc_out);
                if (!out) throw kgrx::DataError("cannot write " + sc_out);
                out << j.dump(2) << "\n";
            }
            return 0;
        }

        if (*run_cmd || *ablate_cmd) {
            const bool is_ablate = static_cast<bool>(*ablate_cmd);
            kgrx::RunConfig cfg = kgrx::RunConfig::load(is_ablate ? ab_config : rn_config);
            if (is_ablate) {
                for (const std::string& channel : ab_drop) {
                    const std::string c = kgrx::canonical_name(channel);
                    if (c == "disease-drug")
                        cfg.ablation.drop_disease_drug = true;
                    else if (c == "gene")
                        cfg.ablation.drop_gene = true;
                    else if (c == "pathway")
                        cfg.ablation.drop_pathway = true;
                    else if (c == "fda")
                        cfg.ablation.drop_fda = true;
                    else
                        throw kgrx::ConfigError("unknown ablation channel: " + channel);
                }
                if (!ab_out_dir.empty()) cfg.out_dir = ab_out_dir;
                if (ab_serial) cfg.threads = 1;
            } else {
                if (!rn_out_dir.empty()) cfg.out_dir = rn_out_dir;
                if (rn_serial)
                    cfg.threads = 1;
                else if (rn_threads >= 0)
                    cfg.threads = rn_threads;
            }
            const kgrx::RunOutcome outcome = kgrx::run_pipeline(cfg);
            for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
            std::size_t failed = 0;
            for (const kgrx::PairResult& p : outcome.pairs)
                if (!p.error.empty()) ++failed;
            std::cout << "pairs\t" << outcome.pairs.size() << "\n";
            std::cout << "failed\t" << failed << "\n";
            for (const auto& [disease, recall] : outcome.recall)
                std::printf("recall\t%s\t%.10g\n", disease.c_str(), recall);
            if (outcome.survival_alignment)
                std::printf("survival_alignment\trho=%.6f\tp=%.6g\tn=%d\n",
                            outcome.survival_alignment->rho, outcome.survival_alignment->p,
                            outcome.survival_alignment->n);
            std::cout << "out_dir\t" << cfg.out_dir << "\n";
            return outcome.partial ? 3 : 0;
        }

        if (*recall_cmd) {
            const auto rows = read_csv((std::filesystem::path(ev_run_dir) / "ranked.csv").string());
            const std::vector<kgrx::BenchmarkRow> benchmark = kgrx::load_benchmark(ev_benchmark);
            std::map<std::string, std::vector<std::string>> by_disease;
            for (const auto& row : rows)
                if (!row.at("confidence_score").empty())
                    by_disease[row.at("disease")].push_back(row.at("drug"));
            bool any = false;
            for (const auto& [disease, drugs] : by_disease) {
                bool has_gold = false;
                for (const kgrx::BenchmarkRow& b : benchmark)
                    if (b.disease_id == disease && kgrx::canonical_name(b.category) == "indication")
                        has_gold = true;
                if (!has_gold) continue;
                any = true;
                std::printf("%s\t%.10g\n", disease.c_str(),
                            kgrx::evaluate_recall(drugs, benchmark, disease));
            }
            if (!any) throw kgrx::DataError("no overlap between the run and the benchmark");
            return 0;
        }

        if (*evsurv_cmd) {
            const auto rows = read_csv((std::filesystem::path(es_run_dir) / "ranked.csv").string());
            std::vector<double> scores, hazards;
            for (const auto& row : rows) {
                if (row.at("confidence_score").empty() || row.at("hazard_ratio").empty()) continue;
                scores.push_back(kgrx::parse_double(row.at("confidence_score"), "ranked.csv"));
                hazards.push_back(kgrx::parse_double(row.at("hazard_ratio"), "ranked.csv"));
            }
            if (scores.size() < 3)
                throw kgrx::DataError("need at least three pairs with hazard ratios");
            const kgrx::SpearmanResult r = kgrx::spearman(scores, hazards);
            std::printf("rho\t%.10g\np\t%.10g\nn\t%d\n", r.rho, r.p, r.n);
            return 0;
        }

        if (*pca_cmd) {
            const auto rows = read_csv((std::filesystem::path(sp_run_dir) / "ranked.csv").string());
            const kgrx::StageTaxonomy taxonomy = sp_taxonomy.empty()
                                                     ? kgrx::StageTaxonomy::builtin()
                                                     : kgrx::StageTaxonomy::load(sp_taxonomy);
            std::vector<std::pair<std::string, std::string>> stage_rows;
            for (const auto& row : rows)
                if (!row.at("development_stage").empty())
                    stage_rows.emplace_back(row.at("disease"), row.at("development_stage"));
            const kgrx::SubtypeProjection sp =
                kgrx::subtype_profile(stage_rows, taxonomy, sp_components);
            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!sp_out.empty()) {
                file.open(sp_out);
                if (!file) throw kgrx::DataError("cannot write " + sp_out);
                os = &file;
            }
            *os << "disease";
            for (std::size_t c = 0; c < sp.components.components.size(); ++c)
                *os << ",pc" << (c + 1);
            *os << "\n";
            for (std::size_t r = 0; r < sp.diseases.size(); ++r) {
                *os << sp.diseases[r];
                for (std::size_t c = 0; c < sp.components.components.size(); ++c) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.10g", sp.components.projections[r][c]);
                    *os << ',' << buf;
                }
                *os << "\n";
            }
            for (std::size_t c = 0; c < sp.components.components.size(); ++c)
                std::fprintf(stderr, "pc%zu explained %.4f\n", c + 1,
                             sp.components.explained_variance[c]);
            return 0;
        }
    } catch (const kgrx::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
