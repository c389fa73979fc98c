#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "kgrx/errors.hpp"
#include "kgrx/rng.hpp"
#include "kgrx/signature.hpp"

using namespace kgrx;

namespace {

PerturbationRecord rec(const std::string& gene, Direction dir, double dose_um,
                       std::optional<double> ic50) {
    PerturbationRecord r;
    r.drug = "drugX";
    r.signature_id = "sig1";
    r.gene = gene;
    r.direction = dir;
    r.dose_value = dose_um;
    r.dose_unit = DoseUnit::micromolar;
    r.ic50_um = ic50;
    return r;
}

// Reference signature builder: group records by gene, average the weights by
// direction, normalize by the per-drug maxima, blend, sort. Written against
// the header's prose, not the library code.
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
            const double w_dose = std::pow(1.0 + um, -cfg.k);
            ic50_num += sign * w_ic50;
            dose_num += sign * w_dose;
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
        if (std::fabs(a.score) != std::fabs(b.score)) return std::fabs(a.score) > std::fabs(b.score);
        return a.gene < b.gene;
    };
    std::sort(sig.up.begin(), sig.up.end(), by_magnitude);
    std::sort(sig.down.begin(), sig.down.end(), by_magnitude);
    const std::size_t cap = static_cast<std::size_t>(cfg.top_n);
    if (sig.up.size() > cap) sig.up.resize(cap);
    if (sig.down.size() > cap) sig.down.resize(cap);
    return sig;
}

}  // namespace

TEST_CASE("dose conversion normalizes every unit to micromolar") {
    CHECK(convert_dose_to_micromolar(500.0, DoseUnit::nanomolar) == doctest::Approx(0.5));
    CHECK(convert_dose_to_micromolar(2.5, DoseUnit::micromolar) == doctest::Approx(2.5));
    CHECK(convert_dose_to_micromolar(0.003, DoseUnit::millimolar) == doctest::Approx(3.0));
}

TEST_CASE("potency and dose weights reproduce hand-computed anchors") {
    const SignatureConfig cfg;
    CHECK(ic50_weight(4.0, cfg) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ic50_weight(0.5, cfg) == doctest::Approx(1.0).epsilon(1e-12));  // capped at 1
    CHECK(ic50_weight(1.0, cfg) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ic50_weight(std::nullopt, cfg) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(ic50_weight(0.0, cfg), ValidationError);
    CHECK_THROWS_AS(ic50_weight(-3.0, cfg), ValidationError);

    CHECK(dose_weight(std::exp(2.0) - 1.0, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(dose_weight(0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dose_weight(3.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(dose_weight(-1.0, 0.5), ValidationError);
}

TEST_CASE("direction parsing is case-insensitive and strict") {
    CHECK(parse_direction("up") == Direction::up);
    CHECK(parse_direction("DOWN") == Direction::down);
    CHECK_THROWS_AS(parse_direction("sideways"), ParseError);
    CHECK(parse_dose_unit("nM") == DoseUnit::nanomolar);
    CHECK(parse_dose_unit("um") == DoseUnit::micromolar);
    CHECK(parse_dose_unit("mM") == DoseUnit::millimolar);
    CHECK_THROWS_AS(parse_dose_unit("kg"), ParseError);
}

TEST_CASE("gene aggregation averages signed weights over all calls") {
    const SignatureConfig cfg;
    // Two up calls and one down call for the same gene.
    const std::vector<PerturbationRecord> records = {
        rec("g1", Direction::up, 0.0, 4.0),       // ic50 w=0.25, dose w=1
        rec("g1", Direction::up, 3.0, std::nullopt),   // ic50 w=0.5,  dose w=0.5
        rec("g1", Direction::down, 8.0, 2.0),     // ic50 w=0.5,  dose w=1/3
    };
    const GeneAggregate agg = aggregate_gene("g1", records, cfg);
    CHECK(agg.n_up == 2);
    CHECK(agg.n_down == 1);
    CHECK(agg.ic50_score == doctest::Approx((0.25 + 0.5 - 0.5) / 3.0).epsilon(1e-12));
    CHECK(agg.dose_score == doctest::Approx((1.0 + 0.5 - 1.0 / 3.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("final score blends the normalized components") {
    SignatureConfig cfg;
    cfg.alpha = 0.2;
    GeneAggregate agg;
    agg.ic50_score = 0.3;
    agg.dose_score = -0.1;
    ScoreNormalizer norm{0.6, 0.4};
    const double want = 0.2 * (-0.1 / 0.4) + 0.8 * (0.3 / 0.6);
    CHECK(final_score(agg, norm, cfg) == doctest::Approx(want).epsilon(1e-12));
    // Zero maxima leave the components unscaled.
    ScoreNormalizer zero{0.0, 0.0};
    CHECK(final_score(agg, zero, cfg) == doctest::Approx(0.2 * -0.1 + 0.8 * 0.3).epsilon(1e-12));
}

TEST_CASE("build_signature equals the reference implementation on random inputs") {
    Rng rng(97);
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
        REQUIRE(got.up.size() == want.up.size());
        REQUIRE(got.down.size() == want.down.size());
        for (std::size_t i = 0; i < got.up.size(); ++i) {
            CHECK(got.up[i].gene == want.up[i].gene);
            CHECK(got.up[i].score == want.up[i].score);  // bit-identical arithmetic order
        }
        for (std::size_t i = 0; i < got.down.size(); ++i) {
            CHECK(got.down[i].gene == want.down[i].gene);
            CHECK(got.down[i].score == want.down[i].score);
        }
        for (const ScoredGene& s : got.up) CHECK(s.score > 0.0);
        for (const ScoredGene& s : got.down) CHECK(s.score < 0.0);
    }
}

TEST_CASE("signatures reject mixed drugs and empty input") {
    const SignatureConfig cfg;
    std::vector<PerturbationRecord> records = {rec("g1", Direction::up, 1.0, 1.0)};
    records.push_back(records[0]);
    records[1].drug = "other";
    CHECK_THROWS_AS(build_signature(records, cfg), ValidationError);
    CHECK_THROWS_AS(build_signature({}, cfg), ValidationError);
}

TEST_CASE("perturbation files parse their documented shape") {
    const auto path = std::filesystem::temp_directory_path() / "kgrx_pert.tsv";
    {
        std::ofstream out(path);
        out << "drug\tsignature_id\tgene\tdirection\tdose_value\tdose_unit\tic50_um\n";
        out << "d1\ts1\tg1\tup\t500\tnM\t4.0\n";
        out << "d1\ts1\tg2\tdown\t2\tuM\tNA\n";
        out << "d1\ts2\tg3\tUP\t0.001\tmM\t\n";
    }
    const std::vector<PerturbationRecord> records = load_perturbations(path.string());
    REQUIRE(records.size() == 3);
    CHECK(records[0].drug == "d1");
    CHECK(records[0].ic50_um == 4.0);
    CHECK(records[0].dose_unit == DoseUnit::nanomolar);
    CHECK_FALSE(records[1].ic50_um.has_value());
    CHECK(records[1].direction == Direction::down);
    CHECK_FALSE(records[2].ic50_um.has_value());
    CHECK(records[2].dose_unit == DoseUnit::millimolar);

    const auto bad = std::filesystem::temp_directory_path() / "kgrx_pert_bad.tsv";
    {
        std::ofstream out(bad);
        out << "drug\tgene\n";
    }
    CHECK_THROWS_AS(load_perturbations(bad.string()), ParseError);
    CHECK_THROWS_AS(load_perturbations("/nonexistent/pert.tsv"), ParseError);
}

TEST_CASE("signature JSON round-trips") {
    DrugSignature sig;
    sig.drug = "drugZ";
    sig.up = {{"g1", 0.9}, {"g2", 0.25}};
    sig.down = {{"g3", -0.7}};
    const auto path = std::filesystem::temp_directory_path() / "kgrx_sig.json";
    save_signature(sig, path.string());
    const DrugSignature back = load_signature(path.string());
    CHECK(back.drug == sig.drug);
    REQUIRE(back.up.size() == 2);
    REQUIRE(back.down.size() == 1);
    CHECK(back.up[0].gene == "g1");
    CHECK(back.up[0].score == 0.9);
    CHECK(back.up[1].score == 0.25);
    CHECK(back.down[0].score == -0.7);
    CHECK(back.up_genes() == std::vector<std::string>{"g1", "g2"});
    CHECK(back.down_genes() == std::vector<std::string>{"g3"});
}
