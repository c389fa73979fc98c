#include "kgrx/survival.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "kgrx/text.hpp"

namespace kgrx {

namespace {

// 1-based ranks, ascending by value, ties replaced by their average rank.
std::vector<double> average_ranks_of(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

struct Subject {
    double time;
    bool event;
    int x;  // 1 = high group
};

std::unordered_map<std::string, const SurvivalRecord*> index_records(
    const std::vector<SurvivalRecord>& surv) {
    std::unordered_map<std::string, const SurvivalRecord*> by_sample;
    for (const SurvivalRecord& r : surv) {
        if (!by_sample.emplace(r.sample, &r).second)
            throw ValidationError("duplicate survival record for sample " + r.sample);
    }
    return by_sample;
}

const SurvivalRecord& record_for(
    const std::unordered_map<std::string, const SurvivalRecord*>& by_sample,
    const std::string& sample) {
    auto it = by_sample.find(sample);
    if (it == by_sample.end()) throw NotFoundError("no survival record for sample " + sample);
    return *it->second;
}

// Breslow partial-likelihood score and information for the binary covariate.
struct ScoreInfo {
    double score = 0;  // dl/dbeta
    double info = 0;   // -d2l/dbeta2
};

ScoreInfo cox_score_info(const std::vector<Subject>& subjects, double beta) {
    // Distinct event times, ascending, with suffix risk-set counts.
    std::vector<std::size_t> order(subjects.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return subjects[a].time < subjects[b].time;
    });

    const double eb = std::exp(beta);
    ScoreInfo out;
    // Walk times descending, growing the risk set as we go.
    double n1 = 0, n0 = 0;
    std::size_t i = order.size();
    while (i > 0) {
        const double t = subjects[order[i - 1]].time;
        double d = 0, d1 = 0;
        while (i > 0 && subjects[order[i - 1]].time == t) {
            const Subject& s = subjects[order[i - 1]];
            if (s.x == 1)
                n1 += 1;
            else
                n0 += 1;
            if (s.event) {
                d += 1;
                if (s.x == 1) d1 += 1;
            }
            --i;
        }
        if (d > 0) {
            const double denom = n0 + n1 * eb;
            out.score += d1 - d * (n1 * eb) / denom;
            out.info += d * (n1 * eb * n0) / (denom * denom);
        }
    }
    return out;
}

}  // namespace

ExpressionMatrix ExpressionMatrix::load(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ParseError(path + ": empty file");
    std::vector<std::string> header = split(lines[0], '\t');
    if (header.size() < 2 || canonical_name(header[0]) != "gene")
        throw ParseError(path + ": header must be 'gene' followed by sample ids");
    ExpressionMatrix m;
    std::unordered_set<std::string> seen_samples;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string s = trim(header[c]);
        if (s.empty()) throw ParseError(path + ": empty sample id in header");
        if (!seen_samples.insert(s).second) throw ValidationError(path + ": duplicate sample " + s);
        m.samples.push_back(s);
    }
    std::unordered_set<std::string> seen_genes;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::string where = path + ":" + std::to_string(ln + 1);
        const std::vector<std::string> cols = split(lines[ln], '\t');
        if (cols.size() != header.size())
            throw ParseError(where + ": expected " + std::to_string(header.size()) + " columns");
        const std::string gene = trim(cols[0]);
        if (gene.empty()) throw ParseError(where + ": empty gene id");
        if (!seen_genes.insert(gene).second)
            throw ValidationError(where + ": duplicate gene " + gene);
        m.genes.push_back(gene);
        for (std::size_t c = 1; c < cols.size(); ++c)
            m.values.push_back(parse_double(cols[c], where));
    }
    if (m.genes.empty()) throw ParseError(path + ": no expression rows");
    return m;
}

std::vector<SurvivalRecord> load_survival(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) throw ParseError(path + ": empty file");
    std::vector<std::string> header = split(lines[0], '\t');
    for (std::string& h : header) h = canonical_name(h);
    const bool with_response = header.size() == 4 && header[3] == "response";
    if (!(header.size() == 3 || with_response) || header[0] != "sample" ||
        header[1] != "time_days" || header[2] != "event")
        throw ParseError(path + ": header must be sample, time_days, event[, response]");

    std::vector<SurvivalRecord> out;
    std::unordered_set<std::string> seen;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::string where = path + ":" + std::to_string(ln + 1);
        const std::vector<std::string> cols = split(lines[ln], '\t');
        if (cols.size() != header.size())
            throw ParseError(where + ": expected " + std::to_string(header.size()) + " columns");
        SurvivalRecord r;
        r.sample = trim(cols[0]);
        if (r.sample.empty()) throw ParseError(where + ": empty sample id");
        if (!seen.insert(r.sample).second)
            throw ValidationError(where + ": duplicate sample " + r.sample);
        r.time = parse_double(cols[1], where);
        if (r.time < 0) throw ValidationError(where + ": negative follow-up time");
        const long long ev = parse_int(cols[2], where);
        if (ev != 0 && ev != 1) throw ValidationError(where + ": event must be 0 or 1");
        r.event = ev == 1;
        if (with_response) {
            const std::string field = trim(cols[3]);
            if (!field.empty() && canonical_name(field) != "na")
                r.response = parse_double(field, where);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<double> ssgsea(const ExpressionMatrix& m, const std::set<std::string>& gene_set,
                           double tau) {
    if (m.genes.empty() || m.samples.empty()) throw ValidationError("empty expression matrix");
    const std::size_t n = m.genes.size();
    std::vector<char> member(n, 0);
    std::size_t members = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (gene_set.count(m.genes[i])) {
            member[i] = 1;
            ++members;
        }
    }
    if (members == 0) throw ValidationError("gene set shares no genes with the expression matrix");
    if (members == n)
        throw DegenerateError("gene set covers the whole matrix; no background genes remain");

    std::vector<double> es;
    es.reserve(m.samples.size());
    std::vector<double> column(n);
    const double inv_out = 1.0 / static_cast<double>(n - members);
    for (std::size_t s = 0; s < m.samples.size(); ++s) {
        for (std::size_t g = 0; g < n; ++g) column[g] = m.at(g, s);
        const std::vector<double> ranks = average_ranks_of(column);

        // Visit genes from the top rank down; equal ranks keep matrix order.
        std::vector<std::size_t> order(n);
        for (std::size_t g = 0; g < n; ++g) order[g] = g;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (ranks[a] != ranks[b]) return ranks[a] > ranks[b];
            return a < b;
        });

        double weight_total = 0;
        for (std::size_t g = 0; g < n; ++g)
            if (member[g]) weight_total += std::pow(ranks[g], tau);

        double cum = 0, sum = 0;
        for (std::size_t g : order) {
            if (member[g])
                cum += std::pow(ranks[g], tau) / weight_total;
            else
                cum -= inv_out;
            sum += cum;
        }
        es.push_back(sum);
    }
    return es;
}

std::vector<double> nes(const std::vector<double>& es) {
    if (es.size() < 2) throw DegenerateError("need at least two samples to standardize scores");
    double mean = 0;
    for (double v : es) mean += v;
    mean /= static_cast<double>(es.size());
    double ss = 0;
    for (double v : es) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(es.size() - 1));
    if (sd == 0) throw DegenerateError("enrichment scores have no spread across samples");
    std::vector<double> out;
    out.reserve(es.size());
    for (double v : es) out.push_back((v - mean) / sd);
    return out;
}

StratifiedCohort tertile_stratify(const std::vector<std::string>& samples,
                                  const std::vector<double>& scores) {
    if (samples.size() != scores.size())
        throw ValidationError("sample and score counts differ");
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return samples[a] < samples[b];
    });
    const std::size_t third = samples.size() / 3;
    if (third == 0) throw DegenerateError("too few samples to stratify into tertiles");
    StratifiedCohort cohort;
    for (std::size_t i = 0; i < third; ++i) cohort.high.push_back(samples[order[i]]);
    for (std::size_t i = samples.size() - third; i < samples.size(); ++i)
        cohort.low.push_back(samples[order[i]]);
    std::sort(cohort.high.begin(), cohort.high.end());
    std::sort(cohort.low.begin(), cohort.low.end());
    return cohort;
}

bool check_eligibility(const StratifiedCohort& cohort, const std::vector<SurvivalRecord>& surv,
                       int min_group, int min_events) {
    if (cohort.high.size() < static_cast<std::size_t>(min_group) ||
        cohort.low.size() < static_cast<std::size_t>(min_group))
        return false;
    const auto by_sample = index_records(surv);
    int events = 0;
    for (const std::string& s : cohort.high) events += record_for(by_sample, s).event ? 1 : 0;
    for (const std::string& s : cohort.low) events += record_for(by_sample, s).event ? 1 : 0;
    return events >= min_events;
}

CoxFit cox_univariable(const StratifiedCohort& cohort, const std::vector<SurvivalRecord>& surv) {
    if (cohort.high.empty() || cohort.low.empty())
        throw DegenerateError("both groups must be non-empty");
    {
        std::unordered_set<std::string> high_set(cohort.high.begin(), cohort.high.end());
        for (const std::string& s : cohort.low)
            if (high_set.count(s)) throw ValidationError("sample in both groups: " + s);
    }
    const auto by_sample = index_records(surv);
    std::vector<Subject> subjects;
    subjects.reserve(cohort.high.size() + cohort.low.size());
    CoxFit fit;
    for (const std::string& s : cohort.high) {
        const SurvivalRecord& r = record_for(by_sample, s);
        subjects.push_back({r.time, r.event, 1});
        fit.n_events += r.event ? 1 : 0;
    }
    for (const std::string& s : cohort.low) {
        const SurvivalRecord& r = record_for(by_sample, s);
        subjects.push_back({r.time, r.event, 0});
        fit.n_events += r.event ? 1 : 0;
    }
    if (fit.n_events == 0) throw DegenerateError("no events observed");

    constexpr double kBetaCap = 20.0;
    double beta = 0;
    double info = 0;
    bool converged = false;
    for (int iter = 0; iter < 50; ++iter) {
        const ScoreInfo si = cox_score_info(subjects, beta);
        info = si.info;
        if (si.info <= 0)
            throw DegenerateError("group membership carries no information at the event times");
        const double step = si.score / si.info;
        beta += step;
        if (std::abs(beta) >= kBetaCap) {
            // Monotone likelihood: one group's events dominate completely and
            // the estimate runs away. Cap it and report non-convergence.
            beta = std::clamp(beta, -kBetaCap, kBetaCap);
            info = cox_score_info(subjects, beta).info;
            converged = false;
            break;
        }
        if (std::abs(step) < 1e-8) {
            converged = true;
            break;
        }
    }
    if (info <= 0) throw DegenerateError("no usable information for the variance estimate");
    fit.beta = beta;
    fit.hazard_ratio = std::exp(beta);
    fit.se = 1.0 / std::sqrt(info);
    fit.converged = converged;
    const double z = std::abs(beta) / fit.se;
    fit.p = std::erfc(z / std::sqrt(2.0));  // two-sided normal
    return fit;
}

std::vector<std::pair<double, double>> km_curve(const std::vector<std::string>& samples,
                                                const std::vector<SurvivalRecord>& surv) {
    if (samples.empty()) throw ValidationError("empty sample list");
    const auto by_sample = index_records(surv);
    // time -> (events, total leaving the risk set)
    std::map<double, std::pair<int, int>> at_time;
    for (const std::string& s : samples) {
        const SurvivalRecord& r = record_for(by_sample, s);
        auto& slot = at_time[r.time];
        slot.first += r.event ? 1 : 0;
        slot.second += 1;
    }
    std::vector<std::pair<double, double>> curve{{0.0, 1.0}};
    double at_risk = static_cast<double>(samples.size());
    double survival = 1.0;
    for (const auto& [time, counts] : at_time) {
        const auto [events, leaving] = counts;
        if (events > 0) {
            survival *= 1.0 - static_cast<double>(events) / at_risk;
            curve.emplace_back(time, survival);
        }
        at_risk -= static_cast<double>(leaving);
    }
    return curve;
}

HazardOutcome hazard_for_pair(const ExpressionMatrix& expr, const DrugSignature& sig,
                              const std::vector<SurvivalRecord>& surv, const HazardConfig& cfg) {
    HazardOutcome out;
    out.enrichment.samples = expr.samples;
    try {
        const std::vector<std::string> up = sig.up_genes();
        const std::vector<std::string> down = sig.down_genes();
        if (up.empty() && down.empty()) {
            out.ineligible_reason = "signature has no genes";
            return out;
        }
        if (!up.empty())
            out.enrichment.es_up = ssgsea(expr, {up.begin(), up.end()}, cfg.tau);
        else
            out.warnings.push_back("signature has no up side; combined score uses the down side alone");
        if (!down.empty())
            out.enrichment.es_down = ssgsea(expr, {down.begin(), down.end()}, cfg.tau);
        else
            out.warnings.push_back("signature has no down side; combined score uses the up side alone");

        out.enrichment.combined.resize(expr.samples.size(), 0.0);
        for (std::size_t i = 0; i < expr.samples.size(); ++i) {
            double v = 0;
            if (!out.enrichment.es_up.empty()) v += out.enrichment.es_up[i];
            if (!out.enrichment.es_down.empty()) v -= out.enrichment.es_down[i];
            out.enrichment.combined[i] = v;
        }
        out.enrichment.nes = nes(out.enrichment.combined);
        out.cohort = tertile_stratify(expr.samples, out.enrichment.nes);
        if (!check_eligibility(out.cohort, surv, cfg.min_group, cfg.min_events)) {
            int events = 0;
            const auto by_sample = index_records(surv);
            for (const std::string& s : out.cohort.high) events += record_for(by_sample, s).event;
            for (const std::string& s : out.cohort.low) events += record_for(by_sample, s).event;
            out.ineligible_reason = "cohort not eligible: high=" +
                                    std::to_string(out.cohort.high.size()) +
                                    " low=" + std::to_string(out.cohort.low.size()) +
                                    " events=" + std::to_string(events) + " (need groups >= " +
                                    std::to_string(cfg.min_group) + ", events >= " +
                                    std::to_string(cfg.min_events) + ")";
            return out;
        }
        out.fit = cox_univariable(out.cohort, surv);
        out.km_high = km_curve(out.cohort.high, surv);
        out.km_low = km_curve(out.cohort.low, surv);
    } catch (const ValidationError& e) {
        out.fit.reset();
        out.ineligible_reason = e.what();
    } catch (const DegenerateError& e) {
        out.fit.reset();
        out.ineligible_reason = e.what();
    }
    return out;
}

}  // namespace kgrx
