#include "kgrx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "kgrx/text.hpp"

namespace kgrx {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
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

double recall_at(const std::vector<std::string>& retrieved, const std::vector<std::string>& gold) {
    std::set<std::string> gold_set;
    for (const std::string& g : gold) gold_set.insert(canonical_name(g));
    if (gold_set.empty()) throw ValidationError("recall against an empty gold set");
    std::set<std::string> got;
    for (const std::string& r : retrieved) {
        const std::string c = canonical_name(r);
        if (gold_set.count(c)) got.insert(c);
    }
    return static_cast<double>(got.size()) / static_cast<double>(gold_set.size());
}

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("spearman inputs differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw ValidationError("spearman needs at least 3 observations");
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw DegenerateError("spearman input has no rank spread");

    SpearmanResult out;
    out.n = static_cast<int>(n);
    out.rho = sxy / std::sqrt(sxx * syy);
    out.rho = std::clamp(out.rho, -1.0, 1.0);
    if (std::abs(out.rho) == 1.0) {
        out.p = 0.0;
        return out;
    }
    const double df = static_cast<double>(n - 2);
    const double t = out.rho * std::sqrt(df / (1.0 - out.rho * out.rho));
    boost::math::students_t dist(df);
    out.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return out;
}

double roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels,
               bool higher_is_positive) {
    if (scores.size() != labels.size()) throw ValidationError("roc inputs differ in length");
    std::size_t n_pos = 0, n_neg = 0;
    for (bool l : labels) (l ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0)
        throw DegenerateError("roc needs at least one positive and one negative");

    std::vector<double> oriented = scores;
    if (!higher_is_positive)
        for (double& s : oriented) s = -s;

    // Mann-Whitney via rank sums: ties get half credit automatically.
    const std::vector<double> ranks = average_ranks(oriented);
    double rank_sum_pos = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i]) rank_sum_pos += ranks[i];
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

// One cyclic Jacobi pass zeroing each off-diagonal entry of the symmetric
// matrix `a` (n x n, row-major); `v` accumulates the rotations.
double jacobi_sweep(std::vector<double>& a, std::vector<double>& v, std::size_t n) {
    double off = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const double apq = a[p * n + q];
            if (apq == 0) continue;
            off = std::max(off, std::abs(apq));
            const double app = a[p * n + p];
            const double aqq = a[q * n + q];
            const double theta = (aqq - app) / (2.0 * apq);
            const double t = (theta >= 0 ? 1.0 : -1.0) /
                             (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            for (std::size_t k = 0; k < n; ++k) {
                const double akp = a[k * n + p];
                const double akq = a[k * n + q];
                a[k * n + p] = c * akp - s * akq;
                a[k * n + q] = s * akp + c * akq;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double apk = a[p * n + k];
                const double aqk = a[q * n + k];
                a[p * n + k] = c * apk - s * aqk;
                a[q * n + k] = s * apk + c * aqk;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double vkp = v[k * n + p];
                const double vkq = v[k * n + q];
                v[k * n + p] = c * vkp - s * vkq;
                v[k * n + q] = s * vkp + c * vkq;
            }
        }
    }
    return off;
}

}  // namespace

PcaResult pca(const std::vector<std::vector<double>>& rows, int n_components) {
    if (rows.empty()) throw ValidationError("pca needs at least one row");
    const std::size_t n = rows.size();
    const std::size_t d = rows.front().size();
    if (d == 0) throw ValidationError("pca rows are empty");
    for (const auto& r : rows)
        if (r.size() != d) throw ValidationError("pca rows differ in length");
    if (n < 2) throw DegenerateError("pca needs at least two rows for a covariance");
    if (n_components <= 0 || static_cast<std::size_t>(n_components) > d)
        throw ConfigError("component count must be in [1, #variables]");

    PcaResult out;
    out.mean.assign(d, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) out.mean[j] += r[j];
    for (double& m : out.mean) m /= static_cast<double>(n);

    // Covariance with the n-1 denominator.
    std::vector<double> cov(d * d, 0.0);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < d; ++i) {
            const double di = r[i] - out.mean[i];
            for (std::size_t j = i; j < d; ++j) cov[i * d + j] += di * (r[j] - out.mean[j]);
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            cov[i * d + j] /= static_cast<double>(n - 1);
            cov[j * d + i] = cov[i * d + j];
        }

    std::vector<double> a = cov;
    std::vector<double> v(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (jacobi_sweep(a, v, d) < 1e-12) break;
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x * d + x] > a[y * d + y]; });

    double total = 0;
    for (std::size_t j = 0; j < d; ++j) total += std::max(0.0, a[j * d + j]);
    for (std::size_t j : order) {
        out.eigenvalues.push_back(a[j * d + j]);
        out.explained_variance.push_back(total > 0 ? std::max(0.0, a[j * d + j]) / total : 0.0);
    }

    for (int c = 0; c < n_components; ++c) {
        const std::size_t j = order[c];
        std::vector<double> comp(d);
        for (std::size_t i = 0; i < d; ++i) comp[i] = v[i * d + j];
        // Deterministic orientation: the largest-|coordinate| entry is positive.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < d; ++i)
            if (std::abs(comp[i]) > std::abs(comp[imax])) imax = i;
        if (comp[imax] < 0)
            for (double& x : comp) x = -x;
        out.components.push_back(std::move(comp));
    }

    out.projections.assign(n, std::vector<double>(n_components, 0.0));
    for (std::size_t r = 0; r < n; ++r)
        for (int c = 0; c < n_components; ++c) {
            double dot = 0;
            for (std::size_t i = 0; i < d; ++i)
                dot += (rows[r][i] - out.mean[i]) * out.components[c][i];
            out.projections[r][c] = dot;
        }
    return out;
}

std::vector<double> bh_adjust(const std::vector<double>& p) {
    const std::size_t n = p.size();
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("p-values must lie in [0, 1]");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::vector<double> adjusted(n, 0.0);
    double running = 1.0;
    for (std::size_t i = n; i > 0; --i) {
        const std::size_t idx = order[i - 1];
        const double scaled = p[idx] * static_cast<double>(n) / static_cast<double>(i);
        running = std::min(running, scaled);
        adjusted[idx] = running;
    }
    return adjusted;
}

double hypergeometric_tail(int overlap, int draws, int successes, int universe) {
    if (universe <= 0 || draws < 0 || successes < 0 || overlap < 0)
        throw ValidationError("hypergeometric parameters must be non-negative with universe > 0");
    if (draws > universe || successes > universe)
        throw ValidationError("draws and successes cannot exceed the universe");
    if (overlap > std::min(draws, successes)) return 0.0;

    auto log_choose = [](int a, int b) {
        return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
    };
    const double log_denom = log_choose(universe, draws);
    // Sum P(X = k) for k = overlap .. min(draws, successes), in log space
    // against the largest term to avoid underflow.
    const int hi = std::min(draws, successes);
    const int lo = std::max(overlap, std::max(0, draws + successes - universe));
    std::vector<double> log_terms;
    for (int k = lo; k <= hi; ++k)
        log_terms.push_back(log_choose(successes, k) + log_choose(universe - successes, draws - k) -
                            log_denom);
    if (log_terms.empty()) return 0.0;
    const double m = *std::max_element(log_terms.begin(), log_terms.end());
    double sum = 0;
    for (double lt : log_terms) sum += std::exp(lt - m);
    return std::min(1.0, std::exp(m) * sum);
}

}  // namespace kgrx
