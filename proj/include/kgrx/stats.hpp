#pragma once

#include <set>
#include <string>
#include <vector>

#include "kgrx/errors.hpp"

namespace kgrx {

// 1-based ranks, ascending, ties averaged.
std::vector<double> average_ranks(const std::vector<double>& values);

// |retrieved ∩ gold| / |gold| after canonicalizing names (trim + lowercase).
double recall_at(const std::vector<std::string>& retrieved, const std::vector<std::string>& gold);

struct SpearmanResult {
    double rho = 0;
    double p = 1;  // two-sided, t approximation
    int n = 0;
};

// Pearson correlation of the average ranks; the p-value uses the
// t = rho * sqrt((n-2) / (1-rho^2)) approximation with n-2 degrees of
// freedom, and is exactly 0 when |rho| = 1. Needs n >= 3 and spread in both
// inputs.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

// Probability that a random positive scores above a random negative, ties
// counting half (the Mann-Whitney formulation). `higher_is_positive` flips
// the score direction first. Needs at least one positive and one negative.
double roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels,
               bool higher_is_positive = true);

struct PcaResult {
    std::vector<std::vector<double>> components;  // kept components x variables, orthonormal
    std::vector<double> eigenvalues;              // all, descending
    std::vector<double> explained_variance;       // eigenvalue share of the total, descending
    std::vector<std::vector<double>> projections; // rows x kept components
    std::vector<double> mean;                     // per-variable column means
};

// Principal components of row observations: columns are centered, the
// covariance matrix (n-1 denominator) is diagonalized with a cyclic Jacobi
// sweep, and eigenpairs are ordered by descending eigenvalue. Each
// component's sign is fixed so its largest-magnitude coordinate is positive.
PcaResult pca(const std::vector<std::vector<double>>& rows, int n_components);

// Benjamini-Hochberg step-up adjusted p-values, clipped to [0, 1], returned
// in the input order.
std::vector<double> bh_adjust(const std::vector<double>& p);

// Upper-tail hypergeometric probability P(X >= overlap) for drawing `draws`
// items from a universe of size `universe` containing `successes` marked
// items; computed in log space.
double hypergeometric_tail(int overlap, int draws, int successes, int universe);

}  // namespace kgrx
