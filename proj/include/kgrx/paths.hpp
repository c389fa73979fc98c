#pragma once

#include <set>
#include <string>
#include <vector>

#include "kgrx/graph.hpp"
#include "kgrx/hake.hpp"

namespace kgrx {

struct PathScoringConfig {
    double mu = 350.0;     // distance at which an edge is worth 0.5
    double sigma = 100.0;  // softness of the logistic falloff
    int max_paths = 10;    // paths kept per (disease, drug) pair
    std::size_t enumeration_cap = 10000;
    std::set<std::string> excluded_relations = {"synergistic interaction"};
};

struct PathEdge {
    Triple triple;
    bool forward = true;  // traversal direction; scoring always uses the stored orientation
};

struct Path {
    std::vector<std::string> nodes;  // nodes.size() == edges.size() + 1
    std::vector<PathEdge> edges;
};

struct ScoredPath {
    Path path;
    double score = 0;
};

// Model scores are <= 0; the edge distance is their negation. An edge at
// distance mu maps to 0.5 and the value falls off logistically with width
// sigma:  1 / (1 + exp((d - mu) / sigma)).
double normalize_edge_score(double raw_score, const PathScoringConfig& cfg);

// nth root of the product, i.e. exp(mean(log x)). All inputs must be > 0.
double geometric_mean(const std::vector<double>& xs);

// Geometric mean of the normalized scores of the path's edges, each scored
// in its stored (head, relation, tail) orientation.
double path_score(const Path& path, const HakeParams& params, const PathScoringConfig& cfg);

// All simple undirected paths of minimal hop count from src to dst, skipping
// excluded relations, ordered lexicographically by node sequence and then by
// relation sequence (parallel edges yield distinct paths). Truncated to the
// first k when k > 0. Enumeration stops at cfg.enumeration_cap paths.
// Unreachable pairs yield an empty result.
std::vector<Path> k_shortest_paths(const Graph& g, const std::string& src, const std::string& dst,
                                   int k, const PathScoringConfig& cfg);

// The explanatory subgraph for a pair: every minimal-hop path (up to the
// enumeration cap), scored and reduced to the cfg.max_paths best, ties broken
// by the lexicographic path order.
std::vector<ScoredPath> build_subgraph(const Graph& g, const HakeParams& params,
                                       const std::string& disease, const std::string& drug,
                                       const PathScoringConfig& cfg);

}  // namespace kgrx
