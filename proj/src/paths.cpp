#include "kgrx/paths.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

namespace kgrx {

namespace {

// Relation sequence comparison for paths with identical node sequences
// (parallel edges). Falls back to orientation so the order is total.
std::vector<std::string> relation_seq(const Path& p) {
    std::vector<std::string> rels;
    rels.reserve(p.edges.size());
    for (const PathEdge& e : p.edges) rels.push_back(e.triple.relation);
    return rels;
}

bool path_less(const Path& a, const Path& b) {
    if (a.nodes != b.nodes) return a.nodes < b.nodes;
    const auto ra = relation_seq(a);
    const auto rb = relation_seq(b);
    if (ra != rb) return ra < rb;
    for (std::size_t i = 0; i < a.edges.size(); ++i)
        if (a.edges[i].forward != b.edges[i].forward) return a.edges[i].forward;
    return false;
}

}  // namespace

double normalize_edge_score(double raw_score, const PathScoringConfig& cfg) {
    if (!std::isfinite(raw_score)) throw NumericError("edge score is not finite");
    if (cfg.sigma <= 0) throw ConfigError("sigma must be positive");
    const double d = -raw_score;
    const double z = (d - cfg.mu) / cfg.sigma;
    // Evaluate the logistic without overflowing exp for extreme distances.
    if (z >= 0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

double geometric_mean(const std::vector<double>& xs) {
    if (xs.empty()) throw ValidationError("geometric mean of nothing");
    double log_sum = 0;
    for (double x : xs) {
        if (!(x > 0)) throw ValidationError("geometric mean requires positive values");
        log_sum += std::log(x);
    }
    return std::exp(log_sum / static_cast<double>(xs.size()));
}

double path_score(const Path& path, const HakeParams& params, const PathScoringConfig& cfg) {
    if (path.edges.empty()) throw ValidationError("cannot score a path without edges");
    std::vector<double> normalized;
    normalized.reserve(path.edges.size());
    for (const PathEdge& e : path.edges)
        normalized.push_back(normalize_edge_score(
            score_triple(params, e.triple.head, e.triple.relation, e.triple.tail), cfg));
    return geometric_mean(normalized);
}

std::vector<Path> k_shortest_paths(const Graph& g, const std::string& src, const std::string& dst,
                                   int k, const PathScoringConfig& cfg) {
    if (!g.has_entity(src)) throw NotFoundError("unknown entity: " + src);
    if (!g.has_entity(dst)) throw NotFoundError("unknown entity: " + dst);
    if (src == dst) throw ValidationError("path endpoints must differ");

    // Hop distance to dst over the undirected graph, excluded relations
    // removed. Minimal-hop paths then follow strictly decreasing distances,
    // which also makes them simple without extra bookkeeping.
    std::unordered_map<std::string, int> dist;
    dist[dst] = 0;
    std::deque<std::string> queue{dst};
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        for (const NeighborHit& hit : g.neighbors(cur, cfg.excluded_relations)) {
            if (dist.count(hit.other)) continue;
            dist[hit.other] = dist[cur] + 1;
            queue.push_back(hit.other);
        }
    }
    std::vector<Path> out;
    auto src_it = dist.find(src);
    if (src_it == dist.end()) return out;  // unreachable

    // Depth-first along the decreasing-distance DAG. Neighbor order makes the
    // enumeration deterministic; the contractual (node sequence, relation
    // sequence) order is established by a final sort, because a parallel edge
    // can place a lexicographically later node sequence on an earlier branch.
    Path cur;
    cur.nodes.push_back(src);
    const std::size_t cap = cfg.enumeration_cap;

    auto dfs = [&](auto&& self, const std::string& node) -> bool {
        if (node == dst) {
            out.push_back(cur);
            return out.size() >= cap;
        }
        std::vector<NeighborHit> hits = g.neighbors(node, cfg.excluded_relations);
        std::sort(hits.begin(), hits.end(), [&](const NeighborHit& a, const NeighborHit& b) {
            const std::string& ra = g.triples()[a.triple_index].relation;
            const std::string& rb = g.triples()[b.triple_index].relation;
            return std::tie(a.other, ra, b.forward) < std::tie(b.other, rb, a.forward);
        });
        const int need = dist.at(node) - 1;
        for (const NeighborHit& hit : hits) {
            auto it = dist.find(hit.other);
            if (it == dist.end() || it->second != need) continue;
            cur.nodes.push_back(hit.other);
            cur.edges.push_back({g.triples()[hit.triple_index], hit.forward});
            const bool full = self(self, hit.other);
            cur.nodes.pop_back();
            cur.edges.pop_back();
            if (full) return true;
        }
        return false;
    };
    dfs(dfs, src);
    std::sort(out.begin(), out.end(), path_less);
    if (k > 0 && out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
    return out;
}

std::vector<ScoredPath> build_subgraph(const Graph& g, const HakeParams& params,
                                       const std::string& disease, const std::string& drug,
                                       const PathScoringConfig& cfg) {
    std::vector<Path> paths = k_shortest_paths(g, disease, drug, 0, cfg);
    std::vector<ScoredPath> scored;
    scored.reserve(paths.size());
    for (Path& p : paths) {
        const double s = path_score(p, params, cfg);
        scored.push_back({std::move(p), s});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const ScoredPath& a, const ScoredPath& b) {
        if (a.score != b.score) return a.score > b.score;
        return path_less(a.path, b.path);
    });
    if (cfg.max_paths > 0 && static_cast<int>(scored.size()) > cfg.max_paths)
        scored.resize(cfg.max_paths);
    return scored;
}

}  // namespace kgrx
