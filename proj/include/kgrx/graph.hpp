#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgrx/errors.hpp"

namespace kgrx {

enum class EntityKind { drug, disease, gene, pathway, phenotype, other };

// Case-insensitive; unrecognized kind strings map to `other`.
EntityKind parse_kind(const std::string& s);
const char* kind_name(EntityKind k);

struct Entity {
    std::string id;
    std::string name;  // the triple format carries no display name, so name == id
    EntityKind kind = EntityKind::other;

    bool operator==(const Entity&) const = default;
};

struct Triple {
    std::string head;
    std::string relation;
    std::string tail;
    long long article_count = 0;

    bool operator==(const Triple&) const = default;
};

struct NeighborHit {
    std::size_t triple_index = 0;
    std::string other;    // the endpoint opposite to the queried entity
    bool forward = true;  // queried entity is the head of the triple
};

// Immutable triple store. Entities are derived from the triples: the file
// format is head_id, head_kind, relation, tail_id, tail_kind and an optional
// article_count column (missing count reads as 0). Duplicate (head, relation,
// tail) rows collapse to one triple keeping the largest article count. An id
// seen with two different kinds is rejected.
class Graph {
public:
    Graph() = default;
    Graph(std::vector<Entity> entities, std::vector<Triple> triples);

    static Graph load(const std::string& path);
    void save(const std::string& path) const;

    // Sorted by id.
    const std::vector<Entity>& entities() const { return entities_; }
    // Sorted by (head, relation, tail).
    const std::vector<Triple>& triples() const { return triples_; }

    bool has_entity(const std::string& id) const;
    const Entity& entity(const std::string& id) const;  // NotFoundError
    bool has_triple(const std::string& h, const std::string& r, const std::string& t) const;

    // Every triple incident to `id`, once per role it plays (a self loop
    // shows up both as forward and backward). Sorted by (relation, other,
    // forward-first). Relations named in `exclude_relations` are skipped.
    std::vector<NeighborHit> neighbors(const std::string& id,
                                       const std::set<std::string>& exclude_relations = {}) const;

    std::vector<std::string> ids_of_kind(EntityKind k) const;  // sorted
    std::vector<std::string> relations() const;                // sorted unique

    // Exact match on canonical_name(name) among entities of `kind`;
    // smallest id wins, nullptr when nothing matches.
    const Entity* find_by_name(const std::string& name, EntityKind kind) const;

private:
    void build_index();

    std::vector<Entity> entities_;
    std::vector<Triple> triples_;
    std::unordered_map<std::string, std::size_t> entity_index_;
    std::unordered_map<std::string, std::vector<std::size_t>> adjacency_;  // id -> triple indices
    std::unordered_set<std::string> triple_keys_;
};

// Key used for triple identity lookups ("head\trelation\ttail").
std::string triple_key(const std::string& h, const std::string& r, const std::string& t);

}  // namespace kgrx
