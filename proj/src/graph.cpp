#include "kgrx/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "kgrx/text.hpp"

namespace kgrx {

EntityKind parse_kind(const std::string& s) {
    const std::string k = canonical_name(s);
    if (k == "drug") return EntityKind::drug;
    if (k == "disease") return EntityKind::disease;
    if (k == "gene") return EntityKind::gene;
    if (k == "pathway") return EntityKind::pathway;
    if (k == "phenotype") return EntityKind::phenotype;
    return EntityKind::other;
}

const char* kind_name(EntityKind k) {
    switch (k) {
        case EntityKind::drug: return "drug";
        case EntityKind::disease: return "disease";
        case EntityKind::gene: return "gene";
        case EntityKind::pathway: return "pathway";
        case EntityKind::phenotype: return "phenotype";
        case EntityKind::other: return "other";
    }
    return "other";
}

std::string triple_key(const std::string& h, const std::string& r, const std::string& t) {
    std::string key;
    key.reserve(h.size() + r.size() + t.size() + 2);
    key += h;
    key += '\t';
    key += r;
    key += '\t';
    key += t;
    return key;
}

Graph::Graph(std::vector<Entity> entities, std::vector<Triple> triples)
    : entities_(std::move(entities)), triples_(std::move(triples)) {
    std::sort(entities_.begin(), entities_.end(),
              [](const Entity& a, const Entity& b) { return a.id < b.id; });
    std::sort(triples_.begin(), triples_.end(), [](const Triple& a, const Triple& b) {
        return std::tie(a.head, a.relation, a.tail) < std::tie(b.head, b.relation, b.tail);
    });
    build_index();
    for (const Triple& t : triples_) {
        if (!has_entity(t.head) || !has_entity(t.tail))
            throw ValidationError("triple references unknown entity: " + t.head + " / " + t.tail);
    }
}

void Graph::build_index() {
    entity_index_.clear();
    adjacency_.clear();
    triple_keys_.clear();
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        if (!entity_index_.emplace(entities_[i].id, i).second)
            throw ValidationError("duplicate entity id: " + entities_[i].id);
    }
    for (std::size_t i = 0; i < triples_.size(); ++i) {
        const Triple& t = triples_[i];
        if (!triple_keys_.insert(triple_key(t.head, t.relation, t.tail)).second)
            throw ValidationError("duplicate triple: " + t.head + " " + t.relation + " " + t.tail);
        adjacency_[t.head].push_back(i);
        if (t.tail != t.head) adjacency_[t.tail].push_back(i);
    }
}

Graph Graph::load(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);

    // (head, relation, tail) -> max article count seen
    std::map<std::string, Triple> dedup;
    std::unordered_map<std::string, Entity> ents;

    auto note_entity = [&](const std::string& id, const std::string& kind_str,
                           const std::string& where) {
        if (id.empty()) throw ParseError(where + ": empty entity id");
        EntityKind kind = parse_kind(kind_str);
        auto [it, inserted] = ents.emplace(id, Entity{id, id, kind});
        if (!inserted && it->second.kind != kind)
            throw ValidationError(where + ": entity " + id + " seen as both " +
                                  kind_name(it->second.kind) + " and " + kind_name(kind));
    };

    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string& line = lines[ln];
        if (line.empty() || line[0] == '#') continue;
        const std::string where = path + ":" + std::to_string(ln + 1);
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 5 && cols.size() != 6)
            throw ParseError(where + ": expected 5 or 6 tab-separated columns, found " +
                             std::to_string(cols.size()));
        Triple t;
        t.head = trim(cols[0]);
        t.relation = trim(cols[2]);
        t.tail = trim(cols[3]);
        if (t.relation.empty()) throw ParseError(where + ": empty relation");
        t.article_count = 0;
        if (cols.size() == 6 && !trim(cols[5]).empty()) {
            t.article_count = parse_int(cols[5], where);
            if (t.article_count < 0) throw ValidationError(where + ": negative article count");
        }
        note_entity(t.head, cols[1], where);
        note_entity(t.tail, cols[4], where);

        const std::string key = triple_key(t.head, t.relation, t.tail);
        auto it = dedup.find(key);
        if (it == dedup.end())
            dedup.emplace(key, t);
        else
            it->second.article_count = std::max(it->second.article_count, t.article_count);
    }

    std::vector<Entity> entities;
    entities.reserve(ents.size());
    for (auto& [id, e] : ents) entities.push_back(std::move(e));
    std::vector<Triple> triples;
    triples.reserve(dedup.size());
    for (auto& [key, t] : dedup) triples.push_back(std::move(t));
    return Graph(std::move(entities), std::move(triples));
}

void Graph::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    for (const Triple& t : triples_) {
        const Entity& h = entity(t.head);
        const Entity& ta = entity(t.tail);
        out << t.head << '\t' << kind_name(h.kind) << '\t' << t.relation << '\t' << t.tail << '\t'
            << kind_name(ta.kind) << '\t' << t.article_count << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

bool Graph::has_entity(const std::string& id) const { return entity_index_.count(id) > 0; }

const Entity& Graph::entity(const std::string& id) const {
    auto it = entity_index_.find(id);
    if (it == entity_index_.end()) throw NotFoundError("unknown entity: " + id);
    return entities_[it->second];
}

bool Graph::has_triple(const std::string& h, const std::string& r, const std::string& t) const {
    return triple_keys_.count(triple_key(h, r, t)) > 0;
}

std::vector<NeighborHit> Graph::neighbors(const std::string& id,
                                          const std::set<std::string>& exclude_relations) const {
    if (!has_entity(id)) throw NotFoundError("unknown entity: " + id);
    std::vector<NeighborHit> hits;
    auto it = adjacency_.find(id);
    if (it == adjacency_.end()) return hits;
    for (std::size_t ti : it->second) {
        const Triple& t = triples_[ti];
        if (exclude_relations.count(t.relation)) continue;
        if (t.head == id) hits.push_back({ti, t.tail, true});
        if (t.tail == id) hits.push_back({ti, t.head, false});
    }
    std::sort(hits.begin(), hits.end(), [&](const NeighborHit& a, const NeighborHit& b) {
        const Triple& ta = triples_[a.triple_index];
        const Triple& tb = triples_[b.triple_index];
        return std::tie(ta.relation, a.other, b.forward) < std::tie(tb.relation, b.other, a.forward);
    });
    return hits;
}

std::vector<std::string> Graph::ids_of_kind(EntityKind k) const {
    std::vector<std::string> ids;
    for (const Entity& e : entities_)
        if (e.kind == k) ids.push_back(e.id);
    return ids;  // entities_ is sorted by id already
}

std::vector<std::string> Graph::relations() const {
    std::set<std::string> rels;
    for (const Triple& t : triples_) rels.insert(t.relation);
    return {rels.begin(), rels.end()};
}

const Entity* Graph::find_by_name(const std::string& name, EntityKind kind) const {
    const std::string needle = canonical_name(name);
    for (const Entity& e : entities_) {  // sorted by id, first hit is the smallest id
        if (e.kind == kind && canonical_name(e.name) == needle) return &e;
    }
    return nullptr;
}

}  // namespace kgrx
