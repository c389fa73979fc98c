#include "kgrx/providers.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "kgrx/text.hpp"

namespace kgrx {

namespace {

std::string pair_key(const std::string& a, const std::string& b) { return a + "|" + b; }

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::vector<Snippet> parse_snippets(const nlohmann::json& arr, const std::string& path) {
    std::vector<Snippet> out;
    try {
        for (const auto& s : arr)
            out.push_back({s.at("id").get<std::string>(), s.at("text").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return out;
}

}  // namespace

LiteratureProvider LiteratureProvider::load(const std::string& path) {
    const nlohmann::json j = read_json(path);
    LiteratureProvider p;
    try {
        if (j.contains("pair"))
            for (const auto& [key, arr] : j.at("pair").items())
                p.pair_[key] = parse_snippets(arr, path);
        if (j.contains("drug_gene"))
            for (const auto& [key, arr] : j.at("drug_gene").items())
                p.drug_gene_[key] = parse_snippets(arr, path);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return p;
}

std::vector<Snippet> LiteratureProvider::pair_snippets(const std::string& disease,
                                                       const std::string& drug) const {
    auto it = pair_.find(pair_key(disease, drug));
    return it == pair_.end() ? std::vector<Snippet>{} : it->second;
}

std::vector<Snippet> LiteratureProvider::gene_snippets(const std::string& drug,
                                                       const std::string& gene) const {
    auto it = drug_gene_.find(pair_key(drug, gene));
    return it == drug_gene_.end() ? std::vector<Snippet>{} : it->second;
}

std::vector<std::string> LiteratureProvider::genes_with_snippets(const std::string& drug) const {
    std::vector<std::string> genes;
    const std::string prefix = drug + "|";
    for (const auto& [key, snippets] : drug_gene_) {
        if (key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0 &&
            !snippets.empty())
            genes.push_back(key.substr(prefix.size()));
    }
    return genes;  // map order keeps this sorted
}

LabelProvider LabelProvider::load(const std::string& path) {
    const nlohmann::json j = read_json(path);
    LabelProvider p;
    try {
        for (const auto& [drug, sections] : j.items()) {
            LabelRecord rec;
            rec.drug = drug;
            for (const auto& [name, text] : sections.items())
                rec.sections[name] = text.get<std::string>();
            p.labels_[drug] = std::move(rec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return p;
}

std::optional<LabelRecord> LabelProvider::label(const std::string& drug) const {
    auto it = labels_.find(drug);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
}

TrialProvider TrialProvider::load(const std::string& path) {
    const nlohmann::json j = read_json(path);
    TrialProvider p;
    try {
        for (const auto& t : j.at("trials")) {
            TrialMeta m;
            m.trial_id = t.at("trial_id").get<std::string>();
            m.disease = t.at("disease").get<std::string>();
            m.drug = t.at("drug").get<std::string>();
            m.phase = t.at("phase").get<std::string>();
            m.status = t.at("status").get<std::string>();
            m.start_year = t.at("start_year").get<int>();
            m.completion_year = t.value("completion_year", 0);
            m.has_results = t.at("has_results").get<bool>();
            if (t.contains("positive") && !t.at("positive").is_null())
                m.positive = t.at("positive").get<bool>();
            p.trials_.push_back(std::move(m));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    std::sort(p.trials_.begin(), p.trials_.end(),
              [](const TrialMeta& a, const TrialMeta& b) { return a.trial_id < b.trial_id; });
    return p;
}

std::vector<TrialMeta> TrialProvider::trials(const std::string& disease,
                                             const std::string& drug) const {
    std::vector<TrialMeta> out;
    for (const TrialMeta& t : trials_)
        if (t.disease == disease && t.drug == drug) out.push_back(t);
    return out;
}

PathwayProvider PathwayProvider::load(const std::string& path) {
    PathwayProvider p;
    for (std::size_t ln = 0; const std::string& line : read_lines(path)) {
        ++ln;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(ln);
        const std::vector<std::string> cols = split(line, '\t');
        if (cols.size() < 3) throw ParseError(where + ": GMT rows need term, description, genes");
        const std::string term = trim(cols[0]);
        if (term.empty()) throw ParseError(where + ": empty term name");
        if (p.sets_.count(term)) throw ValidationError(where + ": duplicate term " + term);
        std::set<std::string>& genes = p.sets_[term];
        for (std::size_t c = 2; c < cols.size(); ++c) {
            const std::string g = trim(cols[c]);
            if (!g.empty()) genes.insert(g);
        }
        if (genes.empty()) throw ValidationError(where + ": term " + term + " has no genes");
    }
    return p;
}

std::set<std::string> PathwayProvider::all_genes() const {
    std::set<std::string> out;
    for (const auto& [term, genes] : sets_) out.insert(genes.begin(), genes.end());
    return out;
}

ResourceProvider ResourceProvider::load(const std::string& path) {
    const nlohmann::json j = read_json(path);
    ResourceProvider p;
    try {
        for (const auto& r : j.at("records")) {
            ResourceRecord rec;
            rec.drug = r.at("drug").get<std::string>();
            rec.gene = r.at("gene").get<std::string>();
            rec.source = r.value("source", std::string{});
            rec.note = r.value("note", std::string{});
            p.by_drug_[rec.drug].push_back(std::move(rec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    for (auto& [drug, recs] : p.by_drug_)
        std::sort(recs.begin(), recs.end(), [](const ResourceRecord& a, const ResourceRecord& b) {
            return std::tie(a.gene, a.source) < std::tie(b.gene, b.source);
        });
    return p;
}

std::vector<ResourceRecord> ResourceProvider::records(const std::string& drug) const {
    auto it = by_drug_.find(drug);
    return it == by_drug_.end() ? std::vector<ResourceRecord>{} : it->second;
}

std::vector<std::string> ResourceProvider::genes_with_records(const std::string& drug) const {
    std::set<std::string> genes;
    for (const ResourceRecord& r : records(drug)) genes.insert(r.gene);
    return {genes.begin(), genes.end()};
}

Providers Providers::load(const std::string& dir) {
    Providers p;
    p.literature = LiteratureProvider::load(dir + "/snippets.json");
    p.labels = LabelProvider::load(dir + "/labels.json");
    p.trials = TrialProvider::load(dir + "/trials.json");
    p.pathways = PathwayProvider::load(dir + "/terms.gmt");
    p.resources = ResourceProvider::load(dir + "/resources.json");
    return p;
}

}  // namespace kgrx
