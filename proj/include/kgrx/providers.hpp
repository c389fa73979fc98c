#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgrx/errors.hpp"

namespace kgrx {

struct Snippet {
    std::string id;    // article or source id
    std::string text;
};

struct LabelRecord {
    std::string drug;
    std::map<std::string, std::string> sections;  // section name -> text
};

struct TrialMeta {
    std::string trial_id;
    std::string disease;
    std::string drug;
    std::string phase;  // free text, e.g. "1", "2/3", "Phase III", "NA"
    std::string status; // "completed", "ongoing", ...
    int start_year = 0;
    int completion_year = 0;  // 0 = unknown / not reached
    bool has_results = false;
    std::optional<bool> positive;  // interpretation of posted results, when known
};

struct ResourceRecord {
    std::string drug;
    std::string gene;
    std::string source;
    std::string note;
};

// Literature co-mentions, read from snippets.json:
//   {"pair": {"<disease>|<drug>": [{"id","text"}...]},
//    "drug_gene": {"<drug>|<gene>": [...]}}
class LiteratureProvider {
public:
    static LiteratureProvider load(const std::string& path);
    std::vector<Snippet> pair_snippets(const std::string& disease, const std::string& drug) const;
    std::vector<Snippet> gene_snippets(const std::string& drug, const std::string& gene) const;
    std::vector<std::string> genes_with_snippets(const std::string& drug) const;  // sorted

private:
    std::map<std::string, std::vector<Snippet>> pair_;
    std::map<std::string, std::vector<Snippet>> drug_gene_;
};

// Product labels, read from labels.json: {"<drug>": {"<section>": "text"}}.
class LabelProvider {
public:
    static LabelProvider load(const std::string& path);
    std::optional<LabelRecord> label(const std::string& drug) const;

private:
    std::map<std::string, LabelRecord> labels_;
};

// Registered trials, read from trials.json: {"trials": [TrialMeta...]}.
class TrialProvider {
public:
    static TrialProvider load(const std::string& path);
    std::vector<TrialMeta> trials(const std::string& disease, const std::string& drug) const;
    const std::vector<TrialMeta>& all() const { return trials_; }

private:
    std::vector<TrialMeta> trials_;
};

// Gene-set collection in GMT format (term, description, genes...).
class PathwayProvider {
public:
    static PathwayProvider load(const std::string& path);
    const std::map<std::string, std::set<std::string>>& gene_sets() const { return sets_; }
    std::set<std::string> all_genes() const;

private:
    std::map<std::string, std::set<std::string>> sets_;
};

// Curated drug-gene records, read from resources.json: {"records": [...]}.
class ResourceProvider {
public:
    static ResourceProvider load(const std::string& path);
    std::vector<ResourceRecord> records(const std::string& drug) const;
    std::vector<std::string> genes_with_records(const std::string& drug) const;  // sorted

private:
    std::map<std::string, std::vector<ResourceRecord>> by_drug_;
};

// The full fixture bundle for evidence assembly, loaded from one directory
// containing snippets.json, labels.json, trials.json, terms.gmt and
// resources.json.
struct Providers {
    LiteratureProvider literature;
    LabelProvider labels;
    TrialProvider trials;
    PathwayProvider pathways;
    ResourceProvider resources;

    static Providers load(const std::string& dir);
};

}  // namespace kgrx
