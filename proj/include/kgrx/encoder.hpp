#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kgrx/graph.hpp"

namespace kgrx {

// Maps free text to a fixed-length vector so names can be compared by cosine
// similarity. Implementations must be deterministic.
class TextEncoder {
public:
    virtual ~TextEncoder() = default;
    virtual std::size_t dim() const = 0;
    virtual std::vector<double> encode(const std::string& text) const = 0;
};

// Character-trigram counts hashed into a fixed number of buckets. Cheap,
// dependency-free, and robust to small spelling differences, which is all the
// disease-name matching needs.
class TrigramEncoder final : public TextEncoder {
public:
    explicit TrigramEncoder(std::size_t dim = 1024);
    std::size_t dim() const override { return dim_; }
    std::vector<double> encode(const std::string& text) const override;

private:
    std::size_t dim_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Resolves free text to a disease entity id. Exact canonical-name matches win
// outright; otherwise the highest cosine similarity between encoded names
// decides, with ties broken toward the smallest id. Text that encodes to a
// zero vector is rejected, as is a graph without disease entities.
std::string map_disease(const Graph& g, const std::string& text, const TextEncoder& enc);

}  // namespace kgrx
