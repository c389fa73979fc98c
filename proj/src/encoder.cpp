#include "kgrx/encoder.hpp"

#include <cmath>
#include <cstdint>

#include "kgrx/errors.hpp"
#include "kgrx/text.hpp"

namespace kgrx {

namespace {

std::uint64_t fnv1a(const char* data, std::size_t n) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

TrigramEncoder::TrigramEncoder(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw ValidationError("encoder dimension must be positive");
}

std::vector<double> TrigramEncoder::encode(const std::string& text) const {
    std::vector<double> v(dim_, 0.0);
    // Pad so that short strings and word boundaries still produce trigrams.
    const std::string s = "^" + canonical_name(text) + "$";
    if (s.size() < 3) return v;
    for (std::size_t i = 0; i + 3 <= s.size(); ++i)
        v[fnv1a(s.data() + i, 3) % dim_] += 1.0;
    return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ValidationError("cosine: dimension mismatch");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string map_disease(const Graph& g, const std::string& text, const TextEncoder& enc) {
    const std::vector<std::string> diseases = g.ids_of_kind(EntityKind::disease);
    if (diseases.empty()) throw NotFoundError("graph has no disease entities");
    if (canonical_name(text).empty()) throw ValidationError("empty disease query");

    if (const Entity* exact = g.find_by_name(text, EntityKind::disease)) return exact->id;

    const std::vector<double> q = enc.encode(text);
    double qn = 0;
    for (double x : q) qn += x * x;
    if (qn == 0) throw ValidationError("disease query '" + text + "' produced an empty encoding");

    std::string best;
    double best_sim = -1.0;
    for (const std::string& id : diseases) {  // sorted by id, first max wins ties
        double sim = cosine(q, enc.encode(g.entity(id).name));
        if (sim > best_sim) {
            best_sim = sim;
            best = id;
        }
    }
    return best;
}

}  // namespace kgrx
