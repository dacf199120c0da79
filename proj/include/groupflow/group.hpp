#pragma once

// Finite abelian groups presented as explicit products of cyclic groups,
// Davenport constants via exhaustive search, zero-sum subset search, and
// orbit partitions used by the G-model projection.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace groupflow {

/// Thrown when a computation would exceed a configured desk-scale cap.
/// CLI maps this to a dedicated exit code.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// An element of Z_{n_1} x ... x Z_{n_k}, one residue per cyclic factor.
using GroupElement = std::vector<int>;

/// Z_{n_1} x ... x Z_{n_k} with every modulus >= 1. Elements are residue
/// vectors validated against the moduli; all arithmetic goes through the
/// group so that mismatched elements are rejected.
class FiniteAbelianGroup {
public:
    explicit FiniteAbelianGroup(std::vector<int> moduli) : moduli_(std::move(moduli)) {
        if (moduli_.empty())
            throw std::invalid_argument("group needs at least one cyclic factor");
        for (int n : moduli_)
            if (n < 1) throw std::invalid_argument("cyclic factor modulus must be >= 1");
    }

    /// Parses a comma-separated modulus list, e.g. "2,2" for Z2 x Z2.
    static FiniteAbelianGroup parse(std::string_view text) {
        std::vector<int> moduli;
        std::string token;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == ',') {
                if (token.empty()) throw std::invalid_argument("empty modulus in group spec");
                moduli.push_back(std::stoi(token));
                token.clear();
            } else if (std::isdigit(static_cast<unsigned char>(text[i]))) {
                token += text[i];
            } else if (!std::isspace(static_cast<unsigned char>(text[i]))) {
                throw std::invalid_argument("bad character in group spec");
            }
        }
        return FiniteAbelianGroup(std::move(moduli));
    }

    const std::vector<int>& moduli() const { return moduli_; }
    std::size_t rank() const { return moduli_.size(); }

    std::int64_t order() const {
        std::int64_t n = 1;
        for (int m : moduli_) n *= m;
        return n;
    }

    bool operator==(const FiniteAbelianGroup& o) const { return moduli_ == o.moduli_; }
    bool operator!=(const FiniteAbelianGroup& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < moduli_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(moduli_[i]);
        }
        return s;
    }

    bool contains(const GroupElement& a) const {
        if (a.size() != moduli_.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] < 0 || a[i] >= moduli_[i]) return false;
        return true;
    }

    void require(const GroupElement& a) const {
        if (!contains(a)) throw std::invalid_argument("element does not belong to this group");
    }

    GroupElement neutral() const { return GroupElement(moduli_.size(), 0); }

    bool is_neutral(const GroupElement& a) const {
        require(a);
        return std::all_of(a.begin(), a.end(), [](int r) { return r == 0; });
    }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        require(a);
        require(b);
        GroupElement c(moduli_.size());
        for (std::size_t i = 0; i < moduli_.size(); ++i) c[i] = (a[i] + b[i]) % moduli_[i];
        return c;
    }

    GroupElement neg(const GroupElement& a) const {
        require(a);
        GroupElement c(moduli_.size());
        for (std::size_t i = 0; i < moduli_.size(); ++i) c[i] = (moduli_[i] - a[i]) % moduli_[i];
        return c;
    }

    /// Additive order of an element.
    int element_order(const GroupElement& a) const {
        require(a);
        int ord = 1;
        for (std::size_t i = 0; i < moduli_.size(); ++i) {
            if (a[i] == 0) continue;
            int g = std::gcd(a[i], moduli_[i]);
            ord = std::lcm(ord, moduli_[i] / g);
        }
        return ord;
    }

    /// Mixed-radix index of an element; the first factor is most significant,
    /// so index order equals lexicographic order on residue tuples.
    std::int64_t index_of(const GroupElement& a) const {
        require(a);
        std::int64_t idx = 0;
        for (std::size_t i = 0; i < moduli_.size(); ++i) idx = idx * moduli_[i] + a[i];
        return idx;
    }

    GroupElement element_at(std::int64_t idx) const {
        if (idx < 0 || idx >= order()) throw std::invalid_argument("element index out of range");
        GroupElement a(moduli_.size());
        for (std::size_t i = moduli_.size(); i-- > 0;) {
            a[i] = static_cast<int>(idx % moduli_[i]);
            idx /= moduli_[i];
        }
        return a;
    }

    /// All elements in index (= lexicographic) order.
    std::vector<GroupElement> enumerate_elements() const {
        std::vector<GroupElement> out;
        out.reserve(static_cast<std::size_t>(order()));
        for (std::int64_t i = 0; i < order(); ++i) out.push_back(element_at(i));
        return out;
    }

    std::string element_to_string(const GroupElement& a) const {
        require(a);
        std::string s = "(";
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(a[i]);
        }
        s += ')';
        return s;
    }

    GroupElement element_from_string(std::string_view text) const {
        if (text.size() < 2 || text.front() != '(' || text.back() != ')')
            throw std::invalid_argument("element must look like (r1,...,rk)");
        GroupElement a;
        std::string token;
        std::string_view body = text.substr(1, text.size() - 2);
        for (std::size_t i = 0; i <= body.size(); ++i) {
            if (i == body.size() || body[i] == ',') {
                if (token.empty()) throw std::invalid_argument("empty residue");
                a.push_back(std::stoi(token));
                token.clear();
            } else {
                token += body[i];
            }
        }
        require(a);
        return a;
    }

private:
    std::vector<int> moduli_;
};

namespace detail {

// Subset-sum reachability over element indices, used to detect zero-sum
// subsequences. `reach[i] == true` means some nonempty subset sums to the
// element with index i.
inline bool extends_to_zero_sum(const FiniteAbelianGroup& g, std::vector<char>& reach,
                                std::int64_t next_index) {
    const auto n = static_cast<std::size_t>(g.order());
    std::vector<char> updated(reach);
    const GroupElement x = g.element_at(next_index);
    for (std::size_t s = 0; s < n; ++s) {
        if (!reach[s]) continue;
        const auto t = static_cast<std::size_t>(g.index_of(g.add(g.element_at(static_cast<std::int64_t>(s)), x)));
        updated[t] = true;
    }
    updated[static_cast<std::size_t>(next_index)] = true;
    reach.swap(updated);
    return reach[0];
}

inline std::size_t longest_zero_sum_free(const FiniteAbelianGroup& g, std::int64_t min_index,
                                         std::vector<char>& reach, std::size_t depth) {
    std::size_t best = depth;
    for (std::int64_t i = min_index; i < g.order(); ++i) {
        if (g.is_neutral(g.element_at(i))) continue;
        std::vector<char> saved = reach;
        if (!extends_to_zero_sum(g, reach, i)) {
            best = std::max(best, longest_zero_sum_free(g, i, reach, depth + 1));
        }
        reach.swap(saved);
    }
    return best;
}

} // namespace detail

/// Davenport constant D(G): the least d such that every length-d sequence of
/// elements of G contains a nonempty zero-sum subsequence. Computed as one
/// plus the longest zero-sum-free multiset, by exhaustive search. Guarded to
/// |G| <= 64.
inline int davenport_constant(const FiniteAbelianGroup& g) {
    if (g.order() > 64) throw CapExceeded("davenport_constant: group too large for exhaustive search");
    std::vector<char> reach(static_cast<std::size_t>(g.order()), 0);
    return static_cast<int>(detail::longest_zero_sum_free(g, 0, reach, 0)) + 1;
}

/// Searches for a nonempty *proper* subset of positions whose elements sum to
/// neutral. Returns the first hit in lexicographic position order, so the
/// result is deterministic. When `size_divisible_by > 0` only subsets whose
/// cardinality is a multiple of it are considered.
inline std::optional<std::vector<std::size_t>> zero_sum_proper_subset(
    const FiniteAbelianGroup& g, const std::vector<GroupElement>& elements,
    std::size_t size_divisible_by = 0) {
    if (elements.empty()) throw std::invalid_argument("zero_sum_proper_subset: empty multiset");
    for (const auto& e : elements) g.require(e);
    const std::size_t n = elements.size();

    std::vector<std::size_t> chosen;
    GroupElement sum = g.neutral();
    // Pre-order DFS over index subsets in lexicographic order.
    auto search = [&](auto&& self, std::size_t next) -> std::optional<std::vector<std::size_t>> {
        for (std::size_t i = next; i < n; ++i) {
            chosen.push_back(i);
            GroupElement prev = sum;
            sum = g.add(sum, elements[i]);
            const bool proper = chosen.size() < n;
            const bool size_ok = size_divisible_by == 0 || chosen.size() % size_divisible_by == 0;
            if (proper && size_ok && g.is_neutral(sum)) return chosen;
            if (auto r = self(self, i + 1)) return r;
            sum = prev;
            chosen.pop_back();
        }
        return std::nullopt;
    };
    return search(search, 0);
}

/// A partition of the group's elements into disjoint classes, as produced by
/// the adjoint action of an overgroup. Only the partition itself is kept.
class OrbitPartition {
public:
    OrbitPartition(FiniteAbelianGroup group, std::vector<std::vector<GroupElement>> classes,
                   std::vector<std::string> labels)
        : group_(std::move(group)), classes_(std::move(classes)), labels_(std::move(labels)) {
        if (classes_.size() != labels_.size())
            throw std::invalid_argument("orbit partition needs one label per class");
        const auto order = static_cast<std::size_t>(group_.order());
        std::vector<char> seen(order, 0);
        std::size_t covered = 0;
        for (const auto& cls : classes_) {
            if (cls.empty()) throw std::invalid_argument("orbit class must be nonempty");
            for (const auto& e : cls) {
                const auto idx = static_cast<std::size_t>(group_.index_of(e));
                if (seen[idx]) throw std::invalid_argument("orbit classes must be disjoint");
                seen[idx] = 1;
                ++covered;
            }
        }
        if (covered != order) throw std::invalid_argument("orbit classes must cover the group");
        class_of_.assign(order, 0);
        for (std::size_t c = 0; c < classes_.size(); ++c)
            for (const auto& e : classes_[c])
                class_of_[static_cast<std::size_t>(group_.index_of(e))] = c;
    }

    const FiniteAbelianGroup& group() const { return group_; }
    std::size_t class_count() const { return classes_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::vector<GroupElement>>& classes() const { return classes_; }

    std::size_t class_of(const GroupElement& e) const {
        group_.require(e);
        return class_of_[static_cast<std::size_t>(group_.index_of(e))];
    }

    std::size_t class_of_index(std::int64_t element_index) const {
        return class_of_.at(static_cast<std::size_t>(element_index));
    }

    std::size_t neutral_class() const { return class_of_[0]; }

private:
    FiniteAbelianGroup group_;
    std::vector<std::vector<GroupElement>> classes_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> class_of_;
};

/// Built-in orbit presets. "kimura2" is the 2-Kimura partition of Z2 x Z2
/// ({(0,0)}, {(0,1)}, {(1,0),(1,1)}); "jukes-cantor" keeps the neutral
/// element apart from everything else and works for any group.
inline OrbitPartition orbit_preset(std::string_view name, const FiniteAbelianGroup& g) {
    if (name == "kimura2") {
        if (g.moduli() != std::vector<int>{2, 2})
            throw std::invalid_argument("kimura2 preset is defined on the group 2,2");
        return OrbitPartition(g, {{{0, 0}}, {{0, 1}}, {{1, 0}, {1, 1}}}, {"e", "b", "ac"});
    }
    if (name == "jukes-cantor") {
        std::vector<GroupElement> rest;
        for (const auto& e : g.enumerate_elements())
            if (!g.is_neutral(e)) rest.push_back(e);
        if (rest.empty()) throw std::invalid_argument("jukes-cantor preset needs a nontrivial group");
        return OrbitPartition(g, {{g.neutral()}, rest}, {"e", "x"});
    }
    throw std::invalid_argument("unknown orbit preset: " + std::string(name));
}

} // namespace groupflow
