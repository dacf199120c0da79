#pragma once

// Edge labellings, the summing morphism, group-based flows, sockets and the
// flow/socket bijection. A FlowSpace pins one (tree, group) pair and carries
// the small arithmetic tables everything else runs on. Labelling values are
// stored as group element indices in the group's enumeration order.

#include <cstdint>
#include <string>
#include <vector>

#include "group.hpp"
#include "tree.hpp"

namespace groupflow {

/// One group element index per edge, in canonical edge order.
struct EdgeLabelling {
    std::vector<int> values;
    bool operator==(const EdgeLabelling&) const = default;
    auto operator<=>(const EdgeLabelling&) const = default;
};

/// An EdgeLabelling in the kernel of the node-sum map; construct via
/// FlowSpace so the invariant is actually checked.
struct Flow {
    std::vector<int> values;
    bool operator==(const Flow&) const = default;
    auto operator<=>(const Flow&) const = default;
};

/// One group element index per leaf (canonical leaf order) summing to neutral.
struct Socket {
    std::vector<int> values;
    bool operator==(const Socket&) const = default;
};

class FlowSpace {
public:
    FlowSpace(Tree tree, FiniteAbelianGroup group)
        : tree_(std::move(tree)), group_(std::move(group)) {
        const auto n = static_cast<std::size_t>(group_.order());
        if (n > 4096) throw CapExceeded("FlowSpace: group order beyond desk scale");
        add_.assign(n * n, 0);
        neg_.assign(n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            const GroupElement ea = group_.element_at(static_cast<std::int64_t>(a));
            neg_[a] = static_cast<int>(group_.index_of(group_.neg(ea)));
            for (std::size_t b = 0; b < n; ++b)
                add_[a * n + b] = static_cast<int>(group_.index_of(
                    group_.add(ea, group_.element_at(static_cast<std::int64_t>(b)))));
        }
        // Leaves strictly below each edge, for socket -> flow propagation.
        leaves_below_.assign(tree_.edge_count(), {});
        leaf_slot_.assign(tree_.vertex_count(), -1);
        for (std::size_t i = 0; i < tree_.leaves().size(); ++i)
            leaf_slot_[tree_.leaves()[i]] = static_cast<int>(i);
        for (int e = tree_.edge_count() - 1; e >= 0; --e) {
            int child = tree_.edge(e).child;
            if (tree_.is_leaf(child)) {
                leaves_below_[e].push_back(leaf_slot_[child]);
            } else {
                for (int ce : tree_.child_edges(child))
                    for (int s : leaves_below_[ce]) leaves_below_[e].push_back(s);
            }
        }
    }

    const Tree& tree() const { return tree_; }
    const FiniteAbelianGroup& group() const { return group_; }
    int order() const { return static_cast<int>(group_.order()); }
    int edge_count() const { return tree_.edge_count(); }
    int leaf_count() const { return static_cast<int>(tree_.leaves().size()); }

    int add(int a, int b) const { return add_[static_cast<std::size_t>(a) * group_.order() + b]; }
    int neg(int a) const { return neg_[a]; }

    GroupElement element(int idx) const { return group_.element_at(idx); }
    int element_index(const GroupElement& e) const { return static_cast<int>(group_.index_of(e)); }

    EdgeLabelling labelling_from_elements(const std::vector<GroupElement>& values) const {
        if (static_cast<int>(values.size()) != edge_count())
            throw std::invalid_argument("labelling needs one value per edge");
        EdgeLabelling lab;
        lab.values.reserve(values.size());
        for (const auto& v : values) lab.values.push_back(element_index(v));
        return lab;
    }

    /// Signed sum at a vertex: incoming values minus outgoing values.
    int summing_morphism(const EdgeLabelling& lab, int vertex) const {
        require_labelling(lab);
        if (vertex < 0 || vertex >= tree_.vertex_count())
            throw std::invalid_argument("summing_morphism: vertex not in tree");
        int s = 0;
        if (int pe = tree_.parent_edge(vertex); pe >= 0) s = add(s, lab.values[pe]);
        for (int ce : tree_.child_edges(vertex)) s = add(s, neg(lab.values[ce]));
        return s;
    }

    /// Kernel condition: the signed sum vanishes at every node.
    bool is_flow(const EdgeLabelling& lab) const {
        require_labelling(lab);
        for (int v : tree_.nodes())
            if (summing_morphism(lab, v) != 0) return false;
        return true;
    }

    Flow as_flow(const EdgeLabelling& lab) const {
        if (!is_flow(lab)) throw std::invalid_argument("labelling violates the node-sum condition");
        return Flow{lab.values};
    }

    Flow neutral_flow() const { return Flow{std::vector<int>(edge_count(), 0)}; }

    /// Restriction of a flow to the leaves (signed sum at each leaf).
    Socket socket_of(const Flow& f) const {
        Socket s;
        s.values.reserve(tree_.leaves().size());
        for (int l : tree_.leaves()) s.values.push_back(summing_morphism(EdgeLabelling{f.values}, l));
        return s;
    }

    /// Reconstructs the unique flow with the given socket: every edge value is
    /// the sum of the socket values of the leaves below it.
    Flow flow_from_socket(const Socket& s) const {
        if (s.values.size() != tree_.leaves().size())
            throw std::invalid_argument("socket needs one value per leaf");
        int total = 0;
        for (int v : s.values) total = add(total, v);
        if (total != 0) throw std::invalid_argument("socket values must sum to neutral");
        Flow f;
        f.values.assign(edge_count(), 0);
        for (int e = 0; e < edge_count(); ++e) {
            int acc = 0;
            for (int slot : leaves_below_[e]) acc = add(acc, s.values[slot]);
            f.values[e] = acc;
        }
        return f;
    }

    /// Number of flows, |G|^(|L|-1), without enumerating them.
    std::int64_t flow_count_checked(std::int64_t cap = kDefaultEnumerationCap) const {
        std::int64_t count = 1;
        for (int i = 0; i + 1 < leaf_count(); ++i) {
            count *= group_.order();
            if (count > cap) throw CapExceeded("flow enumeration cap exceeded");
        }
        return count;
    }

    /// All flows, ordered lexicographically by the assignment to the first
    /// |L|-1 leaves (the last leaf and the interior are solved).
    std::vector<Flow> enumerate_flows(std::int64_t cap = kDefaultEnumerationCap) const {
        const std::int64_t total = flow_count_checked(cap);
        const int free_leaves = leaf_count() - 1;
        std::vector<Flow> out;
        out.reserve(static_cast<std::size_t>(total));
        Socket s;
        s.values.assign(leaf_count(), 0);
        std::vector<int> assign(free_leaves, 0);
        while (true) {
            int sum = 0;
            for (int i = 0; i < free_leaves; ++i) {
                s.values[i] = assign[i];
                sum = add(sum, assign[i]);
            }
            s.values[free_leaves] = neg(sum);
            out.push_back(flow_from_socket(s));
            int pos = free_leaves - 1;
            while (pos >= 0 && assign[pos] == order() - 1) assign[pos--] = 0;
            if (pos < 0) break;
            ++assign[pos];
        }
        return out;
    }

    /// Edges carrying a non-neutral value.
    std::vector<int> support(const Flow& f) const {
        std::vector<int> s;
        for (int e = 0; e < edge_count(); ++e)
            if (f.values[e] != 0) s.push_back(e);
        return s;
    }

    Flow add_flows(const Flow& f, const Flow& g) const {
        require_flow(f);
        require_flow(g);
        Flow h;
        h.values.reserve(f.values.size());
        for (std::size_t i = 0; i < f.values.size(); ++i)
            h.values.push_back(add(f.values[i], g.values[i]));
        return h;
    }

    Flow neg_flow(const Flow& f) const {
        require_flow(f);
        Flow h;
        h.values.reserve(f.values.size());
        for (int v : f.values) h.values.push_back(neg(v));
        return h;
    }

    /// The regular action of the flow group on itself (used as the polytope
    /// action): translation is just flow addition.
    Flow translate(const Flow& f, const Flow& h) const { return add_flows(f, h); }

    std::string serialize_flow(const Flow& f) const {
        require_flow(f);
        std::string s;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            if (i) s += ';';
            s += group_.element_to_string(element(f.values[i]));
        }
        return s;
    }

    Flow parse_flow(std::string_view text) const {
        std::vector<int> values;
        std::string token;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == ';') {
                if (token.empty()) throw std::invalid_argument("empty edge value in flow");
                values.push_back(element_index(group_.element_from_string(token)));
                token.clear();
            } else if (!std::isspace(static_cast<unsigned char>(text[i]))) {
                token += text[i];
            }
        }
        Flow f{std::move(values)};
        require_flow(f);
        if (!is_flow(EdgeLabelling{f.values}))
            throw std::invalid_argument("parsed labelling is not a flow: " + std::string(text));
        return f;
    }

    void require_flow(const Flow& f) const {
        if (static_cast<int>(f.values.size()) != edge_count())
            throw std::invalid_argument("flow does not match this tree");
        for (int v : f.values)
            if (v < 0 || v >= order()) throw std::invalid_argument("flow value out of range");
    }

    static constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

private:
    void require_labelling(const EdgeLabelling& lab) const {
        if (static_cast<int>(lab.values.size()) != edge_count())
            throw std::invalid_argument("labelling does not match this tree");
        for (int v : lab.values)
            if (v < 0 || v >= order()) throw std::invalid_argument("labelling value out of range");
    }

    Tree tree_;
    FiniteAbelianGroup group_;
    std::vector<int> add_;
    std::vector<int> neg_;
    std::vector<std::vector<int>> leaves_below_;
    std::vector<int> leaf_slot_;
};

} // namespace groupflow
