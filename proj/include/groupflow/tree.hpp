#pragma once

// Rooted trees with edges directed away from the root. Vertices carry free-form
// names; edges live in a canonical order (breadth-first from the root, children
// in input order) so that every downstream serialization is reproducible.

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace groupflow {

class Tree {
public:
    struct Edge {
        int parent = -1;
        int child = -1;
        bool operator==(const Edge&) const = default;
    };

    /// Builds a tree from (parent, child) name pairs. The first-mentioned
    /// vertex is the root. Rejects cycles, reconnections and duplicate edges.
    static Tree from_edge_names(const std::vector<std::pair<std::string, std::string>>& pairs) {
        if (pairs.empty()) throw std::invalid_argument("tree needs at least one edge");
        Tree t;
        std::map<std::string, int> ids;
        auto intern = [&](const std::string& name) {
            check_name(name);
            auto it = ids.find(name);
            if (it != ids.end()) return it->second;
            int id = static_cast<int>(t.names_.size());
            ids.emplace(name, id);
            t.names_.push_back(name);
            return id;
        };
        std::vector<std::vector<int>> children_in_input_order;
        std::vector<int> parent;
        auto ensure = [&](int id) {
            if (static_cast<std::size_t>(id) >= parent.size()) {
                parent.resize(id + 1, -1);
                children_in_input_order.resize(id + 1);
            }
        };
        int root = -1;
        for (const auto& [pname, cname] : pairs) {
            int p = intern(pname);
            if (root < 0) root = p;
            int c = intern(cname);
            ensure(std::max(p, c));
            if (p == c) throw std::invalid_argument("self-loop edge " + pname + "-" + cname);
            if (parent[c] == p) throw std::invalid_argument("duplicate edge " + pname + "-" + cname);
            if (parent[c] != -1 || c == root)
                throw std::invalid_argument("vertex " + cname + " gains a second parent (cycle or reconnection)");
            parent[c] = p;
            children_in_input_order[p].push_back(c);
        }
        t.root_ = root;
        // Canonical order: BFS from the root, children in input order.
        std::vector<int> order;
        order.push_back(root);
        for (std::size_t q = 0; q < order.size(); ++q) {
            int v = order[q];
            for (int c : children_in_input_order[v]) {
                t.edges_.push_back({v, c});
                order.push_back(c);
            }
        }
        if (order.size() != t.names_.size())
            throw std::invalid_argument("edge list is not connected to the root");
        t.finish();
        return t;
    }

    /// Parses the edge-list format "parent-child;parent-child;...".
    static Tree parse(std::string_view text) {
        std::vector<std::pair<std::string, std::string>> pairs;
        std::string current;
        auto flush = [&]() {
            if (current.empty()) throw std::invalid_argument("empty edge in tree spec");
            auto dash = current.find('-');
            if (dash == std::string::npos || dash == 0 || dash + 1 == current.size())
                throw std::invalid_argument("edge must look like parent-child: " + current);
            pairs.emplace_back(current.substr(0, dash), current.substr(dash + 1));
            current.clear();
        };
        for (char ch : text) {
            if (ch == ';') {
                flush();
            } else if (!std::isspace(static_cast<unsigned char>(ch))) {
                current += ch;
            }
        }
        if (!current.empty()) flush();
        return from_edge_names(pairs);
    }

    /// Star tree with one node ("0") and n leaves ("1".."n"); requires n >= 2.
    static Tree claw(int n) {
        if (n < 2) throw std::invalid_argument("claw tree needs at least 2 leaves");
        std::vector<std::pair<std::string, std::string>> pairs;
        pairs.reserve(n);
        for (int i = 1; i <= n; ++i) pairs.emplace_back("0", std::to_string(i));
        return from_edge_names(pairs);
    }

    /// Accepts either "claw:n" or an edge list.
    static Tree parse_spec(std::string_view text) {
        if (text.rfind("claw:", 0) == 0) {
            return claw(std::stoi(std::string(text.substr(5))));
        }
        return parse(text);
    }

    std::string serialize() const {
        std::string s;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (i) s += ';';
            s += names_[edges_[i].parent];
            s += '-';
            s += names_[edges_[i].child];
        }
        return s;
    }

    int vertex_count() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int root() const { return root_; }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int v) const { return names_.at(v); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_.at(e); }

    int vertex_by_name(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("no vertex named " + std::string(name));
    }

    int degree(int v) const { return degree_.at(v); }
    bool is_leaf(int v) const { return degree_.at(v) == 1; }

    /// Leaves in canonical (BFS) vertex order.
    const std::vector<int>& leaves() const { return leaves_; }
    /// Internal vertices N = V \ L in canonical order.
    const std::vector<int>& nodes() const { return nodes_; }

    /// Index of the edge into `v` from its parent, or -1 for the root.
    int parent_edge(int v) const { return parent_edge_.at(v); }
    /// Indices of edges out of `v`, in canonical order.
    const std::vector<int>& child_edges(int v) const { return child_edges_.at(v); }

    /// The unique edge incident to a leaf.
    int pendant_edge(int leaf) const {
        if (!is_leaf(leaf)) throw std::invalid_argument("pendant_edge: vertex is not a leaf");
        return parent_edge_[leaf] >= 0 ? parent_edge_[leaf] : child_edges_[leaf].front();
    }

    bool is_inner_edge(int e) const {
        const Edge& ed = edges_.at(e);
        return !is_leaf(ed.parent) && !is_leaf(ed.child);
    }

    /// Same tree content re-rooted at the named vertex (edges re-oriented by
    /// BFS from the new root, neighbor order preserved from the old canonical
    /// order).
    Tree rerooted(std::string_view new_root) const {
        int r = vertex_by_name(new_root);
        std::vector<std::vector<int>> adj(names_.size());
        for (const Edge& e : edges_) {
            adj[e.parent].push_back(e.child);
            adj[e.child].push_back(e.parent);
        }
        std::vector<std::pair<std::string, std::string>> pairs;
        std::vector<char> seen(names_.size(), 0);
        std::vector<int> queue{r};
        seen[r] = 1;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            int v = queue[q];
            for (int w : adj[v]) {
                if (seen[w]) continue;
                seen[w] = 1;
                pairs.emplace_back(names_[v], names_[w]);
                queue.push_back(w);
            }
        }
        return from_edge_names(pairs);
    }

    struct Split;

    /// Divides an inner edge (u,v): `first` keeps u's side plus the pendant
    /// edge u-v (v demoted to a leaf), `second` keeps v's subtree plus u as a
    /// pendant root. join_trees(first, second, marker1, marker2) restores the
    /// original tree.
    Split split_edge(int e) const;

    /// Joins two trees by identifying the pendant edges at `leaf1` and `leaf2`
    /// into one inner edge. Vertex names (after dropping the two leaves) must
    /// be disjoint. The result is rooted at `first`'s root (or at the joint if
    /// `leaf1` was the root).
    static Tree join_trees(const Tree& first, const Tree& second, std::string_view leaf1,
                           std::string_view leaf2) {
        int l1 = first.vertex_by_name(leaf1);
        int l2 = second.vertex_by_name(leaf2);
        if (!first.is_leaf(l1) || !second.is_leaf(l2))
            throw std::invalid_argument("join_trees: arguments must be leaves");
        int p1 = first.neighbor_of_leaf(l1);
        int p2 = second.neighbor_of_leaf(l2);
        for (const auto& n : second.names_)
            if (n != second.names_[l2] && n != first.names_[l1])
                for (const auto& m : first.names_)
                    if (m == n)
                        throw std::invalid_argument("join_trees: vertex name clash: " + n);

        // Undirected edges of both parts, the joint edge replacing the first
        // tree's pendant stub in place (so child order survives a split/join
        // round-trip); re-rooted BFS fixes orientations.
        std::map<std::string, std::vector<std::string>> nbr;
        auto link = [&](const std::string& a, const std::string& b) {
            nbr[a].push_back(b);
            nbr[b].push_back(a);
        };
        for (const Edge& e : first.edges_) {
            if (e.parent == l1 || e.child == l1)
                link(first.names_[p1], second.names_[p2]);
            else
                link(first.names_[e.parent], first.names_[e.child]);
        }
        for (const Edge& e : second.edges_)
            if (e.parent != l2 && e.child != l2) link(second.names_[e.parent], second.names_[e.child]);

        const std::string start = (l1 == first.root_) ? first.names_[p1] : first.names_[first.root_];
        std::vector<std::pair<std::string, std::string>> pairs;
        std::vector<std::string> queue{start};
        std::map<std::string, bool> seen{{start, true}};
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const std::string v = queue[q];
            for (const auto& w : nbr[v]) {
                if (seen[w]) continue;
                seen[w] = true;
                pairs.emplace_back(v, w);
                queue.push_back(w);
            }
        }
        return from_edge_names(pairs);
    }

    bool operator==(const Tree& o) const { return serialize() == o.serialize(); }

private:
    Tree() = default;

    static void check_name(const std::string& name) {
        if (name.empty()) throw std::invalid_argument("empty vertex name");
        for (char ch : name)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
                throw std::invalid_argument("vertex names are [A-Za-z0-9_]+: " + name);
    }

    int neighbor_of_leaf(int leaf) const {
        const Edge& e = edges_.at(pendant_edge(leaf));
        return e.parent == leaf ? e.child : e.parent;
    }

    void finish() {
        degree_.assign(names_.size(), 0);
        parent_edge_.assign(names_.size(), -1);
        child_edges_.assign(names_.size(), {});
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            ++degree_[edges_[i].parent];
            ++degree_[edges_[i].child];
            parent_edge_[edges_[i].child] = static_cast<int>(i);
            child_edges_[edges_[i].parent].push_back(static_cast<int>(i));
        }
        for (int v = 0; v < vertex_count(); ++v)
            (is_leaf(v) ? leaves_ : nodes_).push_back(v);
    }

    std::vector<std::string> names_;  // canonical (BFS) vertex order
    std::vector<Edge> edges_;         // canonical edge order
    int root_ = 0;
    std::vector<int> degree_;
    std::vector<int> parent_edge_;
    std::vector<std::vector<int>> child_edges_;
    std::vector<int> leaves_;
    std::vector<int> nodes_;
};

struct Tree::Split {
    Tree first;           // contains the original root
    Tree second;          // rooted at the cut edge's parent endpoint
    std::string marker1;  // distinguished leaf of `first`
    std::string marker2;  // distinguished leaf of `second`
};

inline Tree::Split Tree::split_edge(int e) const {
    if (!is_inner_edge(e))
        throw std::invalid_argument("split_edge: edge " + std::to_string(e) + " is pendant");
    const Edge cut = edges_.at(e);
    std::vector<char> below(names_.size(), 0);
    below[cut.child] = 1;
    std::vector<int> stack{cut.child};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int ce : child_edges_[v]) {
            below[edges_[ce].child] = 1;
            stack.push_back(edges_[ce].child);
        }
    }
    std::vector<std::pair<std::string, std::string>> first_pairs, second_pairs;
    second_pairs.emplace_back(names_[cut.parent], names_[cut.child]);
    for (const Edge& ed : edges_) {
        if (ed == cut) {
            first_pairs.emplace_back(names_[ed.parent], names_[ed.child]);
        } else if (below[ed.parent]) {
            second_pairs.emplace_back(names_[ed.parent], names_[ed.child]);
        } else {
            first_pairs.emplace_back(names_[ed.parent], names_[ed.child]);
        }
    }
    return Split{from_edge_names(first_pairs), from_edge_names(second_pairs), names_[cut.child],
                 names_[cut.parent]};
}

} // namespace groupflow
