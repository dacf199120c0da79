#pragma once

// Binomial relations as flow-multiset pairs, fiber enumeration over monoid
// sums, and the fiber-graph connectivity reading of "generated in degree d":
// two multisets are adjacent when at most d flows are swapped for flows with
// the same partial sum.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "polytope.hpp"
#include "rng.hpp"

namespace groupflow {

/// Two equal-cardinality multisets of flows with equal lattice sums.
struct Relation {
    std::vector<Flow> lhs;
    std::vector<Flow> rhs;
    std::size_t degree() const { return lhs.size(); }
    bool operator==(const Relation&) const = default;
};

/// Checks the two equivalent readings of a relation (equal lattice sums;
/// per-edge row multisets equal up to permutation) and that both sides are
/// flows. The two routes are computed independently; disagreement would be a
/// bug, not bad input.
inline bool validate_relation(const FlowSpace& space, const Relation& r) {
    if (r.lhs.size() != r.rhs.size()) return false;
    for (const Flow& f : r.lhs)
        if (!space.is_flow(EdgeLabelling{f.values})) return false;
    for (const Flow& f : r.rhs)
        if (!space.is_flow(EdgeLabelling{f.values})) return false;

    const bool lattice_equal =
        flow_multiset_sum(space, r.lhs) == flow_multiset_sum(space, r.rhs);

    bool rows_equal = true;
    for (int e = 0; e < space.edge_count() && rows_equal; ++e) {
        std::vector<int> row_l, row_r;
        row_l.reserve(r.lhs.size());
        row_r.reserve(r.rhs.size());
        for (const Flow& f : r.lhs) row_l.push_back(f.values[e]);
        for (const Flow& f : r.rhs) row_r.push_back(f.values[e]);
        std::sort(row_l.begin(), row_l.end());
        std::sort(row_r.begin(), row_r.end());
        rows_equal = row_l == row_r;
    }
    if (lattice_equal != rows_equal)
        throw std::logic_error("relation definitions disagree; this is a bug");
    return lattice_equal;
}

/// Serializes "f1 + f2 + ... = g1 + g2 + ..." with flows in canonical order.
inline std::string serialize_relation(const FlowSpace& space, const Relation& r) {
    auto side = [&](const std::vector<Flow>& flows) {
        std::vector<std::string> parts;
        parts.reserve(flows.size());
        for (const Flow& f : flows) parts.push_back(space.serialize_flow(f));
        std::sort(parts.begin(), parts.end());
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += " + ";
            s += parts[i];
        }
        return s;
    };
    return side(r.lhs) + " = " + side(r.rhs);
}

inline Relation parse_relation(const FlowSpace& space, std::string_view text) {
    auto eq = text.find('=');
    if (eq == std::string_view::npos)
        throw std::invalid_argument("relation needs two sides separated by '='");
    if (text.find('=', eq + 1) != std::string_view::npos)
        throw std::invalid_argument("relation has more than one '='");
    auto parse_side = [&](std::string_view part) {
        std::vector<Flow> flows;
        std::size_t start = 0;
        while (start <= part.size()) {
            auto plus = part.find('+', start);
            auto piece = part.substr(start, plus == std::string_view::npos ? std::string_view::npos
                                                                           : plus - start);
            std::size_t a = piece.find_first_not_of(" \t\r\n");
            if (a == std::string_view::npos) {
                if (plus == std::string_view::npos) break;
                throw std::invalid_argument("empty flow in relation");
            }
            std::size_t b = piece.find_last_not_of(" \t\r\n");
            flows.push_back(space.parse_flow(piece.substr(a, b - a + 1)));
            if (plus == std::string_view::npos) break;
            start = plus + 1;
        }
        if (flows.empty()) throw std::invalid_argument("relation side is empty");
        return flows;
    };
    return Relation{parse_side(text.substr(0, eq)), parse_side(text.substr(eq + 1))};
}

/// Desk-scale guards for fiber work.
struct FiberCaps {
    std::int64_t max_flow_table = FlowSpace::kDefaultEnumerationCap;
    std::int64_t max_fiber_nodes = 2'000'000;
    std::int64_t max_bfs_nodes = 2'000'000;
};

/// Sorted multiset of flow-table indices.
using FlowIdMultiset = std::vector<std::uint32_t>;

struct FlowIdMultisetHash {
    std::size_t operator()(const FlowIdMultiset& m) const {
        std::size_t h = m.size();
        for (auto v : m) h = h * 0x9e3779b97f4a7c15ull + v;
        return h;
    }
};

/// One replacement step in the fiber graph.
struct FiberMove {
    FlowIdMultiset removed;
    FlowIdMultiset added;
};

/// Flow table plus memoized fiber enumeration for one FlowSpace.
class FiberExplorer {
public:
    explicit FiberExplorer(const FlowSpace& space, FiberCaps caps = {})
        : space_(space), caps_(caps) {
        flows_ = space.enumerate_flows(caps_.max_flow_table);
        slots_.reserve(flows_.size());
        for (const Flow& f : flows_) {
            std::vector<int> idx(space_.edge_count());
            for (int e = 0; e < space_.edge_count(); ++e)
                idx[e] = e * space_.order() + f.values[e];
            slots_.push_back(std::move(idx));
            id_of_.emplace(f.values, static_cast<std::uint32_t>(slots_.size() - 1));
        }
    }

    const FlowSpace& space() const { return space_; }
    const std::vector<Flow>& flows() const { return flows_; }
    const Flow& flow(std::uint32_t id) const { return flows_.at(id); }
    std::uint32_t neutral_id() const { return id_of(space_.neutral_flow()); }

    std::uint32_t id_of(const Flow& f) const {
        auto it = id_of_.find(f.values);
        if (it == id_of_.end()) throw std::invalid_argument("flow not in table");
        return it->second;
    }

    FlowIdMultiset multiset_of(const std::vector<Flow>& flows) const {
        FlowIdMultiset m;
        m.reserve(flows.size());
        for (const Flow& f : flows) m.push_back(id_of(f));
        std::sort(m.begin(), m.end());
        return m;
    }

    std::vector<Flow> flows_of(const FlowIdMultiset& m) const {
        std::vector<Flow> out;
        out.reserve(m.size());
        for (auto id : m) out.push_back(flow(id));
        return out;
    }

    LatticePoint sum_of(const FlowIdMultiset& m) const {
        LatticePoint p;
        p.edges = space_.edge_count();
        p.elems_per_edge = space_.order();
        p.degree = static_cast<std::int64_t>(m.size());
        p.coords.assign(static_cast<std::size_t>(p.edges) * p.elems_per_edge, 0);
        for (auto id : m)
            for (int slot : slots_[id]) ++p.coords[slot];
        return p;
    }

    /// All multisets of `target.degree` flows with vertex sum `target`,
    /// ordered lexicographically by flow index. Memoized.
    const std::vector<FlowIdMultiset>& enumerate_fiber(const LatticePoint& target) {
        auto it = memo_.find(target);
        if (it != memo_.end()) return it->second;

        std::vector<FlowIdMultiset> out;
        bool feasible = target.degree >= 0 &&
                        static_cast<int>(target.coords.size()) ==
                            space_.edge_count() * space_.order();
        for (int e = 0; feasible && e < space_.edge_count(); ++e) {
            std::int64_t row = 0;
            for (int g = 0; g < space_.order(); ++g) {
                auto c = target.at(e, g);
                if (c < 0) feasible = false;
                row += c;
            }
            if (row != target.degree) feasible = false;
        }
        if (feasible && target.degree > 0) {
            std::vector<std::int64_t> remaining = target.coords;
            FlowIdMultiset chosen;
            dfs_fiber(remaining, chosen, 0, static_cast<std::size_t>(target.degree), out);
        } else if (feasible && target.degree == 0) {
            out.push_back({});
        }
        return memo_.emplace(target, std::move(out)).first->second;
    }

    /// Distinct sub-multisets of `m` with size in [2, k_max].
    std::vector<FlowIdMultiset> sub_multisets(const FlowIdMultiset& m, std::size_t k_max) const {
        std::set<FlowIdMultiset> uniq;
        FlowIdMultiset cur;
        auto rec = [&](auto&& self, std::size_t next) -> void {
            if (cur.size() >= 2) uniq.insert(cur);
            if (cur.size() == k_max) return;
            for (std::size_t i = next; i < m.size(); ++i) {
                cur.push_back(m[i]);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        return {uniq.begin(), uniq.end()};
    }

    /// Neighbors of a node under degree-<=d moves, deduplicated, in
    /// deterministic order.
    std::vector<std::pair<FlowIdMultiset, FiberMove>> neighbors(const FlowIdMultiset& node,
                                                                std::size_t d) {
        std::vector<std::pair<FlowIdMultiset, FiberMove>> out;
        std::set<FlowIdMultiset> seen;
        for (const auto& removed : sub_multisets(node, std::min(d, node.size()))) {
            const auto& replacements = enumerate_fiber(sum_of(removed));
            for (const auto& added : replacements) {
                if (added == removed) continue;
                FlowIdMultiset next = multiset_minus(node, removed);
                next.insert(next.end(), added.begin(), added.end());
                std::sort(next.begin(), next.end());
                if (seen.insert(next).second)
                    out.emplace_back(std::move(next), FiberMove{removed, added});
            }
        }
        return out;
    }

    static FlowIdMultiset multiset_minus(const FlowIdMultiset& m, const FlowIdMultiset& sub) {
        FlowIdMultiset out;
        out.reserve(m.size() - sub.size());
        std::size_t j = 0;
        for (auto v : m) {
            if (j < sub.size() && sub[j] == v)
                ++j;
            else
                out.push_back(v);
        }
        if (j != sub.size()) throw std::logic_error("multiset_minus: not a sub-multiset");
        return out;
    }

    const FiberCaps& caps() const { return caps_; }

private:
    void dfs_fiber(std::vector<std::int64_t>& remaining, FlowIdMultiset& chosen,
                   std::uint32_t min_id, std::size_t depth_left,
                   std::vector<FlowIdMultiset>& out) {
        if (depth_left == 0) {
            out.push_back(chosen);
            if (static_cast<std::int64_t>(out.size()) > caps_.max_fiber_nodes)
                throw CapExceeded("fiber enumeration cap exceeded");
            return;
        }
        for (std::uint32_t id = min_id; id < flows_.size(); ++id) {
            bool ok = true;
            for (int slot : slots_[id])
                if (remaining[slot] == 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            for (int slot : slots_[id]) --remaining[slot];
            chosen.push_back(id);
            dfs_fiber(remaining, chosen, id, depth_left - 1, out);
            chosen.pop_back();
            for (int slot : slots_[id]) ++remaining[slot];
        }
    }

    const FlowSpace& space_;
    FiberCaps caps_;
    std::vector<Flow> flows_;
    std::vector<std::vector<int>> slots_;
    std::map<std::vector<int>, std::uint32_t> id_of_;
    std::unordered_map<LatticePoint, std::vector<FlowIdMultiset>, LatticePointHash> memo_;
};

/// Connectivity verdict for one fiber, with a lightweight certificate: the
/// number of spanning moves when connected, or a separating pair otherwise.
struct FiberConnectivity {
    bool connected = true;
    std::size_t fiber_size = 0;
    std::size_t certificate_size = 0;
    std::optional<std::pair<FlowIdMultiset, FlowIdMultiset>> separating_pair;
};

/// Breadth-first connectivity of the whole fiber of `target` under
/// degree-<=d moves.
inline FiberConnectivity fiber_connected_in_degree(FiberExplorer& ex, const LatticePoint& target,
                                                   std::size_t d) {
    const auto& fiber = ex.enumerate_fiber(target);
    FiberConnectivity result;
    result.fiber_size = fiber.size();
    if (fiber.size() <= 1) {
        result.certificate_size = 0;
        return result;
    }
    std::unordered_set<FlowIdMultiset, FlowIdMultisetHash> visited;
    std::queue<FlowIdMultiset> queue;
    visited.insert(fiber.front());
    queue.push(fiber.front());
    while (!queue.empty()) {
        FlowIdMultiset node = std::move(queue.front());
        queue.pop();
        for (auto& [next, move] : ex.neighbors(node, d)) {
            if (visited.insert(next).second) {
                if (static_cast<std::int64_t>(visited.size()) > ex.caps().max_bfs_nodes)
                    throw CapExceeded("fiber BFS cap exceeded");
                queue.push(std::move(next));
            }
        }
    }
    for (const auto& node : fiber) {
        if (!visited.count(node)) {
            result.connected = false;
            result.separating_pair = {fiber.front(), node};
            result.certificate_size = visited.size();
            return result;
        }
    }
    result.connected = true;
    result.certificate_size = fiber.size() - 1;
    return result;
}

/// Early-exit variant: is `to` reachable from `from` in the fiber graph of
/// their (common) sum?
inline bool same_fiber_component(FiberExplorer& ex, const FlowIdMultiset& from,
                                 const FlowIdMultiset& to, std::size_t d) {
    if (ex.sum_of(from).coords != ex.sum_of(to).coords)
        throw std::invalid_argument("same_fiber_component: sums differ");
    if (from == to) return true;
    std::unordered_set<FlowIdMultiset, FlowIdMultisetHash> visited{from};
    std::queue<FlowIdMultiset> queue;
    queue.push(from);
    while (!queue.empty()) {
        FlowIdMultiset node = std::move(queue.front());
        queue.pop();
        for (auto& [next, move] : ex.neighbors(node, d)) {
            if (next == to) return true;
            if (visited.insert(next).second) {
                if (static_cast<std::int64_t>(visited.size()) > ex.caps().max_bfs_nodes)
                    throw CapExceeded("fiber BFS cap exceeded");
                queue.push(std::move(next));
            }
        }
    }
    return false;
}

/// BFS with parent tracking; the returned moves turn `from` into `to`.
inline std::optional<std::vector<FiberMove>> find_move_path(FiberExplorer& ex,
                                                            const FlowIdMultiset& from,
                                                            const FlowIdMultiset& to,
                                                            std::size_t d) {
    if (from == to) return std::vector<FiberMove>{};
    std::unordered_map<FlowIdMultiset, std::pair<FlowIdMultiset, FiberMove>, FlowIdMultisetHash>
        parent;
    std::unordered_set<FlowIdMultiset, FlowIdMultisetHash> visited{from};
    std::queue<FlowIdMultiset> queue;
    queue.push(from);
    while (!queue.empty()) {
        FlowIdMultiset node = std::move(queue.front());
        queue.pop();
        for (auto& [next, move] : ex.neighbors(node, d)) {
            if (!visited.count(next)) {
                parent.emplace(next, std::make_pair(node, move));
                if (next == to) {
                    std::vector<FiberMove> path;
                    FlowIdMultiset cur = to;
                    while (cur != from) {
                        auto& [prev, mv] = parent.at(cur);
                        path.push_back(mv);
                        cur = prev;
                    }
                    std::reverse(path.begin(), path.end());
                    return path;
                }
                visited.insert(next);
                if (static_cast<std::int64_t>(visited.size()) > ex.caps().max_bfs_nodes)
                    throw CapExceeded("fiber BFS cap exceeded");
                queue.push(next);
            }
        }
    }
    return std::nullopt;
}

/// One fiber's entry in a generation-degree report.
struct EvidenceRecord {
    int degree = 0;
    LatticePoint target;
    std::size_t fiber_size = 0;
    int least_connecting_degree = -1;  // -1 means "> d_max"
    std::size_t certificate_size = 0;
};

struct EvidenceReport {
    int d_max = 0;
    int degree_max = 0;
    std::vector<EvidenceRecord> records;
    /// Max over fibers of the least connecting degree; a truncated
    /// lower-bound witness for the generation degree.
    int max_connecting_degree = 0;
    bool all_connected = true;
};

namespace detail {

inline void enumerate_degree_multisets(
    const FiberExplorer& ex, int degree,
    std::unordered_map<LatticePoint, std::vector<FlowIdMultiset>, LatticePointHash>& by_target,
    std::int64_t cap) {
    const auto n = static_cast<std::uint32_t>(ex.flows().size());
    FlowIdMultiset cur;
    std::int64_t count = 0;
    auto rec = [&](auto&& self, std::uint32_t min_id, int left) -> void {
        if (left == 0) {
            if (++count > cap) throw CapExceeded("fiber scan cap exceeded");
            by_target[ex.sum_of(cur)].push_back(cur);
            return;
        }
        for (std::uint32_t id = min_id; id < n; ++id) {
            cur.push_back(id);
            self(self, id, left - 1);
            cur.pop_back();
        }
    };
    rec(rec, 0, degree);
}

} // namespace detail

/// For every fiber of degree <= degree_max: the least d <= d_max connecting
/// it. Singleton fibers are reported with degree 1. Deterministic output
/// regardless of `jobs`; workers use private explorers.
inline EvidenceReport generation_degree_evidence(const FlowSpace& space, int d_max,
                                                 int degree_max, int jobs = 1,
                                                 FiberCaps caps = {}) {
    if (d_max < 1 || degree_max < 1) throw std::invalid_argument("degree bounds must be >= 1");
    EvidenceReport report;
    report.d_max = d_max;
    report.degree_max = degree_max;

    FiberExplorer base(space, caps);
    std::vector<std::pair<int, LatticePoint>> order;  // (degree, target), deterministic
    std::vector<std::vector<FlowIdMultiset>> fibers;
    for (int deg = 1; deg <= degree_max; ++deg) {
        std::unordered_map<LatticePoint, std::vector<FlowIdMultiset>, LatticePointHash> by_target;
        detail::enumerate_degree_multisets(base, deg, by_target, caps.max_fiber_nodes);
        std::vector<const LatticePoint*> keys;
        keys.reserve(by_target.size());
        for (auto& [target, nodes] : by_target) keys.push_back(&target);
        std::sort(keys.begin(), keys.end(),
                  [](const LatticePoint* a, const LatticePoint* b) { return a->coords < b->coords; });
        for (auto* key : keys) {
            order.emplace_back(deg, *key);
            fibers.push_back(std::move(by_target[*key]));
        }
    }

    report.records.assign(order.size(), {});
    auto work = [&](std::size_t begin, std::size_t end) {
        FiberExplorer ex(space, caps);
        for (std::size_t i = begin; i < end; ++i) {
            EvidenceRecord rec;
            rec.degree = order[i].first;
            rec.target = order[i].second;
            rec.fiber_size = fibers[i].size();
            if (fibers[i].size() <= 1) {
                rec.least_connecting_degree = 1;
                rec.certificate_size = 0;
            } else {
                rec.least_connecting_degree = -1;
                for (int d = 2; d <= d_max; ++d) {
                    auto conn = fiber_connected_in_degree(ex, rec.target, static_cast<std::size_t>(d));
                    rec.certificate_size = conn.certificate_size;
                    if (conn.connected) {
                        rec.least_connecting_degree = d;
                        break;
                    }
                }
            }
            report.records[i] = std::move(rec);
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1) {
        work(0, order.size());
    } else {
        std::vector<std::thread> threads;
        std::size_t chunk = (order.size() + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            std::size_t b = std::min(order.size(), j * chunk);
            std::size_t e = std::min(order.size(), (j + 1) * chunk);
            if (b < e) threads.emplace_back(work, b, e);
        }
        for (auto& t : threads) t.join();
    }

    for (const auto& rec : report.records) {
        if (rec.least_connecting_degree < 0)
            report.all_connected = false;
        else
            report.max_connecting_degree =
                std::max(report.max_connecting_degree, rec.least_connecting_degree);
    }
    return report;
}

/// Least m <= m_max such that lhs + m*neutral and rhs + m*neutral lie in one
/// component of their fiber graph under degree-<=d moves. The fixed saturation
/// point is the neutral flow.
inline std::optional<int> saturated_generation_check(FiberExplorer& ex, const Relation& r,
                                                     std::size_t d, int m_max) {
    if (!validate_relation(ex.space(), r))
        throw std::invalid_argument("saturated_generation_check: not a relation");
    FlowIdMultiset a = ex.multiset_of(r.lhs);
    FlowIdMultiset b = ex.multiset_of(r.rhs);
    const std::uint32_t nt = ex.neutral_id();
    for (int m = 0; m <= m_max; ++m) {
        if (same_fiber_component(ex, a, b, d)) return m;
        a.insert(std::lower_bound(a.begin(), a.end(), nt), nt);
        b.insert(std::lower_bound(b.begin(), b.end(), nt), nt);
    }
    return std::nullopt;
}

enum class RelationShape { Any, PairsAndTriples };

/// Seeded random relation: lhs is sampled (optionally restricted to flows
/// with support of size 2 or 3), rhs is produced by a chain of valid
/// degree-<=4 replacement moves, so the result is a relation by construction.
/// Both sides come back sorted; identical seeds give identical relations.
inline Relation random_relation(FiberExplorer& ex, int degree, RelationShape shape,
                                std::uint64_t seed) {
    const FlowSpace& space = ex.space();
    if (degree < 1) throw std::invalid_argument("random_relation: degree must be >= 1");
    if (shape == RelationShape::PairsAndTriples && space.tree().nodes().size() != 1)
        throw std::invalid_argument("pairs-and-triples shape needs a claw tree");
    Rng rng = seeded_rng(seed);

    auto support_size_ok = [&](std::uint32_t id) {
        auto s = space.support(ex.flow(id)).size();
        return s == 2 || s == 3;
    };

    std::vector<std::uint32_t> lhs_ids;
    for (int i = 0; i < degree; ++i) {
        if (shape == RelationShape::Any) {
            Socket s;
            s.values.assign(space.leaf_count(), 0);
            int sum = 0;
            for (int l = 0; l + 1 < space.leaf_count(); ++l) {
                s.values[l] = static_cast<int>(rng_below(rng, space.order()));
                sum = space.add(sum, s.values[l]);
            }
            s.values[space.leaf_count() - 1] = space.neg(sum);
            lhs_ids.push_back(ex.id_of(space.flow_from_socket(s)));
        } else {
            const int edges = space.edge_count();
            const bool want_triple = edges >= 3 && space.order() >= 3 && rng_below(rng, 2) == 0;
            Flow f{std::vector<int>(edges, 0)};
            if (!want_triple) {
                auto pos = rng_distinct(rng, edges, 2);
                int x = 1 + static_cast<int>(rng_below(rng, space.order() - 1));
                f.values[pos[0]] = x;
                f.values[pos[1]] = space.neg(x);
            } else {
                auto pos = rng_distinct(rng, edges, 3);
                int x = 1 + static_cast<int>(rng_below(rng, space.order() - 1));
                int y = 1 + static_cast<int>(rng_below(rng, space.order() - 1));
                while (space.add(x, y) == 0) y = 1 + static_cast<int>(rng_below(rng, space.order() - 1));
                f.values[pos[0]] = x;
                f.values[pos[1]] = y;
                f.values[pos[2]] = space.neg(space.add(x, y));
            }
            lhs_ids.push_back(ex.id_of(f));
        }
    }
    std::sort(lhs_ids.begin(), lhs_ids.end());

    FlowIdMultiset rhs_ids = lhs_ids;
    const int attempts = 2 * degree + 4;
    for (int a = 0; a < attempts && degree >= 2; ++a) {
        const int k = 2 + static_cast<int>(rng_below(rng, std::min(4, degree) - 1));
        auto pos = rng_distinct(rng, degree, k);
        FlowIdMultiset removed;
        removed.reserve(k);
        for (int p : pos) removed.push_back(rhs_ids[p]);
        const auto& candidates = ex.enumerate_fiber(ex.sum_of(removed));
        std::vector<const FlowIdMultiset*> usable;
        for (const auto& cand : candidates) {
            if (shape == RelationShape::PairsAndTriples) {
                bool ok = true;
                for (auto id : cand)
                    if (!support_size_ok(id)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
            }
            usable.push_back(&cand);
        }
        if (usable.empty()) continue;
        const FlowIdMultiset& added = *usable[rng_below(rng, usable.size())];
        rhs_ids = FiberExplorer::multiset_minus(rhs_ids, removed);
        rhs_ids.insert(rhs_ids.end(), added.begin(), added.end());
        std::sort(rhs_ids.begin(), rhs_ids.end());
    }

    Relation r{ex.flows_of(lhs_ids), ex.flows_of(rhs_ids)};
    if (!validate_relation(space, r))
        throw std::logic_error("random_relation produced an invalid relation");
    return r;
}

/// Translates every flow on both sides by h (the polytope action).
inline Relation translate_relation(const FlowSpace& space, const Relation& r, const Flow& h) {
    Relation out;
    out.lhs.reserve(r.lhs.size());
    out.rhs.reserve(r.rhs.size());
    for (const Flow& f : r.lhs) out.lhs.push_back(space.translate(f, h));
    for (const Flow& f : r.rhs) out.rhs.push_back(space.translate(f, h));
    return out;
}

} // namespace groupflow
