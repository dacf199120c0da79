#pragma once

// The constructive 3-Kimura reduction engine: quadric support reduction to
// Davenport-bounded supports on claw trees, and the full degree-<=4 case
// analysis for Z2 x Z2 relations among pairs and triples. Every emitted step
// is sum-checked, and traces replay standalone.
//
// Conventions for Z2 x Z2: the non-neutral elements g1, g2, g3 are the
// element indices 1 = (0,1), 2 = (1,0), 3 = (1,1). A triple (a,b,c) carries
// g1@a, g2@b, g3@c; a pair (d,e)_g carries g on both edges. Flows are ordered
// lexicographically by their edge-value tuples; every "pick" below takes the
// least candidate, so reductions are reproducible.

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "relations.hpp"

namespace groupflow {

struct MoveStep {
    enum class Side { Lhs, Rhs };
    Side side = Side::Lhs;
    int pad_delta = 0;  // neutral flows added to *both* sides before the step
    std::vector<Flow> removed;
    std::vector<Flow> added;
    std::string tag;
};

struct MoveTrace {
    std::string group_spec;
    std::string tree_spec;
    std::vector<Flow> lhs;
    std::vector<Flow> rhs;
    std::vector<MoveStep> steps;

    int total_padding() const {
        int m = 0;
        for (const auto& s : steps) m += s.pad_delta;
        return m;
    }
};

struct TraceError : std::runtime_error {
    explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

/// Dispatch failure of the case engine. Never expected on valid input; when
/// it fires it carries the residual relation for diagnosis.
struct KimuraDispatchError : std::runtime_error {
    KimuraDispatchError(const std::string& what, std::string residual_relation)
        : std::runtime_error(what + " | residual: " + residual_relation),
          residual(std::move(residual_relation)) {}
    std::string residual;
};

namespace rewrite_detail {

inline std::vector<Flow> sorted_flows(std::vector<Flow> flows) {
    std::sort(flows.begin(), flows.end());
    return flows;
}

inline bool erase_one(std::vector<Flow>& multiset, const Flow& f) {
    auto it = std::lower_bound(multiset.begin(), multiset.end(), f);
    if (it == multiset.end() || !(*it == f)) return false;
    multiset.erase(it);
    return true;
}

inline void insert_sorted(std::vector<Flow>& multiset, const Flow& f) {
    multiset.insert(std::upper_bound(multiset.begin(), multiset.end(), f), f);
}

/// Per-edge value multisets of removed vs added must agree; that is the
/// matrix-pair row condition, hence equal lattice sums.
inline void check_step_balance(const FlowSpace& space, const MoveStep& step) {
    if (step.removed.size() != step.added.size())
        throw TraceError("step removes and adds different cardinalities");
    if (step.removed.size() > 4 || step.removed.empty())
        throw TraceError("step cardinality must be 1..4");
    for (const Flow& f : step.removed)
        if (!space.is_flow(EdgeLabelling{f.values})) throw TraceError("removed entry is not a flow");
    for (const Flow& f : step.added)
        if (!space.is_flow(EdgeLabelling{f.values})) throw TraceError("added entry is not a flow");
    for (int e = 0; e < space.edge_count(); ++e) {
        std::vector<int> r, a;
        for (const Flow& f : step.removed) r.push_back(f.values[e]);
        for (const Flow& f : step.added) a.push_back(f.values[e]);
        std::sort(r.begin(), r.end());
        std::sort(a.begin(), a.end());
        if (r != a) throw TraceError("step does not preserve the lattice sum");
    }
}

} // namespace rewrite_detail

/// Replays a trace: pads both sides, applies each step to its side, and
/// requires the two sides to end equal as multisets. Throws TraceError with a
/// reason on any violation.
inline void verify_trace(const FlowSpace& space, const MoveTrace& trace) {
    using rewrite_detail::erase_one;
    using rewrite_detail::insert_sorted;
    auto lhs = rewrite_detail::sorted_flows(trace.lhs);
    auto rhs = rewrite_detail::sorted_flows(trace.rhs);
    const Flow nt = space.neutral_flow();
    std::size_t index = 0;
    for (const MoveStep& step : trace.steps) {
        ++index;
        if (step.pad_delta < 0) throw TraceError("negative padding");
        for (int i = 0; i < step.pad_delta; ++i) {
            insert_sorted(lhs, nt);
            insert_sorted(rhs, nt);
        }
        rewrite_detail::check_step_balance(space, step);
        auto& side = step.side == MoveStep::Side::Lhs ? lhs : rhs;
        for (const Flow& f : step.removed)
            if (!erase_one(side, f))
                throw TraceError("step " + std::to_string(index) +
                                 " removes a flow absent from its side");
        for (const Flow& f : step.added) insert_sorted(side, f);
    }
    if (!(lhs == rhs)) throw TraceError("sides differ after replaying the trace");
}

/// One-sided replay helper: applies the steps of one side to a multiset
/// (pads included). Used for the standalone support-reduction trace.
inline std::vector<Flow> replay_side(const FlowSpace& space, std::vector<Flow> start,
                                     const std::vector<MoveStep>& steps, MoveStep::Side side) {
    using rewrite_detail::erase_one;
    using rewrite_detail::insert_sorted;
    auto cur = rewrite_detail::sorted_flows(std::move(start));
    const Flow nt = space.neutral_flow();
    for (const MoveStep& step : steps) {
        for (int i = 0; i < step.pad_delta; ++i) insert_sorted(cur, nt);
        if (step.side != side) continue;
        rewrite_detail::check_step_balance(space, step);
        for (const Flow& f : step.removed)
            if (!erase_one(cur, f)) throw TraceError("one-sided replay: missing flow");
        for (const Flow& f : step.added) insert_sorted(cur, f);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Trace text format
// ---------------------------------------------------------------------------

inline std::string serialize_trace(const FlowSpace& space, const MoveTrace& trace) {
    std::ostringstream os;
    auto flows_line = [&](const std::vector<Flow>& flows) {
        std::string s;
        for (std::size_t i = 0; i < flows.size(); ++i) {
            if (i) s += " + ";
            s += space.serialize_flow(flows[i]);
        }
        return s;
    };
    os << "groupflow-trace v1\n";
    os << "group " << trace.group_spec << "\n";
    os << "tree " << trace.tree_spec << "\n";
    os << "lhs " << flows_line(trace.lhs) << "\n";
    os << "rhs " << flows_line(trace.rhs) << "\n";
    for (const MoveStep& s : trace.steps) {
        os << "step side=" << (s.side == MoveStep::Side::Lhs ? "lhs" : "rhs")
           << " pad=" << s.pad_delta << " tag=" << s.tag << " remove " << flows_line(s.removed)
           << " add " << flows_line(s.added) << "\n";
    }
    os << "end pads=" << trace.total_padding() << " steps=" << trace.steps.size() << "\n";
    return os.str();
}

struct ParsedTrace {
    std::string group_spec;
    std::string tree_spec;
    MoveTrace trace;
};

inline ParsedTrace parse_trace(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "groupflow-trace v1")
        throw TraceError("missing trace header");
    ParsedTrace out;
    auto expect_prefix = [&](const std::string& l, const std::string& prefix) {
        if (l.rfind(prefix, 0) != 0) throw TraceError("expected line starting with " + prefix);
        return l.substr(prefix.size());
    };
    if (!std::getline(is, line)) throw TraceError("truncated trace");
    out.group_spec = expect_prefix(line, "group ");
    if (!std::getline(is, line)) throw TraceError("truncated trace");
    out.tree_spec = expect_prefix(line, "tree ");
    out.trace.group_spec = out.group_spec;
    out.trace.tree_spec = out.tree_spec;

    FlowSpace space(Tree::parse_spec(out.tree_spec), FiniteAbelianGroup::parse(out.group_spec));
    auto parse_flows = [&](std::string_view part) {
        std::vector<Flow> flows;
        std::size_t start = 0;
        while (start < part.size()) {
            auto plus = part.find('+', start);
            auto piece = part.substr(start, plus == std::string_view::npos ? std::string_view::npos
                                                                           : plus - start);
            auto a = piece.find_first_not_of(" \t");
            if (a != std::string_view::npos) {
                auto b = piece.find_last_not_of(" \t");
                flows.push_back(space.parse_flow(piece.substr(a, b - a + 1)));
            }
            if (plus == std::string_view::npos) break;
            start = plus + 1;
        }
        return flows;
    };

    if (!std::getline(is, line)) throw TraceError("truncated trace");
    out.trace.lhs = parse_flows(expect_prefix(line, "lhs "));
    if (!std::getline(is, line)) throw TraceError("truncated trace");
    out.trace.rhs = parse_flows(expect_prefix(line, "rhs "));

    bool saw_end = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("end", 0) == 0) {
            saw_end = true;
            break;
        }
        auto rest = expect_prefix(line, "step side=");
        MoveStep step;
        if (rest.rfind("lhs", 0) == 0)
            step.side = MoveStep::Side::Lhs;
        else if (rest.rfind("rhs", 0) == 0)
            step.side = MoveStep::Side::Rhs;
        else
            throw TraceError("bad side in step");
        auto pad_pos = rest.find(" pad=");
        auto tag_pos = rest.find(" tag=");
        auto rem_pos = rest.find(" remove ");
        auto add_pos = rest.find(" add ");
        if (pad_pos == std::string::npos || tag_pos == std::string::npos ||
            rem_pos == std::string::npos || add_pos == std::string::npos)
            throw TraceError("malformed step line");
        step.pad_delta = std::stoi(rest.substr(pad_pos + 5, tag_pos - pad_pos - 5));
        step.tag = rest.substr(tag_pos + 5, rem_pos - tag_pos - 5);
        step.removed = parse_flows(rest.substr(rem_pos + 8, add_pos - rem_pos - 8));
        step.added = parse_flows(rest.substr(add_pos + 5));
        out.trace.steps.push_back(std::move(step));
    }
    if (!saw_end) throw TraceError("missing end line");
    return out;
}

// ---------------------------------------------------------------------------
// Support reduction (any finite abelian group, claw trees)
// ---------------------------------------------------------------------------

struct SupportReduction {
    std::vector<Flow> reduced;
    std::vector<MoveStep> steps;
    int m_used = 0;
};

namespace rewrite_detail {

/// Splits `f` (with a neutral consumed) into two flows along a zero-sum
/// proper subset of its support. Chooses the lexicographically least subset.
inline std::pair<Flow, Flow> split_once(const FlowSpace& space, const Flow& f) {
    auto supp = space.support(f);
    std::vector<GroupElement> values;
    values.reserve(supp.size());
    for (int e : supp) values.push_back(space.element(f.values[e]));
    auto subset = zero_sum_proper_subset(space.group(), values);
    if (!subset)
        throw std::logic_error("support above the Davenport bound admits no zero-sum split");
    std::vector<char> in_subset(supp.size(), 0);
    for (auto i : *subset) in_subset[i] = 1;
    Flow part1{std::vector<int>(space.edge_count(), 0)};
    Flow part2{std::vector<int>(space.edge_count(), 0)};
    for (std::size_t i = 0; i < supp.size(); ++i)
        (in_subset[i] ? part1 : part2).values[supp[i]] = f.values[supp[i]];
    return {part1, part2};
}

} // namespace rewrite_detail

/// Rewrites a claw-tree multiset with quadrics only, until every flow has
/// support of cardinality at most D(G). Each split consumes one neutral flow
/// (taken from the multiset when available, otherwise counted as padding).
inline SupportReduction reduce_support(const FlowSpace& space, const std::vector<Flow>& flows,
                                       MoveStep::Side side = MoveStep::Side::Lhs) {
    if (space.tree().nodes().size() != 1)
        throw std::invalid_argument("reduce_support: claw trees only");
    const int bound = davenport_constant(space.group());
    const Flow nt = space.neutral_flow();
    SupportReduction out;
    out.reduced = rewrite_detail::sorted_flows(flows);
    for (const Flow& f : out.reduced) space.require_flow(f);

    while (true) {
        const Flow* big = nullptr;
        for (const Flow& f : out.reduced)
            if (space.support(f).size() > static_cast<std::size_t>(bound)) {
                big = &f;
                break;
            }
        if (!big) break;
        Flow target = *big;
        auto [part1, part2] = rewrite_detail::split_once(space, target);
        MoveStep step;
        step.side = side;
        step.tag = "support-split";
        if (!rewrite_detail::erase_one(out.reduced, nt)) {
            step.pad_delta = 1;
            ++out.m_used;
        }
        rewrite_detail::erase_one(out.reduced, target);
        step.removed = {target, nt};
        step.added = {part1, part2};
        rewrite_detail::check_step_balance(space, step);
        rewrite_detail::insert_sorted(out.reduced, part1);
        rewrite_detail::insert_sorted(out.reduced, part2);
        out.steps.push_back(std::move(step));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The Z2 x Z2 engine
// ---------------------------------------------------------------------------

namespace rewrite_detail {

// Flows packed two bits per edge, edge 0 highest, so integer order equals
// lexicographic order on edge-value tuples.
using Packed = std::uint64_t;

class KimuraEngine {
public:
    KimuraEngine(const FlowSpace& space, const std::vector<Flow>& lhs,
                 const std::vector<Flow>& rhs, MoveTrace& trace, int pad_budget)
        : space_(space), trace_(trace), pad_budget_(pad_budget) {
        if (space_.group().moduli() != std::vector<int>{2, 2})
            throw std::invalid_argument("kimura engine: group must be 2,2");
        if (space_.tree().nodes().size() != 1)
            throw std::invalid_argument("kimura engine: claw trees only");
        edges_ = space_.edge_count();
        if (edges_ > 30) throw CapExceeded("kimura engine: more than 30 edges");
        for (const Flow& f : lhs) side_[0].push_back(pack(f));
        for (const Flow& f : rhs) side_[1].push_back(pack(f));
        std::sort(side_[0].begin(), side_[0].end());
        std::sort(side_[1].begin(), side_[1].end());
        for (int s = 0; s < 2; ++s)
            for (Packed f : side_[s])
                if (kind_of(f) == Kind::Other)
                    throw std::invalid_argument(
                        "kimura engine: flows must be neutral, pairs or triples");
    }

    int pads_used() const { return pads_used_; }

    void run() {
        std::tuple<int, int, std::size_t> last_measure{INT32_MAX, INT32_MAX, SIZE_MAX};
        std::size_t iterations = 0;
        const std::size_t limit = 1000 + 200 * (side_[0].size() + side_[1].size() + 8);
        while (true) {
            strip();
            if (side_[0].empty() && side_[1].empty()) return;
            if (side_[0].size() != side_[1].size())
                throw std::logic_error("kimura engine: side cardinalities diverged");
            if (++iterations > limit) fail("iteration limit exceeded");
            if (triple_count(X()) < triple_count(Y())) view_swapped_ = !view_swapped_;
            auto measure = std::tuple{std::max(triple_count(X()), triple_count(Y())),
                                      std::min(triple_count(X()), triple_count(Y())),
                                      side_[0].size()};
            if (measure > last_measure)
                throw std::logic_error("kimura engine: induction measure increased");
            last_measure = measure;
            const int t = triple_count(X());
            if (t == 0)
                no_triples();
            else if (t == 1)
                one_triple();
            else
                many_triples();
        }
    }

private:
    enum class Kind { Neutral, Pair, Triple, Other };

    // --- packing -----------------------------------------------------------

    int shift(int e) const { return 2 * (edges_ - 1 - e); }
    int value_at(Packed f, int e) const { return static_cast<int>((f >> shift(e)) & 3u); }
    Packed with_value(Packed f, int e, int v) const {
        f &= ~(Packed{3} << shift(e));
        return f | (static_cast<Packed>(v) << shift(e));
    }
    Packed pack(const Flow& f) const {
        space_.require_flow(f);
        Packed p = 0;
        for (int e = 0; e < edges_; ++e) p = (p << 2) | static_cast<unsigned>(f.values[e]);
        return p;
    }
    Flow unpack(Packed p) const {
        Flow f{std::vector<int>(edges_, 0)};
        for (int e = 0; e < edges_; ++e) f.values[e] = value_at(p, e);
        return f;
    }

    Packed make_pair(int g, int a, int b) const {
        if (a == b) throw std::logic_error("degenerate pair emitted");
        return with_value(with_value(0, a, g), b, g);
    }
    /// Triple by the edges of g1, g2, g3.
    Packed make_triple(const std::array<int, 3>& tri) const {
        if (tri[0] == tri[1] || tri[0] == tri[2] || tri[1] == tri[2])
            throw std::logic_error("degenerate triple emitted");
        Packed p = 0;
        for (int g = 1; g <= 3; ++g) p = with_value(p, tri[g - 1], g);
        return p;
    }

    Kind kind_of(Packed f) const {
        int nonzero = 0;
        int first_val = -1, first_edge = -1;
        std::array<int, 4> elem_count{0, 0, 0, 0};
        for (int e = 0; e < edges_; ++e) {
            int v = value_at(f, e);
            if (v == 0) continue;
            ++nonzero;
            ++elem_count[v];
            if (first_val < 0) {
                first_val = v;
                first_edge = e;
            }
        }
        (void)first_edge;
        if (nonzero == 0) return Kind::Neutral;
        if (nonzero == 2 && elem_count[first_val] == 2) return Kind::Pair;
        if (nonzero == 3 && elem_count[1] == 1 && elem_count[2] == 1 && elem_count[3] == 1)
            return Kind::Triple;
        return Kind::Other;
    }

    /// Edge of each element of a triple, indexed by element-1.
    std::array<int, 3> triple_edges(Packed f) const {
        std::array<int, 3> tri{-1, -1, -1};
        for (int e = 0; e < edges_; ++e) {
            int v = value_at(f, e);
            if (v != 0) tri[v - 1] = e;
        }
        return tri;
    }

    std::pair<int, std::pair<int, int>> pair_parts(Packed f) const {
        int g = 0, a = -1, b = -1;
        for (int e = 0; e < edges_; ++e) {
            int v = value_at(f, e);
            if (v == 0) continue;
            g = v;
            if (a < 0)
                a = e;
            else
                b = e;
        }
        return {g, {a, b}};
    }

    // --- sides and scans -----------------------------------------------------

    std::vector<Packed>& X() { return side_[view_swapped_ ? 1 : 0]; }
    std::vector<Packed>& Y() { return side_[view_swapped_ ? 0 : 1]; }
    int xi() const { return view_swapped_ ? 1 : 0; }
    int yi() const { return view_swapped_ ? 0 : 1; }

    int triple_count(const std::vector<Packed>& s) const {
        int t = 0;
        for (Packed f : s)
            if (kind_of(f) == Kind::Triple) ++t;
        return t;
    }
    int triple_count(int side) const { return triple_count(side_[side]); }

    bool contains(const std::vector<Packed>& s, Packed f) const {
        return std::binary_search(s.begin(), s.end(), f);
    }

    /// Unique triples of a side, ascending.
    std::vector<Packed> triples(const std::vector<Packed>& s) const {
        std::vector<Packed> out;
        for (Packed f : s)
            if (kind_of(f) == Kind::Triple && (out.empty() || out.back() != f)) out.push_back(f);
        return out;
    }

    /// Unique (a < b) pairs of element g, ascending.
    std::vector<std::pair<int, int>> elem_pairs(const std::vector<Packed>& s, int g) const {
        std::vector<std::pair<int, int>> out;
        for (Packed f : s) {
            if (kind_of(f) != Kind::Pair) continue;
            auto [pg, ab] = pair_parts(f);
            if (pg != g) continue;
            if (out.empty() || out.back() != ab) out.push_back(ab);
        }
        return out;
    }

    /// Least g-pair of the side containing edge e; (-1,-1) when none.
    std::pair<int, int> find_pair_with(const std::vector<Packed>& s, int g, int e) const {
        for (auto& ab : elem_pairs(s, g))
            if (ab.first == e || ab.second == e) return ab;
        return {-1, -1};
    }

    static int other_end(const std::pair<int, int>& ab, int e) {
        return ab.first == e ? ab.second : ab.first;
    }

    // --- bookkeeping ---------------------------------------------------------

    void strip() {
        auto& a = side_[0];
        auto& b = side_[1];
        std::vector<Packed> keep_a, keep_b;
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) {
                ++i;
                ++j;
            } else if (a[i] < b[j]) {
                keep_a.push_back(a[i++]);
            } else {
                keep_b.push_back(b[j++]);
            }
        }
        while (i < a.size()) keep_a.push_back(a[i++]);
        while (j < b.size()) keep_b.push_back(b[j++]);
        a.swap(keep_a);
        b.swap(keep_b);
    }

    [[noreturn]] void fail(const std::string& why) {
        std::string residual;
        for (int s = 0; s < 2; ++s) {
            if (s) residual += " = ";
            for (std::size_t i = 0; i < side_[s].size(); ++i) {
                if (i) residual += " + ";
                residual += space_.serialize_flow(unpack(side_[s][i]));
            }
            if (side_[s].empty()) residual += "(empty)";
        }
        throw KimuraDispatchError("kimura engine: " + why, residual);
    }

    /// Emits one move on the given side (0 = current X view applies to the
    /// underlying side). Pads both sides when the move consumes neutrals the
    /// side does not have. Checks sums and multiset membership.
    void emit(int side_index, const std::vector<Packed>& removed, const std::vector<Packed>& added,
              const std::string& tag) {
        auto& target = side_[side_index];
        auto& other = side_[1 - side_index];
        int need = 0;
        for (Packed f : removed)
            if (f == 0) ++need;
        int have = 0;
        for (Packed f : target)
            if (f == 0) ++have;
        int pad = std::max(0, need - have);
        if (pads_used_ + pad > pad_budget_)
            throw CapExceeded("kimura engine: padding budget exhausted");
        for (int i = 0; i < pad; ++i) {
            target.insert(target.begin(), 0);
            other.insert(other.begin(), 0);
        }
        pads_used_ += pad;

        MoveStep step;
        step.side = side_index == 0 ? MoveStep::Side::Lhs : MoveStep::Side::Rhs;
        step.pad_delta = pad;
        step.tag = tag;
        for (Packed f : removed) step.removed.push_back(unpack(f));
        for (Packed f : added) step.added.push_back(unpack(f));
        check_step_balance(space_, step);

        std::vector<Packed> work = target;
        for (Packed f : removed) {
            auto it = std::lower_bound(work.begin(), work.end(), f);
            if (it == work.end() || *it != f)
                throw std::logic_error("kimura engine removed a flow absent from its side");
            work.erase(it);
        }
        for (Packed f : added) work.insert(std::upper_bound(work.begin(), work.end(), f), f);
        target.swap(work);
        trace_.steps.push_back(std::move(step));
    }

    void emit_on_x(const std::vector<Packed>& removed, const std::vector<Packed>& added,
                   const std::string& tag) {
        emit(xi(), removed, added, tag);
    }
    void emit_on_y(const std::vector<Packed>& removed, const std::vector<Packed>& added,
                   const std::string& tag) {
        emit(yi(), removed, added, tag);
    }

    // --- no triples (only quadrics are ever used here) -----------------------

    void no_triples() {
        if (triple_count(Y()) != 0) fail("no-triples case saw a triple on the low side");
        Packed pa = 0;
        for (Packed f : X())
            if (kind_of(f) == Kind::Pair) {
                pa = f;
                break;
            }
        if (pa == 0) fail("no pair available on a nonempty side");
        auto [g, ab] = pair_parts(pa);
        auto qb = find_pair_with(Y(), g, ab.first);
        int shared = ab.first;
        if (qb.first < 0) {
            qb = find_pair_with(Y(), g, ab.second);
            shared = ab.second;
        }
        if (qb.first < 0) fail("row balance violated: no matching pair on the other side");
        const int r = other_end(ab, shared);
        const int s = shared;
        const int c = other_end(qb, shared);
        if (c == r) fail("strip missed a common pair");
        auto pc = find_pair_with(X(), g, c);
        if (pc.first < 0) fail("row balance violated: no pair through the chased edge");
        const int d = other_end(pc, c);
        if (d == s) fail("strip missed a common pair");
        if (d != r) {
            emit_on_x({make_pair(g, r, s), make_pair(g, c, d)},
                      {make_pair(g, r, d), make_pair(g, s, c)}, "pairs-chain");
        } else {
            auto qe = find_pair_with(Y(), g, r);
            if (qe.first < 0) fail("row balance violated in the pair chain");
            const int e = other_end(qe, r);
            if (e == s || e == c) fail("strip missed a common pair");
            emit_on_y({make_pair(g, r, e), make_pair(g, s, c)},
                      {make_pair(g, r, s), make_pair(g, e, c)}, "pairs-chain");
        }
    }

    // --- one triple on each side ---------------------------------------------

    void one_triple() {
        if (triple_count(Y()) != 1)
            fail("parity forces exactly one triple on each side");  // cf. the g1-count parity
        const auto ta = triple_edges(triples(X()).front());
        const auto tb = triple_edges(triples(Y()).front());
        std::vector<int> agree;
        for (int g = 1; g <= 3; ++g)
            if (ta[g - 1] == tb[g - 1]) agree.push_back(g);
        if (agree.size() == 3) fail("strip missed equal triples");
        if (agree.size() == 2) {
            int k = 1;
            while (std::find(agree.begin(), agree.end(), k) != agree.end()) ++k;
            two_agreements(xi(), yi(), ta, tb, k, "one-triple-agree2");
        } else if (agree.size() == 1) {
            one_agreement(ta, tb, agree.front());
        } else {
            no_agreement(ta, tb);
        }
    }

    /// Triples agree outside role k; move the disagreeing element across.
    /// Sides are explicit because the one-agreement chase calls the mirror.
    void two_agreements(int px, int qy, const std::array<int, 3>& ta,
                        const std::array<int, 3>& tb, int k, const std::string& tag) {
        const int p = ta[k - 1];
        const int c = tb[k - 1];
        auto pc = find_pair_with(side_[px], k, c);
        if (pc.first >= 0) {
            const int d = other_end(pc, c);
            if (d != p) {
                auto shifted = ta;
                shifted[k - 1] = c;
                emit(px, {make_triple(ta), make_pair(k, c, d)},
                     {make_triple(shifted), make_pair(k, p, d)}, tag);
                return;
            }
            auto qe = find_pair_with(side_[qy], k, p);
            if (qe.first < 0) fail("row balance violated in the two-agreement case");
            const int e = other_end(qe, p);
            if (e == c) fail("strip missed a common pair");
            auto shifted = tb;
            shifted[k - 1] = p;
            emit(qy, {make_triple(tb), make_pair(k, p, e)},
                 {make_triple(shifted), make_pair(k, c, e)}, tag);
            return;
        }
        fail("row balance violated: no pair covers the moved element");
    }

    void one_agreement(const std::array<int, 3>& ta, const std::array<int, 3>& tb, int alpha) {
        std::array<int, 2> rest{};
        int idx = 0;
        for (int g = 1; g <= 3; ++g)
            if (g != alpha) rest[idx++] = g;
        const int beta = rest[0], gamma = rest[1];
        const int u = ta[beta - 1], v = ta[gamma - 1];
        const int b = tb[beta - 1], c = tb[gamma - 1];
        if (b != v) {
            one_agreement_chase(ta, tb, alpha, beta, gamma);
        } else if (c != u) {
            one_agreement_chase(ta, tb, alpha, gamma, beta);
        } else {
            one_agreement_swapped(ta, tb, alpha, beta, gamma);
        }
    }

    /// Case "B's rho-edge avoids A's support pattern": chase rho-pairs until a
    /// common pair appears or the triples align further.
    void one_agreement_chase(const std::array<int, 3>& ta, const std::array<int, 3>& tb, int alpha,
                             int rho, int rho_bar) {
        (void)alpha;
        (void)rho_bar;
        const int u = ta[rho - 1];
        const int b = tb[rho - 1];
        auto pd = find_pair_with(X(), rho, b);
        if (pd.first < 0) fail("row balance violated: nothing covers the disagreeing edge");
        const int d = other_end(pd, b);
        if (d != u) {
            auto shifted = ta;
            shifted[rho - 1] = b;
            emit_on_x({make_triple(ta), make_pair(rho, b, d)},
                      {make_triple(shifted), make_pair(rho, d, u)}, "one-triple-align");
            return;
        }
        // X holds (b,u); walk the rho-pair chain.
        auto qe = find_pair_with(Y(), rho, u);
        if (qe.first < 0) fail("row balance violated in the one-agreement chain");
        const int e = other_end(qe, u);
        if (e == b) fail("strip missed a common pair");
        auto pf = find_pair_with(X(), rho, e);
        if (pf.first < 0) fail("row balance violated in the one-agreement chain");
        const int f = other_end(pf, e);
        if (f == u) fail("strip missed a common pair");
        if (f != b) {
            emit_on_x({make_pair(rho, e, f), make_pair(rho, b, u)},
                      {make_pair(rho, e, u), make_pair(rho, f, b)}, "one-triple-pairfix");
            return;
        }
        auto qg = find_pair_with(Y(), rho, b);
        if (qg.first < 0) fail("row balance violated in the one-agreement chain");
        const int g = other_end(qg, b);
        if (g == u || g == e) fail("strip missed a common pair");
        emit_on_y({make_pair(rho, u, e), make_pair(rho, b, g)},
                  {make_pair(rho, e, g), make_pair(rho, b, u)}, "one-triple-pairfix");
    }

    /// The b==v, c==u deadlock: normalize stray pairs, then run the paper's
    /// 3.1/3.2/3.3 chase for both non-agreeing elements; the fully stuck state
    /// is resolved by the degree-3 key relation.
    void one_agreement_swapped(const std::array<int, 3>& ta, const std::array<int, 3>& tb,
                               int alpha, int beta, int gamma) {
        const int w = ta[alpha - 1], u = ta[beta - 1], v = ta[gamma - 1];

        // Normalizations: a rho-pair avoiding the anchor edge must equal
        // {w, partner}; any other such pair moves the triple and re-dispatches.
        struct Norm {
            int side;     // 0 = X view, 1 = Y view
            int rho;      // pair element
            int anchor;   // pairs must contain this edge ...
            int partner;  // ... or equal {w, partner}
        };
        const std::array<Norm, 4> norms{Norm{0, beta, u, v}, Norm{1, beta, v, u},
                                        Norm{0, gamma, v, u}, Norm{1, gamma, u, v}};
        for (const Norm& nm : norms) {
            auto& s = nm.side == 0 ? X() : Y();
            const auto& t_edges = nm.side == 0 ? ta : tb;
            const auto allowed = std::minmax(w, nm.partner);
            for (auto& ab : elem_pairs(s, nm.rho)) {
                if (ab.first == nm.anchor || ab.second == nm.anchor) continue;
                if (ab == std::pair<int, int>(allowed)) continue;
                // Some endpoint lies outside {w, u, v}; move the triple there.
                int p = -1;
                for (int cand : {ab.first, ab.second})
                    if (cand != w && cand != u && cand != v) p = cand;
                if (p < 0) fail("stray pair inside the triple support");
                int q = other_end(ab, p);
                auto shifted = t_edges;
                shifted[nm.rho - 1] = p;
                emit(nm.side == 0 ? xi() : yi(),
                     {make_pair(nm.rho, ab.first, ab.second), make_triple(t_edges)},
                     {make_triple(shifted), make_pair(nm.rho, q, nm.anchor)},
                     "one-triple-normalize");
                return;
            }
        }

        // chase(rho): X must cover B's rho-edge, Y must cover A's rho-edge.
        // Returns true when it emitted a move; records the stuck pair edges.
        auto chase = [&](int rho, int m_a, int m_b, bool& stuck) -> bool {
            stuck = false;
            auto pd = find_pair_with(X(), rho, m_a);
            auto qe = find_pair_with(Y(), rho, m_b);
            if (pd.first < 0 || qe.first < 0) fail("row balance violated in the swapped case");
            const int d = other_end(pd, m_a);
            const int e = other_end(qe, m_b);
            if (d == m_b) {
                if (e == m_a) fail("strip missed a common pair");
                // X holds (m_b, m_a); Y holds (w, m_b); X holds (w, m_a).
                auto pf = find_pair_with(X(), rho, w);
                if (pf.first < 0) fail("row balance violated in the swapped chase");
                if (other_end(pf, w) != m_a) fail("normalization left a stray pair");
                std::pair<int, int> qg{-1, -1};
                for (auto& abg : elem_pairs(Y(), rho)) {
                    if (abg.first != m_a && abg.second != m_a) continue;
                    int og = other_end(abg, m_a);
                    if (og != w && og != m_b) {
                        qg = abg;
                        break;
                    }
                }
                if (qg.first < 0) fail("row balance violated in the swapped chase");
                const int g = other_end(qg, m_a);
                emit_on_y({make_pair(rho, w, m_b), make_pair(rho, m_a, g)},
                          {make_pair(rho, w, m_a), make_pair(rho, m_b, g)}, "one-triple-swapfix");
                return true;
            }
            if (d != w) fail("normalization left a stray pair");
            if (e == m_a) {
                // Mirror: Y holds (m_b, m_a); X holds (w, m_a); Y holds (w, m_b).
                auto qf = find_pair_with(Y(), rho, w);
                if (qf.first < 0) fail("row balance violated in the swapped chase");
                if (other_end(qf, w) != m_b) fail("normalization left a stray pair");
                std::pair<int, int> pg{-1, -1};
                for (auto& abg : elem_pairs(X(), rho)) {
                    if (abg.first != m_b && abg.second != m_b) continue;
                    int og = other_end(abg, m_b);
                    if (og != w && og != m_a) {
                        pg = abg;
                        break;
                    }
                }
                if (pg.first < 0) fail("row balance violated in the swapped chase");
                const int g = other_end(pg, m_b);
                emit_on_x({make_pair(rho, w, m_a), make_pair(rho, m_b, g)},
                          {make_pair(rho, w, m_b), make_pair(rho, m_a, g)}, "one-triple-swapfix");
                return true;
            }
            if (e != w) fail("normalization left a stray pair");
            stuck = true;  // X holds (w, m_a), Y holds (w, m_b)
            return false;
        };

        bool stuck_beta = false, stuck_gamma = false;
        if (chase(beta, v, u, stuck_beta)) return;
        if (!stuck_beta) fail("swapped-case chase neither moved nor stuck");
        if (chase(gamma, u, v, stuck_gamma)) return;
        if (!stuck_gamma) fail("swapped-case chase neither moved nor stuck");
        // Fully stuck: the degree-3 key relation.
        emit_on_x({make_triple(ta), make_pair(beta, w, v), make_pair(gamma, w, u)},
                  {make_triple(tb), make_pair(beta, w, u), make_pair(gamma, w, v)},
                  "one-triple-deg3");
    }

    void no_agreement(const std::array<int, 3>& ta, const std::array<int, 3>& tb) {
        std::array<int, 3> sa = ta, sb = tb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) {
            no_agreement_diff_support(ta, tb);
        } else {
            no_agreement_cyclic(ta, tb);
        }
    }

    void no_agreement_diff_support(const std::array<int, 3>& ta, const std::array<int, 3>& tb) {
        int role = 0;
        for (int g = 1; g <= 3 && role == 0; ++g)
            if (tb[g - 1] != ta[0] && tb[g - 1] != ta[1] && tb[g - 1] != ta[2]) role = g;
        if (role == 0) fail("different supports expected");
        const int a = tb[role - 1];
        const int r = ta[role - 1];
        auto pf = find_pair_with(X(), role, a);
        if (pf.first < 0) fail("row balance violated: off-support edge uncovered");
        const int f = other_end(pf, a);
        if (f != r) {
            auto shifted = ta;
            shifted[role - 1] = a;
            emit_on_x({make_triple(ta), make_pair(role, a, f)},
                      {make_triple(shifted), make_pair(role, f, r)}, "one-triple-align");
            return;
        }
        // X holds (a, r); chase the role-pairs.
        auto qg = find_pair_with(Y(), role, r);
        if (qg.first < 0) fail("row balance violated in the support chase");
        const int g = other_end(qg, r);
        if (g == a) fail("strip missed a common pair");
        auto ph = find_pair_with(X(), role, g);
        if (ph.first < 0) fail("row balance violated in the support chase");
        const int h = other_end(ph, g);
        if (h == r) fail("strip missed a common pair");
        if (h != a) {
            emit_on_x({make_pair(role, a, r), make_pair(role, g, h)},
                      {make_pair(role, g, r), make_pair(role, h, a)}, "one-triple-pairfix");
            return;
        }
        std::pair<int, int> qi{-1, -1};
        for (auto& ab : elem_pairs(Y(), role)) {
            if (ab.first != a && ab.second != a) continue;
            int oi = other_end(ab, a);
            if (oi != r && oi != g) {
                qi = ab;
                break;
            }
        }
        if (qi.first < 0) fail("row balance violated in the support chase");
        const int i2 = other_end(qi, a);
        emit_on_y({make_pair(role, g, r), make_pair(role, a, i2)},
                  {make_pair(role, g, a), make_pair(role, r, i2)}, "one-triple-pairfix");
    }

    void no_agreement_cyclic(const std::array<int, 3>& ta, const std::array<int, 3>& tb) {
        // Same support, no element in place: per element, either unstick one
        // pair or certify the stuck pair on both sides; all three stuck gives
        // the degree-4 key relation.
        std::array<std::pair<int, int>, 3> stuck_x{}, stuck_y{};
        for (int g = 1; g <= 3; ++g) {
            const int e = ta[g - 1];
            const int m = tb[g - 1];
            int tau = -1;
            for (int cand : ta)
                if (cand != e && cand != m) tau = cand;
            auto pa = find_pair_with(X(), g, m);
            if (pa.first < 0) fail("row balance violated in the cyclic case");
            const int a = other_end(pa, m);
            if (a != e && a != tau) {
                auto shifted = ta;
                shifted[g - 1] = a;
                emit_on_x({make_pair(g, m, a), make_triple(ta)},
                          {make_triple(shifted), make_pair(g, m, e)}, "one-triple-align");
                return;
            }
            if (a == e) {
                auto qb = find_pair_with(Y(), g, e);
                if (qb.first < 0) fail("row balance violated in the cyclic case");
                const int b = other_end(qb, e);
                if (b == m) fail("strip missed a common pair");
                if (b != tau) {
                    auto shifted = tb;
                    shifted[g - 1] = b;
                    emit_on_y({make_pair(g, e, b), make_triple(tb)},
                              {make_triple(shifted), make_pair(g, e, m)}, "one-triple-align");
                    return;
                }
                auto pz = find_pair_with(X(), g, tau);
                if (pz.first < 0) fail("row balance violated in the cyclic case");
                const int z = other_end(pz, tau);
                if (z == e) fail("strip missed a common pair");
                if (z != m) {
                    auto shifted = ta;
                    shifted[g - 1] = z;
                    emit_on_x({make_pair(g, tau, z), make_triple(ta)},
                              {make_triple(shifted), make_pair(g, tau, e)}, "one-triple-align");
                    return;
                }
                stuck_x[g - 1] = {std::min(m, tau), std::max(m, tau)};
                stuck_y[g - 1] = {std::min(e, tau), std::max(e, tau)};
                continue;
            }
            // a == tau: X holds (m, tau).
            auto qu = find_pair_with(Y(), g, tau);
            if (qu.first < 0) fail("row balance violated in the cyclic case");
            const int uu = other_end(qu, tau);
            if (uu == m) fail("strip missed a common pair");
            if (uu != e) {
                auto shifted = tb;
                shifted[g - 1] = uu;
                emit_on_y({make_pair(g, tau, uu), make_triple(tb)},
                          {make_triple(shifted), make_pair(g, tau, m)}, "one-triple-align");
                return;
            }
            stuck_x[g - 1] = {std::min(m, tau), std::max(m, tau)};
            stuck_y[g - 1] = {std::min(e, tau), std::max(e, tau)};
        }
        emit_on_x({make_triple(ta), make_pair(1, stuck_x[0].first, stuck_x[0].second),
                   make_pair(2, stuck_x[1].first, stuck_x[1].second),
                   make_pair(3, stuck_x[2].first, stuck_x[2].second)},
                  {make_triple(tb), make_pair(1, stuck_y[0].first, stuck_y[0].second),
                   make_pair(2, stuck_y[1].first, stuck_y[1].second),
                   make_pair(3, stuck_y[2].first, stuck_y[2].second)},
                  "one-triple-deg4");
    }

    // --- at least two triples -------------------------------------------------

    void many_triples() {
        const auto tris = triples(X());

        // Two X-triples with no agreement collapse to pairs with one padding.
        for (std::size_t i = 0; i < tris.size(); ++i) {
            const auto ti = triple_edges(tris[i]);
            for (std::size_t j = i + 1; j < tris.size(); ++j) {
                const auto tj = triple_edges(tris[j]);
                if (ti[0] != tj[0] && ti[1] != tj[1] && ti[2] != tj[2]) {
                    emit_on_x({tris[i], tris[j], 0},
                              {make_pair(1, ti[0], tj[0]), make_pair(2, ti[1], tj[1]),
                               make_pair(3, ti[2], tj[2])},
                              "two-triples-split");
                    return;
                }
            }
        }

        // Indices on which every X-triple agrees.
        std::vector<std::pair<int, int>> common;  // (element, edge)
        for (int g = 1; g <= 3; ++g) {
            const int edge = triple_edges(tris.front())[g - 1];
            bool all = true;
            for (const auto& t : tris)
                if (triple_edges(t)[g - 1] != edge) all = false;
            if (all) common.emplace_back(g, edge);
        }

        if (common.empty()) {
            not_all_agree(tris);
            return;
        }

        // Pair cleanup per common index (the support-shape lemmas).
        bool any_pairs = false;
        std::array<int, 3> confining_support{-1, -1, -1};
        for (auto [g, l] : common) {
            auto pairs = elem_pairs(X(), g);
            if (pairs.empty()) continue;
            any_pairs = true;
            std::vector<std::pair<int, int>> off;
            for (auto& ab : pairs)
                if (ab.first != l && ab.second != l) off.push_back(ab);
            if (off.empty())
                fail("pair counting forces equal pair multisets (should have been stripped)");
            // An off-pair and a triple with mismatching support slide the
            // pinned element off its edge.
            for (auto& [x, y] : off) {
                for (const auto& t : tris) {
                    auto te = triple_edges(t);
                    std::array<int, 3> supp = te;
                    std::sort(supp.begin(), supp.end());
                    std::array<int, 3> want{l, x, y};
                    std::sort(want.begin(), want.end());
                    if (supp == want) continue;
                    const bool x_free = (x != te[0] && x != te[1] && x != te[2]);
                    const int xp = x_free ? x : y;
                    if (!x_free && (y == te[0] || y == te[1] || y == te[2]))
                        fail("pair support overlaps every triple support");
                    auto shifted = te;
                    shifted[g - 1] = xp;
                    emit_on_x({t, make_pair(g, x, y)},
                              {make_triple(shifted), make_pair(g, l, xp == x ? y : x)},
                              "triples-pair-slide");
                    return;
                }
            }
            // All triple supports equal {l, x, y} from here on.
            const int x = off.front().first, y = off.front().second;
            std::vector<Packed> forms;
            for (const auto& t : tris)
                if (forms.empty() || forms.back() != t) forms.push_back(t);
            if (forms.size() > 2) fail("more than two triple forms on a three-edge support");
            if (forms.size() == 2) {
                std::array<int, 2> others{};
                int oi = 0;
                for (int r = 1; r <= 3; ++r)
                    if (r != g) others[oi++] = r;
                emit_on_x({forms[0], forms[1], make_pair(g, x, y), 0},
                          {make_pair(g, l, x), make_pair(g, l, y), make_pair(others[0], x, y),
                           make_pair(others[1], x, y)},
                          "triples-collapse");
                return;
            }
            // A pair anchored at l whose other endpoint strays off the three
            // support edges: exchange it with an off-pair; the stray pair then
            // slides on a later pass.
            for (auto& ab : pairs) {
                if (ab.first != l && ab.second != l) continue;
                const int z = other_end(ab, l);
                if (z == x || z == y) continue;
                emit_on_x({make_pair(g, x, y), make_pair(g, l, z)},
                          {make_pair(g, z, x), make_pair(g, l, y)}, "triples-pair-exchange");
                return;
            }
            confining_support = {l, x, y};
        }

        if (any_pairs) {
            // Single triple form plus confined pairs: delegate to the
            // three-edge fiber walk (the known claw-3 generation bound).
            claw3_endgame(confining_support);
            return;
        }

        // No pairs for any common element: the k-case split.
        glwn_checks(common);
        if (common.size() == 3) fail("all-equal triples on both sides should have stripped");
        if (common.size() == 2)
            k2_case(common);
        else
            k1_case(common.front());
    }

    void not_all_agree(const std::vector<Packed>& tris) {
        for (std::size_t i = 0; i < tris.size(); ++i) {
            const auto ti = triple_edges(tris[i]);
            for (std::size_t j = 0; j < tris.size(); ++j) {
                if (i == j) continue;
                const auto tj = triple_edges(tris[j]);
                int agree_role = 0, agreements = 0;
                for (int g = 1; g <= 3; ++g)
                    if (ti[g - 1] == tj[g - 1]) {
                        agree_role = g;
                        ++agreements;
                    }
                if (agreements != 1) continue;
                const int alpha = agree_role;
                const int w = ti[alpha - 1];
                std::array<int, 2> rest{};
                int idx = 0;
                for (int g = 1; g <= 3; ++g)
                    if (g != alpha) rest[idx++] = g;
                const int beta = rest[0], gam = rest[1];
                for (const auto& tk : tris) {
                    const auto te = triple_edges(tk);
                    if (te[alpha - 1] == w) continue;
                    // Shape: agrees with tj at beta and ti at gamma.
                    if (te[beta - 1] == tj[beta - 1] && te[gam - 1] == ti[gam - 1]) {
                        auto shifted = te;
                        shifted[alpha - 1] = w;
                        emit_on_x({tris[i], tris[j], tk, 0},
                                  {make_pair(alpha, te[alpha - 1], w),
                                   make_pair(beta, ti[beta - 1], tj[beta - 1]),
                                   make_pair(gam, ti[gam - 1], tj[gam - 1]), make_triple(shifted)},
                                  "three-triples-merge");
                        return;
                    }
                }
            }
        }
        fail("no-common-index state admits no three-triple move");
    }

    void glwn_checks(const std::vector<std::pair<int, int>>& common) {
        if (triple_count(X()) != triple_count(Y()))
            fail("triple counts must match once a common index exists");
        for (auto [g, l] : common) {
            if (!elem_pairs(Y(), g).empty()) fail("unexpected pairs of a pinned element");
            for (const auto& t : triples(Y()))
                if (triple_edges(t)[g - 1] != l) fail("pinned element moves on the other side");
        }
    }

    void k2_case(const std::vector<std::pair<int, int>>& common) {
        int rho_bar = 1 + 2 + 3 - common[0].first - common[1].first;
        const auto ta = triple_edges(triples(X()).front());
        const auto tb = triple_edges(triples(Y()).front());
        const int va = ta[rho_bar - 1];
        const int c = tb[rho_bar - 1];
        if (va == c) fail("strip missed equal triples in the k=2 case");
        auto pd = find_pair_with(X(), rho_bar, c);
        auto qe = find_pair_with(Y(), rho_bar, va);
        if (pd.first < 0 || qe.first < 0) fail("row balance violated in the k=2 case");
        const int d = other_end(pd, c);
        const int e = other_end(qe, va);
        if (d != va) {
            auto shifted = ta;
            shifted[rho_bar - 1] = c;
            emit_on_x({make_triple(ta), make_pair(rho_bar, c, d)},
                      {make_triple(shifted), make_pair(rho_bar, va, d)}, "k2-align");
            return;
        }
        if (e == c) fail("strip missed a common pair in the k=2 case");
        auto shifted = tb;
        shifted[rho_bar - 1] = va;
        emit_on_y({make_triple(tb), make_pair(rho_bar, va, e)},
                  {make_triple(shifted), make_pair(rho_bar, c, e)}, "k2-align");
    }

    void k1_case(std::pair<int, int> pinned) {
        const int alpha = pinned.first;
        std::array<int, 2> rest{};
        int idx = 0;
        for (int g = 1; g <= 3; ++g)
            if (g != alpha) rest[idx++] = g;

        // A cross pair of triples agreeing twice feeds the two-agreement
        // machinery (with multiple triples around, the same chase applies).
        for (const auto& a : triples(X())) {
            const auto ta = triple_edges(a);
            for (const auto& b : triples(Y())) {
                const auto tb = triple_edges(b);
                int agreements = 0;
                for (int g = 1; g <= 3; ++g)
                    if (ta[g - 1] == tb[g - 1]) ++agreements;
                if (agreements >= 3) fail("strip missed equal triples in the k=1 case");
                if (agreements == 2) {
                    for (int r : rest)
                        if (ta[r - 1] == tb[r - 1]) {
                            k1_two_agree(ta, tb, r, 1 + 2 + 3 - alpha - r);
                            return;
                        }
                }
            }
        }
        k1_exactly_one(alpha, rest);
    }

    /// All triples pinned at alpha; ta and tb additionally agree at rho. The
    /// case diagram of the proof, with the long counting chain at the end.
    void k1_two_agree(const std::array<int, 3>& ta, const std::array<int, 3>& tb, int rho,
                      int rho_bar) {
        // Try the plain orientation, then the side-swapped one.
        if (k1_two_agree_oriented(xi(), yi(), ta, tb, rho, rho_bar)) return;
        if (k1_two_agree_oriented(yi(), xi(), tb, ta, rho, rho_bar)) return;
        k1_node_ii(ta, tb, rho, rho_bar);
    }

    /// Handles the branch where side Q (holding tq) has a rho_bar-pair through
    /// tp's rho_bar edge. Returns false when that pair does not exist.
    bool k1_two_agree_oriented(int p_side, int q_side, const std::array<int, 3>& tp,
                               const std::array<int, 3>& tq, int rho, int rho_bar) {
        auto& P = side_[p_side];
        auto& Q = side_[q_side];
        const int u = tp[rho - 1];
        const int va = tp[rho_bar - 1];
        const int c = tq[rho_bar - 1];
        auto ql = find_pair_with(Q, rho_bar, va);
        if (ql.first < 0) return false;
        const int l = other_end(ql, va);
        if (l != c) {
            auto shifted = tq;
            shifted[rho_bar - 1] = va;
            emit(q_side, {make_triple(tq), make_pair(rho_bar, va, l)},
                 {make_triple(shifted), make_pair(rho_bar, c, l)}, "k1-agree2");
            return true;
        }
        // Q holds (va, c); P must not hold a rho_bar-pair through c.
        auto pm = find_pair_with(P, rho_bar, c);
        if (pm.first >= 0) {
            const int m = other_end(pm, c);
            if (m == va) fail("strip missed a common pair in the k=1 case");
            auto shifted = tp;
            shifted[rho_bar - 1] = c;
            emit(p_side, {make_triple(tp), make_pair(rho_bar, c, m)},
                 {make_triple(shifted), make_pair(rho_bar, va, m)}, "k1-agree2");
            return true;
        }
        // P needs a triple with rho_bar at c.
        std::array<int, 3> a2{};
        bool found = false;
        for (const auto& t : triples(P)) {
            auto te = triple_edges(t);
            if (te[rho_bar - 1] == c) {
                a2 = te;
                found = true;
                break;
            }
        }
        if (!found) fail("row balance violated in the k=1 two-agreement case");
        if (a2[rho - 1] != va) {
            auto left = a2;
            left[rho_bar - 1] = va;
            auto right = tp;
            right[rho_bar - 1] = c;
            emit(p_side, {make_triple(tp), make_triple(a2)},
                 {make_triple(left), make_triple(right)}, "k1-agree2");
            return true;
        }
        // a2 = (anchor, rho: va, rho_bar: c). Q must produce rho at va.
        for (const auto& t : triples(Q)) {
            auto te = triple_edges(t);
            if (te[rho - 1] != va) continue;
            const int p = te[rho_bar - 1];
            if (p != u) {
                auto left = tq;
                left[rho_bar - 1] = p;
                auto right = te;
                right[rho_bar - 1] = c;
                emit(q_side, {make_triple(tq), make_triple(te)},
                     {make_triple(left), make_triple(right)}, "k1-agree2");
                return true;
            }
            emit(q_side, {make_triple(te), make_pair(rho_bar, va, c)},
                 {make_triple(a2), make_pair(rho_bar, u, va)}, "k1-agree2");
            return true;
        }
        auto qo = find_pair_with(Q, rho, va);
        if (qo.first < 0) fail("row balance violated in the k=1 two-agreement case");
        const int o = other_end(qo, va);
        if (o != u) {
            emit(q_side, {make_triple(tq), make_pair(rho, va, o)},
                 {make_triple(a2), make_pair(rho, u, o)}, "k1-agree2");
            return true;
        }
        // Q holds (u, va)_rho: the counting chain.
        for (auto& ab : elem_pairs(P, rho)) {
            if (ab.first != u && ab.second != u) continue;
            const int s = other_end(ab, u);
            if (s == va) fail("strip missed a common pair in the k=1 chain");
            emit(p_side, {make_triple(a2), make_pair(rho, u, s)},
                 {make_triple(tq), make_pair(rho, va, s)}, "k1-chain");
            return true;
        }
        for (const auto& t : triples(P)) {
            auto te = triple_edges(t);
            if (te[rho - 1] != u || te[rho_bar - 1] == va) continue;
            auto left = a2;
            left[rho_bar - 1] = te[rho_bar - 1];
            emit(p_side, {make_triple(a2), make_triple(te)},
                 {make_triple(left), make_triple(tq)}, "k1-chain");
            return true;
        }
        for (const auto& t : triples(Q)) {
            auto te = triple_edges(t);
            if (te[rho_bar - 1] != va) continue;
            const int y = te[rho - 1];
            if (y == u) fail("strip missed equal triples in the k=1 chain");
            auto shifted = te;
            shifted[rho - 1] = u;
            emit(q_side, {make_triple(te), make_pair(rho, u, va)},
                 {make_triple(shifted), make_pair(rho, y, va)}, "k1-chain");
            return true;
        }
        for (auto& ab : elem_pairs(Q, rho_bar)) {
            if (ab.first != va && ab.second != va) continue;
            const int u2 = other_end(ab, va);
            if (u2 == c) continue;  // that is the (va, c) pair itself
            emit(q_side, {make_triple(tq), make_pair(rho_bar, va, u2)},
                 {make_triple(tp), make_pair(rho_bar, c, u2)}, "k1-chain");
            return true;
        }
        for (const auto& t : triples(P)) {
            auto te = triple_edges(t);
            if (te[rho_bar - 1] != c || te[rho - 1] == va) continue;
            auto shifted = te;
            shifted[rho_bar - 1] = va;
            emit(p_side, {make_triple(tp), make_triple(te)},
                 {make_triple(tq), make_triple(shifted)}, "k1-chain");
            return true;
        }
        fail("k=1 counting chain exhausted (row balance contradiction)");
    }

    /// No Q-side rho_bar pair through va and none mirrored: both triples reach
    /// across via other triples.
    void k1_node_ii(const std::array<int, 3>& ta, const std::array<int, 3>& tb, int rho,
                    int rho_bar) {
        const int u = ta[rho - 1];
        const int va = ta[rho_bar - 1];
        const int c = tb[rho_bar - 1];
        std::array<int, 3> a2{};
        bool found = false;
        for (const auto& t : triples(X())) {
            auto te = triple_edges(t);
            if (te[rho_bar - 1] == c) {
                a2 = te;
                found = true;
                break;
            }
        }
        if (!found) fail("row balance violated in the k=1 case (no pair, no triple)");
        if (a2[rho - 1] != va) {
            auto left = ta;
            left[rho_bar - 1] = c;
            auto right = a2;
            right[rho_bar - 1] = va;
            emit_on_x({make_triple(ta), make_triple(a2)}, {make_triple(left), make_triple(right)},
                      "k1-align");
            return;
        }
        std::array<int, 3> b2{};
        found = false;
        for (const auto& t : triples(Y())) {
            auto te = triple_edges(t);
            if (te[rho_bar - 1] == va) {
                b2 = te;
                found = true;
                break;
            }
        }
        if (!found) fail("row balance violated in the k=1 case (mirror)");
        if (b2[rho - 1] != c) {
            auto left = tb;
            left[rho_bar - 1] = va;
            auto right = b2;
            right[rho_bar - 1] = c;
            emit_on_y({make_triple(tb), make_triple(b2)}, {make_triple(left), make_triple(right)},
                      "k1-align");
            return;
        }
        // X needs rho at c: pair or triple.
        auto pf = find_pair_with(X(), rho, c);
        if (pf.first >= 0) {
            const int f = other_end(pf, c);
            if (f != u) {
                emit_on_x({make_triple(ta), make_pair(rho, c, f)},
                          {make_triple(b2), make_pair(rho, f, u)}, "k1-align");
            } else {
                emit_on_x({make_triple(a2), make_pair(rho, c, u)},
                          {make_triple(tb), make_pair(rho, va, c)}, "k1-align");
            }
            return;
        }
        for (const auto& t : triples(X())) {
            auto te = triple_edges(t);
            if (te[rho - 1] != c) continue;
            const int g = te[rho_bar - 1];
            if (g != u) {
                auto shifted = ta;
                shifted[rho_bar - 1] = g;
                emit_on_x({make_triple(te), make_triple(ta)},
                          {make_triple(shifted), make_triple(b2)}, "k1-align");
            } else {
                // Degree-3 move: all three aligned triples swap into the
                // other side's forms at once.
                auto mid = a2;
                mid[rho_bar - 1] = u;
                emit_on_x({make_triple(ta), make_triple(a2), make_triple(te)},
                          {make_triple(tb), make_triple(mid), make_triple(b2)}, "k1-deg3");
            }
            return;
        }
        fail("row balance violated in the k=1 case (rho uncovered)");
    }

    void claw3_endgame(const std::array<int, 3>& support);

    /// All cross pairs of triples agree exactly at alpha: align some triple
    /// via a pair move, falling back to a pure pair chain.
    void k1_exactly_one(int alpha, const std::array<int, 2>& rest) {
        (void)alpha;
        for (int rho : rest) {
            for (const auto& a : triples(X())) {
                const auto ta = triple_edges(a);
                for (const auto& b : triples(Y())) {
                    const auto tb = triple_edges(b);
                    const int bb = tb[rho - 1];
                    if (bb != ta[0] && bb != ta[1] && bb != ta[2]) {
                        auto pd = find_pair_with(X(), rho, bb);
                        if (pd.first < 0) fail("row balance violated in the k=1 spread case");
                        const int d = other_end(pd, bb);
                        if (d != ta[rho - 1]) {
                            auto shifted = ta;
                            shifted[rho - 1] = bb;
                            emit_on_x({make_triple(ta), make_pair(rho, bb, d)},
                                      {make_triple(shifted), make_pair(rho, d, ta[rho - 1])},
                                      "k1-spread");
                            return;
                        }
                    }
                    const int pp = ta[rho - 1];
                    if (pp != tb[0] && pp != tb[1] && pp != tb[2]) {
                        auto qd = find_pair_with(Y(), rho, pp);
                        if (qd.first < 0) fail("row balance violated in the k=1 spread case");
                        const int d = other_end(qd, pp);
                        if (d != tb[rho - 1]) {
                            auto shifted = tb;
                            shifted[rho - 1] = pp;
                            emit_on_y({make_triple(tb), make_pair(rho, pp, d)},
                                      {make_triple(shifted), make_pair(rho, d, tb[rho - 1])},
                                      "k1-spread");
                            return;
                        }
                    }
                }
            }
        }
        // Every combination stuck: resolve through the pair graph.
        for (int rho : rest) {
            for (const auto& a : triples(X())) {
                const auto ta = triple_edges(a);
                for (const auto& b : triples(Y())) {
                    const auto tb = triple_edges(b);
                    const int bb = tb[rho - 1];
                    const int pp = ta[rho - 1];
                    if (bb == ta[0] || bb == ta[1] || bb == ta[2]) continue;
                    // stuck means X holds (bb, pp)_rho
                    if (!contains(X(), make_pair(rho, std::min(bb, pp), std::max(bb, pp))))
                        continue;
                    for (auto& qp : elem_pairs(Y(), rho)) {
                        if (qp.first != pp && qp.second != pp) continue;
                        const int dt = other_end(qp, pp);
                        if (dt == bb) fail("strip missed a common pair in the k=1 spread case");
                        for (auto& xp : elem_pairs(X(), rho)) {
                            if (xp.first != dt && xp.second != dt) continue;
                            const int m = other_end(xp, dt);
                            if (m == pp) fail("strip missed a common pair in the k=1 spread case");
                            if (m != bb) {
                                emit_on_x({make_pair(rho, bb, pp), make_pair(rho, dt, m)},
                                          {make_pair(rho, pp, dt), make_pair(rho, bb, m)},
                                          "k1-pairfix");
                                return;
                            }
                        }
                        for (auto& yp : elem_pairs(Y(), rho)) {
                            if (yp.first != bb && yp.second != bb) continue;
                            const int n = other_end(yp, bb);
                            if (n == pp || n == dt)
                                fail("strip missed a common pair in the k=1 spread case");
                            emit_on_y({make_pair(rho, pp, dt), make_pair(rho, bb, n)},
                                      {make_pair(rho, pp, bb), make_pair(rho, dt, n)},
                                      "k1-pairfix");
                            return;
                        }
                    }
                }
            }
        }
        fail("k=1 spread case admits no move");
    }

    const FlowSpace& space_;
    MoveTrace& trace_;
    int pad_budget_;
    int pads_used_ = 0;
    int edges_ = 0;
    bool view_swapped_ = false;
    std::array<std::vector<Packed>, 2> side_;  // [0] = lhs, [1] = rhs
};

} // namespace rewrite_detail

// (claw3_endgame is defined below; it needs the fiber machinery.)

namespace rewrite_detail {

inline void KimuraEngine::claw3_endgame(const std::array<int, 3>& support) {
    if (support[0] < 0) fail("three-edge endgame entered without a confining support");
    std::array<int, 3> edges = support;
    std::sort(edges.begin(), edges.end());
    for (int s = 0; s < 2; ++s)
        for (Packed f : side_[s])
            for (int e = 0; e < edges_; ++e)
                if (value_at(f, e) != 0 && e != edges[0] && e != edges[1] && e != edges[2])
                    fail("three-edge endgame: a flow leaves the confining support");

    FlowSpace small(Tree::claw(3), space_.group());
    FiberExplorer explorer(small);
    auto project = [&](Packed f) {
        Flow g{std::vector<int>(3, 0)};
        for (int i = 0; i < 3; ++i) g.values[i] = value_at(f, edges[i]);
        return g;
    };
    auto unproject = [&](const Flow& g) {
        Packed f = 0;
        for (int i = 0; i < 3; ++i) f = with_value(f, edges[i], g.values[i]);
        return f;
    };
    FlowIdMultiset from, to;
    for (Packed f : X()) from.push_back(explorer.id_of(project(f)));
    for (Packed f : Y()) to.push_back(explorer.id_of(project(f)));
    std::sort(from.begin(), from.end());
    std::sort(to.begin(), to.end());
    auto path = find_move_path(explorer, from, to, 4);
    if (!path) fail("three-edge relation not degree-4 connected (unexpected)");
    for (const FiberMove& mv : *path) {
        std::vector<Packed> removed, added;
        for (auto id : mv.removed) removed.push_back(unproject(explorer.flow(id)));
        for (auto id : mv.added) added.push_back(unproject(explorer.flow(id)));
        emit_on_x(removed, added, "three-edge-walk");
    }
}

} // namespace rewrite_detail

/// Runs the complete degree-<=4 case analysis on a claw-tree Z2 x Z2 relation
/// whose flows are neutral flows, pairs and triples. The returned trace
/// replays from lhs and rhs to a common multiset; padding is recorded
/// per step.
inline MoveTrace kimura_reduce(const FlowSpace& space, const Relation& relation,
                               int pad_budget = 4096) {
    if (!validate_relation(space, relation))
        throw std::invalid_argument("kimura_reduce: input is not a relation");
    MoveTrace trace;
    trace.group_spec = space.group().to_string();
    trace.tree_spec = space.tree().serialize();
    trace.lhs = relation.lhs;
    trace.rhs = relation.rhs;
    rewrite_detail::KimuraEngine engine(space, relation.lhs, relation.rhs, trace, pad_budget);
    engine.run();
    verify_trace(space, trace);
    return trace;
}

struct SaturationResult {
    int m = 0;
    MoveTrace trace;
};

/// Full driver: quadric support reduction on both sides, then the pairs-and-
/// triples engine. `m` is the total neutral padding the deterministic engine
/// consumed; exceeding `m_max` raises CapExceeded rather than weakening the
/// result.
inline SaturationResult saturation_reduce(const FlowSpace& space, const Relation& relation,
                                          int m_max = 64) {
    if (!validate_relation(space, relation))
        throw std::invalid_argument("saturation_reduce: input is not a relation");
    if (space.tree().nodes().size() != 1)
        throw std::invalid_argument("saturation_reduce: claw trees only");
    MoveTrace trace;
    trace.group_spec = space.group().to_string();
    trace.tree_spec = space.tree().serialize();
    trace.lhs = relation.lhs;
    trace.rhs = relation.rhs;

    auto left = reduce_support(space, relation.lhs, MoveStep::Side::Lhs);
    auto right = reduce_support(space, relation.rhs, MoveStep::Side::Rhs);
    // Padding on one side saturates the other as well; replay both sides with
    // the merged step list to account for the shared neutrals.
    for (auto& s : left.steps) trace.steps.push_back(std::move(s));
    for (auto& s : right.steps) trace.steps.push_back(std::move(s));
    int used = 0;
    for (const auto& s : trace.steps) used += s.pad_delta;
    if (used > m_max) throw CapExceeded("saturation_reduce: padding budget exceeded");

    auto lhs_now = replay_side(space, trace.lhs, trace.steps, MoveStep::Side::Lhs);
    auto rhs_now = replay_side(space, trace.rhs, trace.steps, MoveStep::Side::Rhs);

    rewrite_detail::KimuraEngine engine(space, lhs_now, rhs_now, trace, m_max - used);
    engine.run();
    SaturationResult result;
    result.m = used + engine.pads_used();
    result.trace = std::move(trace);
    verify_trace(space, result.trace);
    return result;
}

} // namespace groupflow
