#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "groupflow/flows.hpp"
#include "groupflow/rng.hpp"

using namespace groupflow;

namespace {

FlowSpace z3_example_space() {
    // Five-edge tree rooted at the top: e1 root-mid, e2 root-leaf, e3..e5
    // mid-leaves.
    return FlowSpace(Tree::parse("r-m;r-l2;m-l3;m-l4;m-l5"), FiniteAbelianGroup::parse("3"));
}

/// Random tree with the given number of leaves, by random attachment.
Tree random_tree(Rng& rng, int leaves) {
    std::vector<std::pair<std::string, std::string>> edges{{"v0", "v1"}};
    int next = 2;
    while (true) {
        Tree t = Tree::from_edge_names(edges);
        if (static_cast<int>(t.leaves().size()) >= leaves) return t;
        auto attach = rng_below(rng, static_cast<std::uint64_t>(next));
        edges.emplace_back("v" + std::to_string(attach), "v" + std::to_string(next));
        ++next;
    }
}

} // namespace

TEST_CASE("summing morphism on the Z3 example") {
    FlowSpace space = z3_example_space();
    EdgeLabelling lab{{2, 1, 1, 2, 2}};
    const Tree& t = space.tree();
    CHECK(space.summing_morphism(lab, t.vertex_by_name("m")) == 0);
    CHECK(space.summing_morphism(lab, t.vertex_by_name("r")) == 0);
    CHECK(space.is_flow(lab));
    CHECK(space.support(Flow{lab.values}).size() == 5);

    EdgeLabelling zero{{0, 0, 0, 0, 0}};
    for (int v = 0; v < t.vertex_count(); ++v) CHECK(space.summing_morphism(zero, v) == 0);
    CHECK_THROWS_AS(space.summing_morphism(lab, 99), std::invalid_argument);
}

TEST_CASE("the Z2 network labelling is a flow") {
    FlowSpace space(Tree::parse("m1-l1;m1-l2;m1-m2;m2-l4;m2-l5"), FiniteAbelianGroup::parse("2"));
    CHECK(space.is_flow(EdgeLabelling{{1, 1, 0, 1, 1}}));
    CHECK_FALSE(FlowSpace(Tree::claw(3), FiniteAbelianGroup::parse("2"))
                    .is_flow(EdgeLabelling{{1, 0, 0}}));
}

TEST_CASE("flow counts match the group power") {
    for (const char* spec : {"2", "3", "2,2"}) {
        auto g = FiniteAbelianGroup::parse(spec);
        for (int n = 3; n <= 5; ++n) {
            FlowSpace space(Tree::claw(n), g);
            auto flows = space.enumerate_flows();
            std::int64_t expect = 1;
            for (int i = 1; i < n; ++i) expect *= g.order();
            CHECK(static_cast<std::int64_t>(flows.size()) == expect);
        }
    }
    CHECK(FlowSpace(Tree::claw(3), FiniteAbelianGroup::parse("2,2")).enumerate_flows().size() ==
          16);
    CHECK(FlowSpace(Tree::claw(4), FiniteAbelianGroup::parse("2")).enumerate_flows().size() == 8);
    CHECK(FlowSpace(Tree::claw(4), FiniteAbelianGroup::parse("1")).enumerate_flows().size() == 1);
}

TEST_CASE("enumeration cap") {
    FlowSpace space(Tree::claw(9), FiniteAbelianGroup::parse("8"));
    CHECK_THROWS_AS(space.enumerate_flows(1000), CapExceeded);
}

TEST_CASE("sockets restrict flows and reconstruct them") {
    FlowSpace space = z3_example_space();
    Flow f{{2, 1, 1, 2, 2}};
    Socket s = space.socket_of(f);
    int total = 0;
    for (int v : s.values) total = space.add(total, v);
    CHECK(total == 0);
    CHECK(space.flow_from_socket(s) == f);

    CHECK(space.socket_of(space.neutral_flow()).values == std::vector<int>(4, 0));
    CHECK_THROWS_AS(space.flow_from_socket(Socket{{1, 0, 0, 0}}), std::invalid_argument);
}

TEST_CASE("socket propagation reconstructs the five-edge example") {
    // Socket (l1 -> 0, l2 -> 0, l4 -> 1, l5 -> 1) forces the flow
    // (0,0,0,1,1): the inner edge picks up 1 + 1 = 0 over Z2.
    FlowSpace space(Tree::parse("m1-l1;m1-l2;m1-m2;m2-l4;m2-l5"), FiniteAbelianGroup::parse("2"));
    Flow f = space.flow_from_socket(Socket{{0, 0, 1, 1}});
    CHECK(f == Flow{{0, 0, 0, 1, 1}});
}

TEST_CASE("socket bijection is exhaustive at small scale") {
    for (const char* spec : {"2", "3", "2,2"}) {
        auto g = FiniteAbelianGroup::parse(spec);
        for (int n = 3; n <= 5; ++n) {
            FlowSpace space(Tree::claw(n), g);
            std::set<std::vector<int>> sockets;
            for (const Flow& f : space.enumerate_flows()) {
                Socket s = space.socket_of(f);
                sockets.insert(s.values);
                CHECK(space.flow_from_socket(s) == f);
            }
            CHECK(sockets.size() == space.enumerate_flows().size());
        }
    }
}

TEST_CASE("random trees: counts, bijection, kernel closure") {
    Rng rng = seeded_rng(2024);
    auto g = FiniteAbelianGroup::parse("2,2");
    for (int trial = 0; trial < 25; ++trial) {
        Tree t = random_tree(rng, 3 + static_cast<int>(rng_below(rng, 5)));
        FlowSpace space(t, g);
        auto flows = space.enumerate_flows();
        std::int64_t expect = 1;
        for (std::size_t i = 1; i < t.leaves().size(); ++i) expect *= g.order();
        REQUIRE(static_cast<std::int64_t>(flows.size()) == expect);
        std::set<std::vector<int>> distinct;
        for (const Flow& f : flows) {
            distinct.insert(f.values);
            CHECK(space.is_flow(EdgeLabelling{f.values}));
            CHECK(space.flow_from_socket(space.socket_of(f)) == f);
        }
        CHECK(distinct.size() == flows.size());
        // Kernel closure on a sample.
        for (int i = 0; i < 20; ++i) {
            const Flow& a = flows[rng_below(rng, flows.size())];
            const Flow& b = flows[rng_below(rng, flows.size())];
            CHECK(space.is_flow(EdgeLabelling{space.add_flows(a, b).values}));
        }
    }
}

TEST_CASE("kernel closure is exhaustive on small claws") {
    for (const char* spec : {"2", "3", "2,2"}) {
        auto g = FiniteAbelianGroup::parse(spec);
        for (int n = 3; n <= (g.order() > 2 ? 4 : 5); ++n) {
            FlowSpace space(Tree::claw(n), g);
            auto flows = space.enumerate_flows();
            for (const Flow& a : flows)
                for (const Flow& b : flows)
                    CHECK(space.is_flow(EdgeLabelling{space.add_flows(a, b).values}));
        }
    }
}

TEST_CASE("translation acts by the regular representation") {
    FlowSpace space(Tree::claw(4), FiniteAbelianGroup::parse("2,2"));
    auto flows = space.enumerate_flows();
    for (const Flow& f : flows) {
        CHECK(space.translate(f, space.neg_flow(f)) == space.neutral_flow());
        CHECK(space.translate(f, space.neutral_flow()) == f);
    }
}

TEST_CASE("orientation independence under rerooting") {
    Rng rng = seeded_rng(77);
    auto g = FiniteAbelianGroup::parse("2,3");
    Tree t = Tree::parse("a-b;a-c;b-d;b-e;c-f");
    FlowSpace space(t, g);
    FlowSpace flipped(t.rerooted("e"), g);
    auto edge_key = [](const Tree& tr, int e) {
        auto p = tr.name(tr.edge(e).parent), c = tr.name(tr.edge(e).child);
        return std::make_pair(std::min(p, c), std::max(p, c));
    };
    for (const Flow& f : space.enumerate_flows()) {
        // Transport values across the rerooted tree, negating flipped edges.
        Flow h{std::vector<int>(flipped.edge_count(), 0)};
        for (int e2 = 0; e2 < flipped.edge_count(); ++e2) {
            for (int e1 = 0; e1 < space.edge_count(); ++e1) {
                if (edge_key(space.tree(), e1) != edge_key(flipped.tree(), e2)) continue;
                bool same_direction =
                    space.tree().name(space.tree().edge(e1).parent) ==
                    flipped.tree().name(flipped.tree().edge(e2).parent);
                h.values[e2] = same_direction ? f.values[e1] : flipped.neg(f.values[e1]);
            }
        }
        CHECK(flipped.is_flow(EdgeLabelling{h.values}));
        (void)rng;
    }
}

TEST_CASE("flow serialization round-trips") {
    FlowSpace space(Tree::claw(3), FiniteAbelianGroup::parse("2,2"));
    Flow f{{1, 3, 2}};
    CHECK(space.serialize_flow(f) == "(0,1);(1,1);(1,0)");
    CHECK(space.parse_flow("(0,1);(1,1);(1,0)") == f);
    CHECK_THROWS_AS(space.parse_flow("(0,1);(1,1)"), std::invalid_argument);
    CHECK_THROWS_AS(space.parse_flow("(0,1);(1,1);(0,1)"), std::invalid_argument);  // not a flow
}
