// Scans every fiber of the three-edge claw over Z2 x Z2 up to degree 5 and
// prints the least move degree connecting each, then reduces one concrete
// relation and prints its verified trace.

#include <iostream>

#include "groupflow/relations.hpp"
#include "groupflow/rewrite.hpp"

int main() {
    using namespace groupflow;
    FlowSpace space(Tree::claw(3), FiniteAbelianGroup::parse("2,2"));

    auto report = generation_degree_evidence(space, 4, 5);
    std::cout << "fibers of degree <= 5: " << report.records.size() << "\n";
    std::cout << "all connected with moves of degree <= 4: "
              << (report.all_connected ? "yes" : "no") << "\n";
    std::cout << "largest degree needed: " << report.max_connecting_degree << "\n\n";

    Relation r;
    r.lhs = {space.parse_flow("(0,1);(1,0);(1,1)"), space.parse_flow("(1,0);(0,0);(1,0)"),
             space.parse_flow("(1,1);(1,1);(0,0)")};
    r.rhs = {space.parse_flow("(0,1);(1,1);(1,0)"), space.parse_flow("(1,0);(1,0);(0,0)"),
             space.parse_flow("(1,1);(0,0);(1,1)")};
    if (!validate_relation(space, r)) {
        std::cout << "demo relation is invalid\n";
        return 1;
    }
    auto result = saturation_reduce(space, r);
    std::cout << "demo relation reduced with padding m = " << result.m << ":\n";
    std::cout << serialize_trace(space, result.trace);
    return 0;
}
