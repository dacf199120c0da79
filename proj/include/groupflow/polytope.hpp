#pragma once

// The lattice M_E with one basis vector per (edge, group element) pair, the
// vertex encoding of flows, graded monoid sums, and the G-model projection
// onto (edge, orbit) coordinates.

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "flows.hpp"

namespace groupflow {

namespace detail {
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("lattice coordinate overflow");
    return r;
}
} // namespace detail

/// Point of M_E with the degree grading (degree = number of polytope vertices
/// summed). Coordinates are indexed edge-major: coordinate(e, g) sits at
/// e * elems_per_edge + g.
struct LatticePoint {
    std::vector<std::int64_t> coords;
    std::int64_t degree = 0;
    int edges = 0;
    int elems_per_edge = 0;

    std::int64_t at(int edge, int elem) const {
        return coords.at(static_cast<std::size_t>(edge) * elems_per_edge + elem);
    }

    bool operator==(const LatticePoint& o) const {
        return degree == o.degree && edges == o.edges && elems_per_edge == o.elems_per_edge &&
               coords == o.coords;
    }

    /// Validates the defining row property: nonnegative coordinates and every
    /// edge block summing to the degree.
    void check_rows() const {
        if (static_cast<int>(coords.size()) != edges * elems_per_edge)
            throw std::invalid_argument("lattice point has the wrong coordinate count");
        for (int e = 0; e < edges; ++e) {
            std::int64_t row = 0;
            for (int g = 0; g < elems_per_edge; ++g) {
                std::int64_t c = at(e, g);
                if (c < 0) throw std::invalid_argument("monoid points have nonnegative coordinates");
                row = detail::checked_add(row, c);
            }
            if (row != degree)
                throw std::invalid_argument("edge block sum does not match the degree");
        }
    }

    static LatticePoint from_coords(std::vector<std::int64_t> coords, std::int64_t degree,
                                    int edges, int elems_per_edge) {
        LatticePoint p{std::move(coords), degree, edges, elems_per_edge};
        p.check_rows();
        return p;
    }
};

/// Same data over (edge, orbit label) pairs.
struct SubLatticePoint {
    std::vector<std::int64_t> coords;
    std::int64_t degree = 0;
    int edges = 0;
    int labels_per_edge = 0;

    std::int64_t at(int edge, int label) const {
        return coords.at(static_cast<std::size_t>(edge) * labels_per_edge + label);
    }

    bool operator==(const SubLatticePoint& o) const {
        return degree == o.degree && edges == o.edges && labels_per_edge == o.labels_per_edge &&
               coords == o.coords;
    }
};

/// P_f: the 0/1 indicator of a flow, one 1 per edge block. Degree 1.
inline LatticePoint vertex_of(const FlowSpace& space, const Flow& f) {
    space.require_flow(f);
    LatticePoint p;
    p.edges = space.edge_count();
    p.elems_per_edge = space.order();
    p.degree = 1;
    p.coords.assign(static_cast<std::size_t>(p.edges) * p.elems_per_edge, 0);
    for (int e = 0; e < p.edges; ++e)
        p.coords[static_cast<std::size_t>(e) * p.elems_per_edge + f.values[e]] = 1;
    return p;
}

/// Coordinatewise sum; degrees add. Empty input gives the zero point.
inline LatticePoint monoid_sum(std::span<const LatticePoint> points) {
    LatticePoint acc;
    if (points.empty()) return acc;
    acc = points.front();
    for (std::size_t i = 1; i < points.size(); ++i) {
        const LatticePoint& p = points[i];
        if (p.edges != acc.edges || p.elems_per_edge != acc.elems_per_edge)
            throw std::invalid_argument("monoid_sum: incompatible index sets");
        for (std::size_t c = 0; c < acc.coords.size(); ++c)
            acc.coords[c] = detail::checked_add(acc.coords[c], p.coords[c]);
        acc.degree = detail::checked_add(acc.degree, p.degree);
    }
    return acc;
}

inline LatticePoint monoid_sum(const std::vector<LatticePoint>& points) {
    return monoid_sum(std::span<const LatticePoint>(points));
}

/// Sum of the vertex encodings of a multiset of flows.
inline LatticePoint flow_multiset_sum(const FlowSpace& space, std::span<const Flow> flows) {
    LatticePoint acc;
    acc.edges = space.edge_count();
    acc.elems_per_edge = space.order();
    acc.degree = static_cast<std::int64_t>(flows.size());
    acc.coords.assign(static_cast<std::size_t>(acc.edges) * acc.elems_per_edge, 0);
    for (const Flow& f : flows) {
        space.require_flow(f);
        for (int e = 0; e < acc.edges; ++e) {
            auto& c = acc.coords[static_cast<std::size_t>(e) * acc.elems_per_edge + f.values[e]];
            c = detail::checked_add(c, 1);
        }
    }
    return acc;
}

/// Collapses element coordinates into orbit-class coordinates; linear in the
/// point and degree preserving.
inline SubLatticePoint project_sub(const LatticePoint& p, const OrbitPartition& orbits) {
    if (p.elems_per_edge != static_cast<int>(orbits.group().order()))
        throw std::invalid_argument("project_sub: orbit partition does not match the point");
    SubLatticePoint q;
    q.edges = p.edges;
    q.labels_per_edge = static_cast<int>(orbits.class_count());
    q.degree = p.degree;
    q.coords.assign(static_cast<std::size_t>(q.edges) * q.labels_per_edge, 0);
    for (int e = 0; e < p.edges; ++e)
        for (int g = 0; g < p.elems_per_edge; ++g) {
            auto label = orbits.class_of_index(g);
            auto& c = q.coords[static_cast<std::size_t>(e) * q.labels_per_edge + label];
            c = detail::checked_add(c, p.at(e, g));
        }
    return q;
}

/// Plain-text vertex matrix: header "rows cols", then one point per row.
template <typename Point>
inline void write_point_matrix(std::ostream& os, const std::vector<Point>& points, int cols) {
    os << points.size() << ' ' << cols << '\n';
    for (const auto& p : points) {
        for (std::size_t c = 0; c < p.coords.size(); ++c) {
            if (c) os << ' ';
            os << p.coords[c];
        }
        os << '\n';
    }
}

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const {
        std::size_t h = std::hash<std::int64_t>{}(p.degree);
        for (auto c : p.coords) h = h * 1315423911u + std::hash<std::int64_t>{}(c);
        return h;
    }
};

} // namespace groupflow
