#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "polyspec/errors.hpp"
#include "polyspec/net.hpp"

using namespace polyspec;

namespace {

constexpr double pi = std::numbers::pi;

struct Expected {
    PolyhedronKind kind;
    int faces;
    int width;
    double area;
    int cones;
    double cone_angle;
    int edges;
};

const Expected kExpected[] = {
    {PolyhedronKind::Tetrahedron, 4, 2, std::sqrt(3.0), 4, pi, 6},
    {PolyhedronKind::Octahedron, 8, 4, 2 * std::sqrt(3.0), 6, 4 * pi / 3, 12},
    {PolyhedronKind::Icosahedron, 20, 10, 5 * std::sqrt(3.0), 12, 5 * pi / 3, 30},
    {PolyhedronKind::Cube, 6, 6, 6.0, 8, 3 * pi / 2, 12},
};

// Plain union-find over face corners, independent of the library's.
struct Classes {
    std::vector<int> parent;
    explicit Classes(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int root(int x) {
        while (parent[x] != x) x = parent[x];
        return x;
    }
    void join(int a, int b) { parent[root(a)] = root(b); }
    int count() {
        int n = 0;
        for (int i = 0; i < int(parent.size()); ++i) n += root(i) == i;
        return n;
    }
};

int surface_vertex_count(const PolyhedronNet& net) {
    const int c = net.corners_per_face();
    const int n = int(net.faces.size()) * c;
    Classes classes(n);
    // Corners sharing a planar position are the same point.
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const Point& pa = net.faces[a / c].vertices[a % c];
            const Point& pb = net.faces[b / c].vertices[b % c];
            if ((pa - pb).norm() < 1e-9) classes.join(a, b);
        }
    }
    for (const auto& g : net.identifications) {
        const int a0 = g.face_a * c + g.edge_a;
        const int a1 = g.face_a * c + (g.edge_a + 1) % c;
        const int b0 = g.face_b * c + g.edge_b;
        const int b1 = g.face_b * c + (g.edge_b + 1) % c;
        if (g.orientation == GlueOrientation::Aligned) {
            classes.join(a0, b0);
            classes.join(a1, b1);
        } else {
            classes.join(a0, b1);
            classes.join(a1, b0);
        }
    }
    return classes.count();
}

} // namespace

TEST_CASE("face counts, strip widths and areas") {
    for (const auto& e : kExpected) {
        CAPTURE(kind_name(e.kind));
        const PolyhedronNet net = build_net(e.kind);
        CHECK(net.kind == e.kind);
        CHECK(int(net.faces.size()) == e.faces);
        CHECK(net.strip_width == e.width);
        CHECK(net.area() == doctest::Approx(e.area).epsilon(1e-12));
        for (const auto& f : net.faces) {
            for (int i = 0; i < f.corners(); ++i) {
                CHECK((f.vertices[(i + 1) % f.corners()] - f.vertices[i]).norm() ==
                      doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("cone points and Gauss-Bonnet") {
    for (const auto& e : kExpected) {
        CAPTURE(kind_name(e.kind));
        const PolyhedronNet& net = net_for(e.kind);
        REQUIRE(int(net.cone_points.size()) == e.cones);
        double deficit = 0.0;
        for (const auto& cone : net.cone_points) {
            CHECK(cone.angle == doctest::Approx(e.cone_angle).epsilon(1e-12));
            deficit += 2 * pi - cone.angle;
        }
        CHECK(deficit == doctest::Approx(4 * pi).epsilon(1e-12));
    }
}

TEST_CASE("glued complex is a sphere") {
    for (const auto& e : kExpected) {
        CAPTURE(kind_name(e.kind));
        const PolyhedronNet& net = net_for(e.kind);
        const GluedComplex complex = glue_complex(net);
        CHECK(complex.face_count == e.faces);
        CHECK(complex.edge_count == e.edges);
        CHECK(complex.vertex_count == e.cones);
        CHECK(complex.euler_characteristic() == 2);
        CHECK(surface_vertex_count(net) == complex.vertex_count);
        for (double angle : complex.class_angle) {
            CHECK(angle == doctest::Approx(e.cone_angle).epsilon(1e-12));
        }
    }
}

TEST_CASE("every boundary edge is glued exactly once") {
    for (const auto kind : kAllKinds) {
        CAPTURE(kind_name(kind));
        const PolyhedronNet& net = net_for(kind);
        std::map<std::pair<int, int>, int> seen;
        for (const auto& g : net.identifications) {
            ++seen[{g.face_a, g.edge_a}];
            ++seen[{g.face_b, g.edge_b}];
        }
        for (int f = 0; f < int(net.faces.size()); ++f) {
            for (int e = 0; e < net.faces[f].corners(); ++e) {
                const bool boundary = net.faces[f].neighbour[e] < 0;
                CHECK(seen[{f, e}] == (boundary ? 1 : 0));
            }
        }
    }
}

TEST_CASE("glue map is an arclength-preserving involution") {
    for (const auto kind : kAllKinds) {
        CAPTURE(kind_name(kind));
        const PolyhedronNet& net = net_for(kind);
        const GluedComplex complex = glue_complex(net);
        for (const auto& g : net.identifications) {
            for (const auto& [face, edge] : {std::pair{g.face_a, g.edge_a}, std::pair{g.face_b, g.edge_b}}) {
                for (double s : {0.0, 0.25, 0.5, 1.0}) {
                    const EdgePoint image = glue_map(net, face, edge, s);
                    const EdgePoint back = glue_map(net, image.face, image.edge, image.s);
                    CHECK(back.face == face);
                    CHECK(back.edge == edge);
                    CHECK(back.s == doctest::Approx(s).epsilon(1e-15));
                }
                const EdgePoint i1 = glue_map(net, face, edge, 0.2);
                const EdgePoint i2 = glue_map(net, face, edge, 0.7);
                CHECK((net.edge_point(i1.face, i1.edge, i1.s) - net.edge_point(i2.face, i2.edge, i2.s))
                          .norm() == doctest::Approx(0.5).epsilon(1e-12));
                // Endpoints land on cone points.
                for (double s : {0.0, 1.0}) {
                    const EdgePoint image = glue_map(net, face, edge, s);
                    const int c = net.corners_per_face();
                    const int corner = image.s < 0.5 ? image.edge : (image.edge + 1) % c;
                    CHECK(image.s * (1 - image.s) == doctest::Approx(0.0));
                    CHECK(complex.class_angle[complex.corner_class[image.face * c + corner]] < 2 * pi - 0.1);
                }
            }
        }
    }
}

TEST_CASE("glue map rejects interior edges") {
    const PolyhedronNet& net = net_for(PolyhedronKind::Octahedron);
    bool tried = false;
    for (int f = 0; f < int(net.faces.size()) && !tried; ++f) {
        for (int e = 0; e < net.faces[f].corners(); ++e) {
            if (net.faces[f].neighbour[e] >= 0) {
                CHECK_THROWS_AS(glue_map(net, f, e, 0.5), InteriorEdge);
                tried = true;
                break;
            }
        }
    }
    CHECK(tried);
}

TEST_CASE("construction is deterministic") {
    for (const auto kind : kAllKinds) {
        CHECK(describe(build_net(kind)) == describe(build_net(kind)));
    }
}

TEST_CASE("kind names round-trip") {
    for (const auto kind : kAllKinds) CHECK(parse_kind(kind_name(kind)) == kind);
    CHECK(parse_kind("tetra") == PolyhedronKind::Tetrahedron);
    CHECK_FALSE(parse_kind("dodecahedron").has_value());
}

TEST_CASE("face lookup") {
    const PolyhedronNet& net = net_for(PolyhedronKind::Cube);
    for (int f = 0; f < int(net.faces.size()); ++f) {
        Point centre = Point::Zero();
        for (const auto& v : net.faces[f].vertices) centre += v / 4.0;
        CHECK(net.face_containing(centre) == f);
    }
    CHECK(net.face_containing({-5.0, -5.0}) == -1);
}

TEST_CASE("fold chains reach the base face") {
    for (const auto kind : kAllKinds) {
        const PolyhedronNet& net = net_for(kind);
        const Face& base = net.faces[0];
        for (const auto& f : net.faces) {
            // The fold of a face's corners is a permutation of the base face's corners.
            for (const auto& v : f.vertices) {
                const Point q = f.to_base(v);
                double nearest = 1e9;
                for (const auto& w : base.vertices) nearest = std::min(nearest, (q - w).norm());
                CHECK(nearest < 1e-12);
            }
        }
    }
}
