#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "polyspec/errors.hpp"
#include "polyspec/mesh.hpp"

using namespace polyspec;

namespace {

std::pair<long, long> grid_key(const Point& p, int r) {
    return {std::lround(p.x() * 4 * r), std::lround(p.y() * 4 * r)};
}

// DOF count by an independent union-find over glued boundary grid points.
int oracle_dof_count(const SurfaceMesh& mesh) {
    const int r = mesh.resolution;
    std::map<std::pair<long, long>, int> index;
    for (int v = 0; v < mesh.planar_count(); ++v) index[grid_key(mesh.planar_vertices[v], r)] = v;
    std::vector<int> parent(mesh.planar_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const auto& net = mesh.net;
    for (const auto& g : net.identifications) {
        for (int i = 0; i <= r; ++i) {
            const double s = double(i) / r;
            const EdgePoint other = glue_map(net, g.face_a, g.edge_a, s);
            const int a = index.at(grid_key(net.edge_point(g.face_a, g.edge_a, s), r));
            const int b = index.at(grid_key(net.edge_point(other.face, other.edge, other.s), r));
            parent[root(a)] = root(b);
        }
    }
    int classes = 0;
    for (int v = 0; v < mesh.planar_count(); ++v) classes += root(v) == v;
    return classes;
}

int expected_dof_count(PolyhedronKind kind, int r) {
    const std::map<PolyhedronKind, std::array<int, 3>> vef = {
        {PolyhedronKind::Tetrahedron, {4, 6, 4}},
        {PolyhedronKind::Octahedron, {6, 12, 8}},
        {PolyhedronKind::Icosahedron, {12, 30, 20}},
        {PolyhedronKind::Cube, {8, 12, 6}},
    };
    const auto [v, e, f] = vef.at(kind);
    const int interior = has_triangle_faces(kind) ? (r - 1) * (r - 2) / 2 : (r - 1) * (r - 1);
    return v + e * (r - 1) + f * interior;
}

} // namespace

TEST_CASE("planar counts follow the strip formula") {
    for (const auto kind : kAllKinds) {
        const auto& net = net_for(kind);
        for (int r = 1; r <= 6; ++r) {
            const SurfaceMesh mesh = build_mesh(net, r);
            CHECK(mesh.planar_count() == (net.strip_width * r + 1) * (r + 1));
            CHECK(mesh.dof_count < mesh.planar_count());
        }
    }
    const SurfaceMesh tetra = build_mesh(net_for(PolyhedronKind::Tetrahedron), 1);
    CHECK(tetra.planar_count() == 6);
    CHECK(tetra.element_count() == 4);
}

TEST_CASE("element areas are uniform and positive") {
    for (const auto kind : kAllKinds) {
        CAPTURE(kind_name(kind));
        const int r = 5;
        const SurfaceMesh mesh = build_mesh(net_for(kind), r);
        const double expected = has_triangle_faces(kind) ? std::sqrt(3.0) / 4 / (r * r) : 0.5 / (r * r);
        for (int e = 0; e < mesh.element_count(); ++e) {
            CHECK(mesh.element_area(e) == doctest::Approx(expected).epsilon(1e-12));
        }
        CHECK(mesh.total_area() == doctest::Approx(mesh.net.area()).epsilon(1e-12));
    }
}

TEST_CASE("DOF numbering matches an independent union-find") {
    for (const auto kind : kAllKinds) {
        CAPTURE(kind_name(kind));
        for (int r : {1, 2, 3, 8}) {
            const SurfaceMesh mesh = build_mesh(net_for(kind), r);
            CHECK(mesh.dof_count == oracle_dof_count(mesh));
            CHECK(mesh.dof_count == expected_dof_count(kind, r));
            std::vector<bool> hit(mesh.dof_count, false);
            for (int d : mesh.dof_of) hit.at(d) = true;
            CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
        }
    }
}

TEST_CASE("glued grid points share a DOF") {
    for (const auto kind : kAllKinds) {
        const int r = 4;
        const SurfaceMesh mesh = build_mesh(net_for(kind), r);
        const auto& net = mesh.net;
        for (const auto& g : net.identifications) {
            for (int i = 0; i <= r; ++i) {
                const double s = double(i) / r;
                const EdgePoint other = glue_map(net, g.face_a, g.edge_a, s);
                const Location a = locate(mesh, net.edge_point(g.face_a, g.edge_a, s));
                const Location b = locate(mesh, net.edge_point(other.face, other.edge, other.s));
                auto dof_at = [&](const Location& loc) {
                    const int k = int(std::max_element(loc.barycentric.begin(), loc.barycentric.end()) -
                                      loc.barycentric.begin());
                    return mesh.dof_of[mesh.elements[loc.element][k]];
                };
                CHECK(dof_at(a) == dof_at(b));
            }
        }
    }
}

TEST_CASE("the identified mesh is closed") {
    for (const auto kind : kAllKinds) {
        CAPTURE(kind_name(kind));
        for (int r : {2, 3}) {
            const SurfaceMesh mesh = build_mesh(net_for(kind), r);
            std::map<std::pair<int, int>, int> uses;
            for (const auto& el : mesh.elements) {
                for (int i = 0; i < 3; ++i) {
                    int a = mesh.dof_of[el[i]];
                    int b = mesh.dof_of[el[(i + 1) % 3]];
                    if (a > b) std::swap(a, b);
                    ++uses[{a, b}];
                }
            }
            for (const auto& [edge, n] : uses) CHECK(n == 2);
        }
    }
}

TEST_CASE("refinement is nested") {
    for (const auto kind : kAllKinds) {
        const SurfaceMesh coarse = build_mesh(net_for(kind), 3);
        const SurfaceMesh fine = build_mesh(net_for(kind), 6);
        std::map<std::pair<long, long>, int> fine_points;
        for (const auto& p : fine.planar_vertices) fine_points[grid_key(p, 6)] = 1;
        for (const auto& p : coarse.planar_vertices) CHECK(fine_points.count(grid_key(p, 6)) == 1);
    }
}

TEST_CASE("locate finds centroids, vertices and edge points") {
    for (const auto kind : kAllKinds) {
        CAPTURE(kind_name(kind));
        const SurfaceMesh mesh = build_mesh(net_for(kind), 4);
        for (int e = 0; e < mesh.element_count(); e += 7) {
            const auto& el = mesh.elements[e];
            const Point centroid = (mesh.planar_vertices[el[0]] + mesh.planar_vertices[el[1]] +
                                    mesh.planar_vertices[el[2]]) / 3.0;
            const Location loc = locate(mesh, centroid);
            CHECK(loc.element == e);
            for (double b : loc.barycentric) CHECK(b == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

            const Location at_vertex = locate(mesh, mesh.planar_vertices[el[1]]);
            CHECK(*std::max_element(at_vertex.barycentric.begin(), at_vertex.barycentric.end()) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("interpolation reproduces points and agrees across element edges") {
    const SurfaceMesh mesh = build_mesh(net_for(PolyhedronKind::Icosahedron), 3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::VectorXd values(mesh.dof_count);
    for (int i = 0; i < mesh.dof_count; ++i) values[i] = unit(rng);

    for (int v = 0; v < mesh.planar_count(); ++v) {
        CHECK(interpolate(mesh, values, mesh.planar_vertices[v]) ==
              doctest::Approx(values[mesh.dof_of[v]]).epsilon(1e-12));
    }
    for (int e = 0; e < mesh.element_count(); e += 5) {
        const auto& el = mesh.elements[e];
        const Point& a = mesh.planar_vertices[el[0]];
        const Point& b = mesh.planar_vertices[el[1]];
        const Point mid = 0.5 * (a + b);
        const Location loc = locate(mesh, mid);
        const Point rebuilt = loc.barycentric[0] * mesh.planar_vertices[mesh.elements[loc.element][0]] +
                              loc.barycentric[1] * mesh.planar_vertices[mesh.elements[loc.element][1]] +
                              loc.barycentric[2] * mesh.planar_vertices[mesh.elements[loc.element][2]];
        CHECK((rebuilt - mid).norm() < 1e-9);
        CHECK(*std::min_element(loc.barycentric.begin(), loc.barycentric.end()) ==
              doctest::Approx(0.0));
        const double expected = 0.5 * (values[mesh.dof_of[el[0]]] + values[mesh.dof_of[el[1]]]);
        CHECK(interpolate(mesh, values, mid) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("points off the net are rejected") {
    const SurfaceMesh mesh = build_mesh(net_for(PolyhedronKind::Tetrahedron), 2);
    CHECK_THROWS_AS(locate(mesh, {-1.0, 0.2}), OutOfDomain);
    CHECK_THROWS_AS(locate(mesh, {0.5, 2.0}), OutOfDomain);
}
