#pragma once

#include <array>
#include <vector>

#include "polyspec/net.hpp"

namespace polyspec {

struct SurfaceMesh {
    PolyhedronNet net;
    int resolution = 0;                   // subintervals per unit edge
    std::vector<Point> planar_vertices;
    std::vector<int> dof_of;              // planar vertex -> global degree of freedom
    std::vector<std::array<int, 3>> elements;  // planar vertex indices, counter-clockwise
    std::vector<int> element_face;
    int dof_count = 0;

    int planar_count() const { return static_cast<int>(planar_vertices.size()); }
    int element_count() const { return static_cast<int>(elements.size()); }
    double element_area(int e) const;
    double total_area() const;

    // Element covering grid cell (i, j) of a face; upper selects the second triangle of the cell.
    int cell_element(int face, int i, int j, bool upper) const;

    std::vector<int> cell_lookup;  // face * r * r * 2 + (i * r + j) * 2 + upper, -1 if absent
};

SurfaceMesh build_mesh(const PolyhedronNet& net, int resolution);

struct Location {
    int element;
    std::array<double, 3> barycentric;
};

// Throws OutOfDomain when p is farther than tol from every face of the net.
Location locate(const SurfaceMesh& mesh, const Point& p, double tol = 1e-9);

// P1 interpolation of a DOF-indexed vector at p.
double interpolate(const SurfaceMesh& mesh, const Eigen::VectorXd& values, const Point& p);

// Nodal values of f at every DOF (evaluated at the first planar vertex of each DOF).
template <class F>
Eigen::VectorXd sample_dofs(const SurfaceMesh& mesh, F&& f) {
    Eigen::VectorXd out(mesh.dof_count);
    std::vector<bool> done(mesh.dof_count, false);
    for (int v = 0; v < mesh.planar_count(); ++v) {
        const int d = mesh.dof_of[v];
        if (done[d]) continue;
        done[d] = true;
        out[d] = f(mesh.planar_vertices[v]);
    }
    return out;
}

} // namespace polyspec
