#include "polyspec/fem.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "polyspec/errors.hpp"

namespace polyspec {

SparseSymMatrix SparseSymMatrix::from_triplets(int n,
                                               const std::vector<Eigen::Triplet<double>>& entries) {
    Eigen::SparseMatrix<double> raw(n, n);
    raw.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseMatrix<double> transposed = raw.transpose();
    SparseSymMatrix out;
    out.matrix = 0.5 * (raw + transposed);
    out.matrix.prune([](Eigen::Index, Eigen::Index, double v) { return std::abs(v) >= 1e-14; });
    out.matrix.makeCompressed();
    return out;
}

ElementMatrices element_matrices(const Point& a, const Point& b, const Point& c) {
    const Point ab = b - a;
    const Point ac = c - a;
    const double area = 0.5 * std::abs(ab.x() * ac.y() - ab.y() * ac.x());
    if (area < 1e-14) throw DegenerateElement("triangle area below 1e-14");

    // Edge opposite each vertex; the P1 gradients are these rotated by 90 degrees over 2*area.
    const std::array<Point, 3> opposite = {c - b, a - c, b - a};
    ElementMatrices out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out.stiffness(i, j) = opposite[i].dot(opposite[j]) / (4.0 * area);
            out.mass(i, j) = area / 12.0 * (i == j ? 2.0 : 1.0);
        }
    }
    return out;
}

SystemMatrices assemble(const SurfaceMesh& mesh) {
    std::vector<Eigen::Triplet<double>> k_entries;
    std::vector<Eigen::Triplet<double>> m_entries;
    k_entries.reserve(mesh.elements.size() * 9);
    m_entries.reserve(mesh.elements.size() * 9);
    for (const auto& tri : mesh.elements) {
        const auto em = element_matrices(mesh.planar_vertices[tri[0]], mesh.planar_vertices[tri[1]],
                                         mesh.planar_vertices[tri[2]]);
        for (int i = 0; i < 3; ++i) {
            const int row = mesh.dof_of[tri[i]];
            for (int j = 0; j < 3; ++j) {
                const int col = mesh.dof_of[tri[j]];
                k_entries.emplace_back(row, col, em.stiffness(i, j));
                m_entries.emplace_back(row, col, em.mass(i, j));
            }
        }
    }
    return {SparseSymMatrix::from_triplets(mesh.dof_count, k_entries),
            SparseSymMatrix::from_triplets(mesh.dof_count, m_entries)};
}

void write_coordinate(std::ostream& out, const SparseSymMatrix& m) {
    char buf[64];
    for (int col = 0; col < m.matrix.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m.matrix, col); it; ++it) {
            std::snprintf(buf, sizeof buf, "%.17g", it.value());
            out << it.row() << ' ' << it.col() << ' ' << buf << '\n';
        }
    }
}

} // namespace polyspec
