#pragma once

#include <iosfwd>
#include <utility>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "polyspec/mesh.hpp"

namespace polyspec {

// Symmetric sparse matrix with both triangles stored, compressed column storage.
struct SparseSymMatrix {
    Eigen::SparseMatrix<double> matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
    long nonzeros() const { return matrix.nonZeros(); }
    double value(int row, int col) const { return matrix.coeff(row, col); }
    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const { return matrix * x; }

    // Builds from triplets, sums duplicates, symmetrizes and drops entries below 1e-14.
    static SparseSymMatrix from_triplets(int n, const std::vector<Eigen::Triplet<double>>& entries);
};

struct ElementMatrices {
    Eigen::Matrix3d stiffness;
    Eigen::Matrix3d mass;
};

// P1 stiffness (cotangent weights) and consistent mass of one triangle.
// Throws DegenerateElement when the area is below 1e-14.
ElementMatrices element_matrices(const Point& a, const Point& b, const Point& c);

struct SystemMatrices {
    SparseSymMatrix stiffness;
    SparseSymMatrix mass;
};

SystemMatrices assemble(const SurfaceMesh& mesh);

// One "row col value" line per stored entry, 0-based, 17 significant digits.
void write_coordinate(std::ostream& out, const SparseSymMatrix& m);

} // namespace polyspec
