#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "polyspec/errors.hpp"
#include "polyspec/fem.hpp"

using namespace polyspec;

namespace {

// Gradients of the barycentric hat functions and edge-midpoint quadrature.
ElementMatrices quadrature_oracle(const Point& a, const Point& b, const Point& c) {
    Eigen::Matrix3d coords;
    coords << 1, 1, 1, a.x(), b.x(), c.x(), a.y(), b.y(), c.y();
    const Eigen::Matrix3d inv = coords.inverse();  // row i: coefficients of hat i in (1, x, y)
    const double area = 0.5 * std::abs(coords.determinant());
    ElementMatrices out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out.stiffness(i, j) = area * (inv(i, 1) * inv(j, 1) + inv(i, 2) * inv(j, 2));
        }
    }
    const Point mids[3] = {0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)};
    out.mass.setZero();
    for (const auto& m : mids) {
        const Eigen::Vector3d hat = inv * Eigen::Vector3d(1, m.x(), m.y());
        out.mass += area / 3.0 * hat * hat.transpose();
    }
    return out;
}

Eigen::MatrixXd dense(const SparseSymMatrix& m) { return Eigen::MatrixXd(m.matrix); }

} // namespace

TEST_CASE("unit right triangle") {
    const ElementMatrices em = element_matrices({0, 0}, {1, 0}, {0, 1});
    Eigen::Matrix3d k;
    k << 2, -1, -1, -1, 1, 0, -1, 0, 1;
    Eigen::Matrix3d m;
    m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    CHECK((em.stiffness - 0.5 * k).norm() < 1e-15);
    CHECK((em.mass - m / 24.0).norm() < 1e-15);
}

TEST_CASE("equilateral triangle") {
    const ElementMatrices em = element_matrices({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
    for (int i = 0; i < 3; ++i) {
        CHECK(em.stiffness(i, i) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(em.stiffness.row(i).sum() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        for (int j = 0; j < 3; ++j) {
            if (i != j) CHECK(em.stiffness(i, j) == doctest::Approx(-0.5 / std::sqrt(3.0)).epsilon(1e-14));
        }
    }
}

TEST_CASE("element matrices agree with the quadrature oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    int tested = 0;
    while (tested < 50) {
        const Point a(coord(rng), coord(rng));
        const Point b(coord(rng), coord(rng));
        const Point c(coord(rng), coord(rng));
        const double signed_area = 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
        if (signed_area < 0.05) continue;
        ++tested;
        const ElementMatrices em = element_matrices(a, b, c);
        const ElementMatrices ref = quadrature_oracle(a, b, c);
        CHECK((em.stiffness - ref.stiffness).norm() < 1e-11 * (1 + ref.stiffness.norm()));
        CHECK((em.mass - ref.mass).norm() < 1e-13);
        CHECK(em.mass.sum() == doctest::Approx(signed_area).epsilon(1e-13));
        CHECK((em.stiffness - em.stiffness.transpose()).norm() == 0.0);
        CHECK(em.stiffness.rowwise().sum().norm() < 1e-12 * em.stiffness.norm());
    }
}

TEST_CASE("degenerate elements are rejected") {
    CHECK_THROWS_AS(element_matrices({0, 0}, {1, 0}, {2, 0}), DegenerateElement);
    CHECK_THROWS_AS(element_matrices({0, 0}, {0, 0}, {0, 1}), DegenerateElement);
}

TEST_CASE("assembled constants: kernel and area") {
    for (const auto kind : kAllKinds) {
        CAPTURE(kind_name(kind));
        for (int r : {1, 2, 5}) {
            const SystemMatrices sys = assemble(build_mesh(net_for(kind), r));
            const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.stiffness.dim());
            CHECK((sys.stiffness * ones).norm() < 1e-12);
            CHECK(ones.dot(sys.mass * ones) == doctest::Approx(net_for(kind).area()).epsilon(1e-12));
        }
    }
}

TEST_CASE("assembled matrices are exactly symmetric without stored zeros") {
    for (const auto kind : kAllKinds) {
        const SystemMatrices sys = assemble(build_mesh(net_for(kind), 4));
        for (const auto* m : {&sys.stiffness, &sys.mass}) {
            const Eigen::SparseMatrix<double> t = m->matrix.transpose();
            CHECK((m->matrix - t).norm() == 0.0);
            for (int k = 0; k < m->matrix.outerSize(); ++k) {
                for (Eigen::SparseMatrix<double>::InnerIterator it(m->matrix, k); it; ++it) {
                    CHECK(std::abs(it.value()) >= 1e-14);
                }
            }
        }
    }
}

TEST_CASE("one-dimensional kernel and definiteness") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (const auto kind : kAllKinds) {
        CAPTURE(kind_name(kind));
        const SystemMatrices sys = assemble(build_mesh(net_for(kind), 2));
        const Eigen::MatrixXd k = dense(sys.stiffness);
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues();
        CHECK(std::abs(ev[0]) < 1e-12);
        CHECK(ev[1] > 1e-3);
        for (int t = 0; t < 100; ++t) {
            Eigen::VectorXd x(sys.stiffness.dim());
            for (int i = 0; i < x.size(); ++i) x[i] = normal(rng);
            CHECK(x.dot(sys.stiffness * x) >= 0.0);
            CHECK(x.dot(sys.mass * x) > 0.0);
        }
    }
}

TEST_CASE("relabelling DOFs conjugates the matrices") {
    std::mt19937_64 rng(9);
    for (const auto kind : kAllKinds) {
        for (int r : {1, 2}) {
            SurfaceMesh mesh = build_mesh(net_for(kind), r);
            const SystemMatrices original = assemble(mesh);
            std::vector<int> perm(mesh.dof_count);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            for (int& d : mesh.dof_of) d = perm[d];
            const SystemMatrices relabelled = assemble(mesh);
            const Eigen::MatrixXd k0 = dense(original.stiffness);
            const Eigen::MatrixXd k1 = dense(relabelled.stiffness);
            const Eigen::MatrixXd m0 = dense(original.mass);
            const Eigen::MatrixXd m1 = dense(relabelled.mass);
            double worst = 0.0;
            for (int i = 0; i < mesh.dof_count; ++i) {
                for (int j = 0; j < mesh.dof_count; ++j) {
                    worst = std::max(worst, std::abs(k1(perm[i], perm[j]) - k0(i, j)));
                    worst = std::max(worst, std::abs(m1(perm[i], perm[j]) - m0(i, j)));
                }
            }
            CHECK(worst < 1e-13);
        }
    }
}

TEST_CASE("coordinate dump") {
    const SystemMatrices sys = assemble(build_mesh(net_for(PolyhedronKind::Tetrahedron), 1));
    std::ostringstream text;
    write_coordinate(text, sys.mass);
    std::istringstream in(text.str());
    int rows = 0;
    int i = 0;
    int j = 0;
    double v = 0.0;
    while (in >> i >> j >> v) {
        CHECK(v == sys.mass.value(i, j));
        ++rows;
    }
    CHECK(rows == sys.mass.nonzeros());
}
