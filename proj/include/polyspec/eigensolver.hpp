#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "polyspec/fem.hpp"

namespace polyspec {

struct EigenPair {
    double lambda;
    Eigen::VectorXd vector;  // M-normalized, largest-magnitude entry positive
};

struct SolverOptions {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    int block_size = 6;
    // Budget in operator applications; 0 means 500 * m.
    long max_applications = 0;
};

// The m smallest eigenpairs of K u = lambda M u, ascending.
// Shift-invert block Lanczos in the M inner product with thick restarts; the count below the
// last reported eigenvalue is confirmed by the inertia of K - mu M.
// Throws NoConvergence when the residual contract is not met within the budget.
std::vector<EigenPair> solve_lowest(const SparseSymMatrix& K, const SparseSymMatrix& M, int m,
                                    const SolverOptions& options = {});

inline constexpr int kDenseLimit = 2000;

// Full spectrum by dense symmetric-definite reduction. Throws DimensionTooLarge above kDenseLimit.
std::vector<EigenPair> dense_solve(const SparseSymMatrix& K, const SparseSymMatrix& M);
std::vector<EigenPair> dense_solve(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M);

// ||K v - lambda M v|| / ((1 + lambda) ||M v||).
double residual(const SparseSymMatrix& K, const SparseSymMatrix& M, const EigenPair& pair);

// Number of generalized eigenvalues strictly below mu, by Sylvester's law of inertia.
int count_below(const SparseSymMatrix& K, const SparseSymMatrix& M, double mu);

} // namespace polyspec
