#include "polyspec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "polyspec/errors.hpp"

namespace polyspec {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

constexpr double kShift = -1.0;

void fix_sign(Vector& v) {
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v[at] < 0) v = -v;
}

double clamp_zero(double lambda) { return lambda < 0 && lambda > -1e-12 ? 0.0 : lambda; }

class ShiftInvertLanczos {
public:
    ShiftInvertLanczos(const SparseSymMatrix& K, const SparseSymMatrix& M, int m,
                       const SolverOptions& opt)
        : K_(K.matrix), M_(M.matrix), n_(K.dim()), m_(m), opt_(opt), rng_(opt.seed) {
        factor_.compute(SpMat(K_ - kShift * M_));
        if (factor_.info() != Eigen::Success) {
            throw NoConvergence("K - sigma M is not positive definite", 0, 0.0);
        }
        block_ = std::max(1, std::min(opt.block_size, n_));
        ncv_ = std::min(n_, std::max(2 * m_ + 2 * block_, m_ + 4 * block_));
        keep_ = std::min(ncv_ - block_, m_ + (ncv_ - m_) / 2);
        budget_ = opt.max_applications > 0 ? opt.max_applications : 500L * m_;
        Q_.resize(n_, ncv_);
        AQ_.resize(n_, ncv_);
        H_ = Matrix::Zero(ncv_, ncv_);
    }

    std::vector<EigenPair> run() {
        Matrix pending = orthonormalize(random_block(block_));
        double worst = std::numeric_limits<double>::infinity();
        while (true) {
            while (pending.cols() > 0 && k_ + pending.cols() <= ncv_) {
                pending = expand(pending);
            }
            if (pending.cols() == 0 && k_ < n_) pending = orthonormalize(random_block(block_));

            RitzResult ritz = rayleigh_ritz();
            worst = ritz.worst;
            if (ritz.converged) {
                const int missing = missing_below(ritz.pairs);
                if (missing == 0) return std::move(ritz.pairs);
                // Some eigenvalues below the top were skipped; perturb the search space.
                pending = orthonormalize(random_block(std::max(block_, std::min(missing, ncv_))));
            }
            if (applications_ > budget_) {
                std::ostringstream msg;
                msg << "eigensolver did not converge: " << applications_
                    << " operator applications, worst residual " << worst;
                throw NoConvergence(msg.str(), static_cast<int>(applications_), worst);
            }
            restart(ritz);
            if (pending.cols() + k_ > ncv_) pending.conservativeResize(Eigen::NoChange, ncv_ - k_);
        }
    }

private:
    struct RitzResult {
        std::vector<EigenPair> pairs;
        Matrix basis;    // kept Ritz vectors
        Matrix applied;  // operator applied to them
        Vector theta;
        bool converged = false;
        double worst = 0.0;
    };

    Matrix random_block(int cols) {
        std::normal_distribution<double> normal;
        Matrix out(n_, cols);
        for (int c = 0; c < cols; ++c) {
            for (int i = 0; i < n_; ++i) out(i, c) = normal(rng_);
        }
        return out;
    }

    double m_norm(const Vector& x) const { return std::sqrt(std::max(0.0, x.dot(M_ * x))); }

    // Removes the M-projection onto the current basis, twice.
    void project_out(Matrix& W) const {
        if (k_ == 0) return;
        const auto Q = Q_.leftCols(k_);
        for (int pass = 0; pass < 2; ++pass) {
            const Matrix MW = M_ * W;
            W.noalias() -= Q * (Q.transpose() * MW);
        }
    }

    // M-orthonormal columns spanning W, orthogonal to the basis; rank-deficient columns are
    // replaced by fresh random directions or dropped when the space is exhausted.
    Matrix orthonormalize(Matrix W) {
        project_out(W);
        Matrix out(n_, W.cols());
        int accepted = 0;
        for (int c = 0; c < W.cols(); ++c) {
            Vector x = W.col(c);
            bool ok = false;
            for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
                if (attempt > 0) {
                    Matrix r = random_block(1);
                    project_out(r);
                    x = r.col(0);
                }
                const double before = m_norm(x);
                if (before == 0.0) continue;
                for (int pass = 0; pass < 2; ++pass) {
                    for (int p = 0; p < accepted; ++p) {
                        const Vector Mx = M_ * x;
                        x -= out.col(p) * out.col(p).dot(Mx);
                    }
                }
                const double after = m_norm(x);
                if (after > 1e-8 * before) {
                    x /= after;
                    ok = true;
                }
            }
            if (ok) out.col(accepted++) = x;
        }
        out.conservativeResize(Eigen::NoChange, accepted);
        return out;
    }

    Matrix apply(const Matrix& X) {
        applications_ += X.cols();
        const Matrix MX = M_ * X;
        Matrix out(n_, X.cols());
        for (int c = 0; c < X.cols(); ++c) out.col(c) = factor_.solve(MX.col(c));
        return out;
    }

    // Appends the block to the basis and returns the next orthonormal block.
    Matrix expand(const Matrix& F) {
        const int b = static_cast<int>(F.cols());
        const Matrix AF = apply(F);
        Q_.middleCols(k_, b) = F;
        AQ_.middleCols(k_, b) = AF;
        const Matrix C = Q_.leftCols(k_ + b).transpose() * (M_ * AF);
        H_.block(0, k_, k_ + b, b) = C;
        H_.block(k_, 0, b, k_ + b) = C.transpose();
        const Matrix diag = H_.block(k_, k_, b, b);
        H_.block(k_, k_, b, b) = 0.5 * (diag + diag.transpose());
        k_ += b;
        if (k_ >= n_) return Matrix(n_, 0);
        return orthonormalize(AF);
    }

    RitzResult rayleigh_ritz() {
        const Matrix Hk = H_.topLeftCorner(k_, k_);
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Hk + Hk.transpose()));
        // Largest theta first: theta = 1 / (lambda - shift).
        const Vector theta = es.eigenvalues().reverse();
        const Matrix S = es.eigenvectors().rowwise().reverse();

        RitzResult out;
        const int kept = std::min(k_, keep_);
        out.basis = Q_.leftCols(k_) * S.leftCols(kept);
        out.applied = AQ_.leftCols(k_) * S.leftCols(kept);
        out.theta = theta.head(kept);

        const int wanted = std::min(m_, kept);
        out.converged = wanted == m_;
        for (int i = 0; i < wanted; ++i) {
            Vector y = out.basis.col(i);
            const Vector My = M_ * y;
            const double norm2 = y.dot(My);
            const double lambda = clamp_zero(y.dot(K_ * y) / norm2);
            y /= std::sqrt(norm2);
            EigenPair pair{lambda, y};
            const double res = residual_of(pair);
            out.worst = std::max(out.worst, res);
            if (res > opt_.tol && k_ < n_) out.converged = false;
            out.pairs.push_back(std::move(pair));
        }
        std::stable_sort(out.pairs.begin(), out.pairs.end(),
                         [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
        for (auto& p : out.pairs) fix_sign(p.vector);
        return out;
    }

    double residual_of(const EigenPair& p) const {
        const Vector Mv = M_ * p.vector;
        return (K_ * p.vector - p.lambda * Mv).norm() / ((1.0 + p.lambda) * Mv.norm());
    }

    int missing_below(const std::vector<EigenPair>& pairs) const {
        if (m_ >= n_) return 0;
        const double top = pairs.back().lambda;
        const double mu = top - 1e-7 * (1.0 + top);
        int found = 0;
        for (const auto& p : pairs) found += p.lambda < mu ? 1 : 0;
        return std::max(0, count_below(SparseSymMatrix{K_}, SparseSymMatrix{M_}, mu) - found);
    }

    void restart(const RitzResult& ritz) {
        const int kept = static_cast<int>(ritz.basis.cols());
        Q_.leftCols(kept) = ritz.basis;
        AQ_.leftCols(kept) = ritz.applied;
        H_.setZero();
        H_.topLeftCorner(kept, kept).diagonal() = ritz.theta;
        k_ = kept;
    }

    const SpMat& K_;
    const SpMat& M_;
    int n_;
    int m_;
    SolverOptions opt_;
    std::mt19937_64 rng_;
    Eigen::SimplicialLLT<SpMat> factor_;
    int block_ = 1;
    int ncv_ = 1;
    int keep_ = 1;
    long budget_ = 0;
    long applications_ = 0;
    int k_ = 0;
    Matrix Q_;
    Matrix AQ_;
    Matrix H_;
};

void guard_dense(Eigen::Index n) {
    if (n > kDenseLimit) {
        throw DimensionTooLarge("dense solve limited to dimension " + std::to_string(kDenseLimit) +
                                ", got " + std::to_string(n));
    }
}

} // namespace

std::vector<EigenPair> solve_lowest(const SparseSymMatrix& K, const SparseSymMatrix& M, int m,
                                    const SolverOptions& options) {
    if (K.dim() != M.dim()) throw std::invalid_argument("K and M dimensions differ");
    if (m < 1 || m > K.dim()) throw std::invalid_argument("eigenvalue count out of range");
    if (!(options.tol >= 1e-12)) throw std::invalid_argument("tolerance must be at least 1e-12");
    // Tiny pencils leave no room for a Krylov block; the dense reduction is exact and cheap there.
    if (K.dim() <= 3 * (m + options.block_size) && K.dim() <= kDenseLimit) {
        auto pairs = dense_solve(K, M);
        pairs.resize(static_cast<std::size_t>(m));
        return pairs;
    }
    return ShiftInvertLanczos(K, M, m, options).run();
}

std::vector<EigenPair> dense_solve(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M) {
    guard_dense(K.rows());
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(K, M);
    if (es.info() != Eigen::Success) throw NoConvergence("dense reduction failed", 0, 0.0);
    std::vector<EigenPair> out;
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
        Vector v = es.eigenvectors().col(i);
        v /= std::sqrt(v.dot(M * v));
        fix_sign(v);
        out.push_back({clamp_zero(es.eigenvalues()[i]), v});
    }
    return out;
}

std::vector<EigenPair> dense_solve(const SparseSymMatrix& K, const SparseSymMatrix& M) {
    guard_dense(K.dim());
    return dense_solve(Matrix(K.matrix), Matrix(M.matrix));
}

double residual(const SparseSymMatrix& K, const SparseSymMatrix& M, const EigenPair& pair) {
    const Vector Mv = M.matrix * pair.vector;
    return (K.matrix * pair.vector - pair.lambda * Mv).norm() / ((1.0 + pair.lambda) * Mv.norm());
}

int count_below(const SparseSymMatrix& K, const SparseSymMatrix& M, double mu) {
    Eigen::SimplicialLDLT<SpMat> ldlt(SpMat(K.matrix - mu * M.matrix));
    if (ldlt.info() != Eigen::Success) throw NoConvergence("LDLT of K - mu M failed", 0, 0.0);
    const Vector d = ldlt.vectorD();
    return static_cast<int>((d.array() < 0.0).count());
}

} // namespace polyspec
