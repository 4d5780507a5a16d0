#include "cutfem/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <cmath>
#include <limits>
#include <random>

namespace cutfem {

struct BorderedSolver::Impl {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    Index n = 0;
};

BorderedSolver::BorderedSolver(const SparseMatrix& A, const Eigen::VectorXd& border) : impl_(std::make_unique<Impl>()) {
    const Index n = static_cast<Index>(A.rows());
    impl_->n = n;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(A.nonZeros()) + 2 * static_cast<std::size_t>(n));
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(A, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    for (Index i = 0; i < n; ++i) {
        if (border[i] == 0.0) continue;
        trip.emplace_back(n, i, border[i]);
        trip.emplace_back(i, n, border[i]);
    }
    SparseMatrix K(n + 1, n + 1);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    impl_->lu.analyzePattern(K);
    impl_->lu.factorize(K);
    if (impl_->lu.info() != Eigen::Success) throw SingularSystemError("bordered factorization failed");
}

BorderedSolver::~BorderedSolver() = default;

BorderedSolution BorderedSolver::solve(const Eigen::VectorXd& rhs, double constraint_value) const {
    Eigen::VectorXd b(impl_->n + 1);
    b.head(impl_->n) = rhs;
    b[impl_->n] = constraint_value;
    Eigen::VectorXd x = impl_->lu.solve(b);
    if (impl_->lu.info() != Eigen::Success) throw SingularSystemError("bordered solve failed");
    return {x.head(impl_->n), x[impl_->n]};
}

SolutionPair solve(const AssembledSystem& system) {
    const Index n = system.size();
    Eigen::VectorXd border = Eigen::VectorXd::Zero(n);
    border.tail(system.num_surf) = system.mean.weights;

    const BorderedSolver solver(system.A, border);
    const BorderedSolution sol = solver.solve(system.rhs);
    if (!sol.x.allFinite() || !std::isfinite(sol.multiplier))
        throw std::runtime_error("solve: non-finite solution");

    SolutionPair out;
    out.u_B = sol.x.head(system.num_bulk);
    out.u_S = sol.x.tail(system.num_surf);
    out.multiplier = sol.multiplier;
    const Eigen::VectorXd r = system.A * sol.x + sol.multiplier * border - system.rhs;
    out.residual_norm = r.norm() / std::max(system.rhs.norm(), 1.0);
    return out;
}

std::string_view to_string(SpectralMethod m) {
    return m == SpectralMethod::Dense ? "dense" : "iterative";
}

LanczosResult lanczos_largest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op, Index n,
                              const Eigen::VectorXd& deflate, const SpectralOptions& options) {
    const bool has_deflate = deflate.size() == n;
    Eigen::VectorXd zhat;
    if (has_deflate) zhat = deflate.normalized();
    const auto project = [&](Eigen::VectorXd& v) {
        if (has_deflate) v -= zhat.dot(v) * zhat;
    };

    const int max_steps = std::min<int>(options.max_iterations, has_deflate ? n - 1 : n);
    Eigen::MatrixXd basis(n, max_steps + 1);
    std::vector<double> alpha;
    std::vector<double> beta;

    std::mt19937 rng(options.seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    project(v);
    v.normalize();
    basis.col(0) = v;

    LanczosResult result;
    for (int j = 0; j < max_steps; ++j) {
        Eigen::VectorXd w = op(basis.col(j));
        project(w);
        alpha.push_back(basis.col(j).dot(w));
        // Full reorthogonalization, twice.
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd c = basis.leftCols(j + 1).transpose() * w;
            w -= basis.leftCols(j + 1) * c;
        }
        project(w);
        const double b = w.norm();

        const int m = j + 1;
        Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const double theta = tri.eigenvalues()[m - 1];
        const double resid = std::abs(b * tri.eigenvectors()(m - 1, m - 1));
        result.value = theta;
        result.iterations = m;
        if (resid <= options.tolerance * std::abs(theta) || b <= 1e-14 * std::abs(theta)) {
            result.converged = true;
            break;
        }
        beta.push_back(b);
        basis.col(j + 1) = w / b;
    }
    return result;
}

SpectralEstimate condition_number(const SparseMatrix& A, const Eigen::VectorXd& kernel, SpectralMethod method,
                                  const SpectralOptions& options) {
    const Index n = static_cast<Index>(A.rows());
    if (n < 2 || kernel.size() != n) throw std::invalid_argument("condition_number: size mismatch");
    const Eigen::VectorXd zhat = kernel.normalized();

    SpectralEstimate est;
    est.method = method;
    est.kernel_rayleigh = zhat.dot(A * zhat);

    if (method == SpectralMethod::Dense) {
        // Householder reflector H with H zhat = -+e_n; H A H restricted to the
        // first n-1 coordinates is A on the kernel complement.
        Eigen::VectorXd v = zhat;
        v[n - 1] += zhat[n - 1] >= 0.0 ? 1.0 : -1.0;
        const double beta = 2.0 / v.squaredNorm();
        Eigen::MatrixXd M = Eigen::MatrixXd(A);
        const Eigen::VectorXd u = M * v;
        const double c = v.dot(u);
        M -= beta * (v * u.transpose() + u * v.transpose());
        M += (beta * beta * c) * (v * v.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.topLeftCorner(n - 1, n - 1), Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success) throw std::runtime_error("condition_number: dense eigensolve failed");
        est.lambda_min = eig.eigenvalues()[0];
        est.lambda_max = eig.eigenvalues()[n - 2];
        est.trusted = est.lambda_min > 0.0;
        est.kappa = est.trusted ? est.lambda_max / est.lambda_min : std::numeric_limits<double>::infinity();
        return est;
    }

    const LanczosResult top = lanczos_largest([&](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x); }, n, zhat,
                                              options);
    // A restricted to the kernel complement is inverted by the bordered
    // system with the kernel direction as constraint.
    const BorderedSolver inverse(A, zhat);
    const LanczosResult bottom =
        lanczos_largest([&](const Eigen::VectorXd& x) { return inverse.solve(x).x; }, n, zhat, options);
    est.lambda_max = top.value;
    est.lambda_min = 1.0 / bottom.value;
    est.iterations = top.iterations + bottom.iterations;
    est.trusted = top.converged && bottom.converged && bottom.value > 0.0;
    est.kappa = bottom.value > 0.0 ? est.lambda_max / est.lambda_min : std::numeric_limits<double>::infinity();
    return est;
}

}  // namespace cutfem
