#pragma once

#include "cutfem/assembly.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <string_view>

namespace cutfem {

struct SolutionPair {
    Eigen::VectorXd u_B;
    Eigen::VectorXd u_S;
    double multiplier = 0.0;
    /// ||A u + mu m - rhs|| / max(||rhs||, 1)
    double residual_norm = 0.0;
};

/// Solution of the bordered system [A c; c^T 0] [x; mu] = [b; 0].
struct BorderedSolution {
    Eigen::VectorXd x;
    double multiplier = 0.0;
};

/// Sparse LU factorization of a symmetric matrix bordered by one dense
/// constraint row. Reusable for many right-hand sides.
class BorderedSolver {
  public:
    BorderedSolver(const SparseMatrix& A, const Eigen::VectorXd& border);
    ~BorderedSolver();
    BorderedSolver(const BorderedSolver&) = delete;
    BorderedSolver& operator=(const BorderedSolver&) = delete;

    [[nodiscard]] BorderedSolution solve(const Eigen::VectorXd& rhs, double constraint_value = 0.0) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Solves A_h(u, v) = l_h(v) with the mean-zero constraint on u_S imposed
/// by a Lagrange multiplier. Throws SingularSystemError on breakdown and
/// std::runtime_error if the solution is not finite.
SolutionPair solve(const AssembledSystem& system);

enum class SpectralMethod { Dense, Iterative };

std::string_view to_string(SpectralMethod m);

struct SpectralEstimate {
    double lambda_max = 0.0;
    double lambda_min = 0.0;  // smallest eigenvalue on the kernel complement
    double kappa = 0.0;
    SpectralMethod method = SpectralMethod::Dense;
    bool trusted = true;
    int iterations = 0;
    /// z^T A z / (z^T z) for the supplied kernel direction.
    double kernel_rayleigh = 0.0;
};

struct SpectralOptions {
    double tolerance = 1e-6;
    int max_iterations = 600;
    unsigned seed = 12345;
};

/// Condition number of a symmetric positive semidefinite matrix with a
/// known one-dimensional kernel, computed on the orthogonal complement of
/// that kernel.
SpectralEstimate condition_number(const SparseMatrix& A, const Eigen::VectorXd& kernel, SpectralMethod method,
                                  const SpectralOptions& options = {});

/// Largest eigenvalue of a symmetric operator restricted to the orthogonal
/// complement of `deflate` (may be empty), by Lanczos with full
/// reorthogonalization.
struct LanczosResult {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

LanczosResult lanczos_largest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op, Index n,
                              const Eigen::VectorXd& deflate, const SpectralOptions& options);

}  // namespace cutfem
