#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qkm/matrix.hpp"

namespace qkm {

struct SvmParams {
    double regularization_c = 1.0;
    double tolerance = 1e-3;
    /// Budget of full sweeps over the training set. The solver stops early
    /// at the first sweep with no KKT violation, or once a sweep cannot
    /// move any pair (further sweeps would repeat it verbatim).
    int max_passes = 200;
    std::uint64_t seed = 0;
};

/// Solution of the dual problem for one binary task. Invariants when
/// converged: 0 <= alpha_i <= C, sum alpha_i y_i = 0 within 1e-6, and every
/// non-bound support vector sits on its margin within 2 * tolerance.
struct DualSolution {
    std::vector<double> alphas;
    double bias = 0.0;
    std::vector<std::size_t> support_indices;
    std::vector<int> labels;
    double regularization_c = 1.0;
    bool converged = false;
    int passes_used = 0;
    /// Dual objective after every accepted SMO step; nondecreasing.
    std::vector<double> objective_trace;
    /// Diagonal jitter that was added to the Gram matrix before the
    /// returned attempt (0 when the first attempt converged).
    double jitter = 0.0;
};

/// One-against-rest ensemble: model[c] separates class c (+1) from the
/// rest (-1).
struct OvrModel {
    std::vector<DualSolution> models;
    int classes = 0;
    bool converged = false;
};

/// SMO over the dual of the soft-margin problem. gram is the full kernel
/// matrix of the training points; labels are +-1. A non-PSD gram (shot
/// noise) that fails to converge is retried with diagonal jitter 1e-8
/// escalating tenfold up to 1e-4; the last attempt is returned either way,
/// flagged via `converged`.
DualSolution solve_dual(const Matrix& gram, std::span<const int> labels,
                        const SvmParams& params = {});

/// f(X) = sum_i alpha_i y_i K(X_i, X) + bias for one evaluation point;
/// kernel_row[i] = K(train_i, X).
double decision_function(const DualSolution& model, std::span<const double> kernel_row);

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const Matrix& gram, const DualSolution& model);

/// Per-class binary solvers over a shared Gram matrix. Labels must be
/// dense in [0, classes) with every class present and classes >= 2.
OvrModel fit_ovr(const Matrix& gram, std::span<const int> labels,
                 const SvmParams& params = {});

/// Argmax of per-class decision scores, ties to the lowest class index.
/// kernel_rows is test x train: row t holds K(train_i, test_t).
std::vector<int> predict_ovr(const OvrModel& model, const Matrix& kernel_rows);

/// exp(-gamma * |a_i - b_j|^2) block of shape a.rows x b.rows; the
/// classical baseline kernel.
Matrix rbf_kernel(const Matrix& a, const Matrix& b, double gamma);

/// Heuristic gamma = 1 / (P * pooled feature variance); the variance is
/// taken over all matrix entries. Falls back to 1/P for constant data.
double default_rbf_gamma(const Matrix& points);

} // namespace qkm
