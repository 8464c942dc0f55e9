#include "qkm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qkm/errors.hpp"
#include "qkm/parallel.hpp"
#include "qkm/rng.hpp"

namespace qkm {

namespace {

void validate_gram(const Matrix& gram, std::span<const int> labels, const SvmParams& params) {
    if (gram.rows != gram.cols) throw ShapeError("gram matrix must be square");
    if (gram.rows == 0) throw PreconditionError("empty training set");
    if (labels.size() != gram.rows)
        throw ShapeError("label count does not match gram size");
    for (double v : gram.values)
        if (!std::isfinite(v)) throw DataError("non-finite kernel entry");
    for (int y : labels)
        if (y != 1 && y != -1) throw PreconditionError("binary labels must be +1 or -1");
    if (!(params.regularization_c > 0.0)) throw PreconditionError("C must be positive");
    if (!(params.tolerance > 0.0)) throw PreconditionError("tolerance must be positive");
    if (params.max_passes < 1) throw PreconditionError("max_passes must be >= 1");
}

// One SMO run against a fixed gram. Sweeps the whole index set; a sweep
// with zero accepted updates means every point satisfies its KKT condition
// within tolerance, which is the stopping rule.
DualSolution smo(const Matrix& gram, std::span<const int> labels, const SvmParams& params) {
    const std::size_t n = gram.rows;
    const double c_box = params.regularization_c;
    const double tol = params.tolerance;

    DualSolution sol;
    sol.alphas.assign(n, 0.0);
    sol.labels.assign(labels.begin(), labels.end());
    sol.regularization_c = c_box;
    sol.bias = 0.0;

    SplitMix64 rng(derive_seed(params.seed, 11, 0, 0));

    auto score = [&](std::size_t i) {
        double f = sol.bias;
        for (std::size_t j = 0; j < n; ++j)
            if (sol.alphas[j] > 0.0) f += sol.alphas[j] * labels[j] * gram.at(j, i);
        return f;
    };

    // Attempts the two-variable step on (i, j). Returns false when the pair
    // cannot move (degenerate bounds, flat curvature, negligible step).
    auto try_pair = [&](std::size_t i, std::size_t j, double ei) {
        const double yi = labels[i];
        const double yj = labels[j];
        const double ej = score(j) - yj;
        const double ai_old = sol.alphas[i];
        const double aj_old = sol.alphas[j];

        double low, high;
        if (yi != yj) {
            low = std::max(0.0, aj_old - ai_old);
            high = std::min(c_box, c_box + aj_old - ai_old);
        } else {
            low = std::max(0.0, ai_old + aj_old - c_box);
            high = std::min(c_box, ai_old + aj_old);
        }
        if (low >= high) return false;

        const double eta = 2.0 * gram.at(i, j) - gram.at(i, i) - gram.at(j, j);
        if (eta >= 0.0) return false;

        double aj = aj_old - yj * (ei - ej) / eta;
        aj = std::clamp(aj, low, high);
        if (std::abs(aj - aj_old) < 1e-7) return false;

        // The pair moves along the equality constraint, so ai stays in the
        // box up to rounding; the clamp removes the rounding.
        const double ai = std::clamp(ai_old + yi * yj * (aj_old - aj), 0.0, c_box);
        sol.alphas[i] = ai;
        sol.alphas[j] = aj;

        const double b1 = sol.bias - ei - yi * (ai - ai_old) * gram.at(i, i) -
                          yj * (aj - aj_old) * gram.at(i, j);
        const double b2 = sol.bias - ej - yi * (ai - ai_old) * gram.at(i, j) -
                          yj * (aj - aj_old) * gram.at(j, j);
        if (ai > 0.0 && ai < c_box)
            sol.bias = b1;
        else if (aj > 0.0 && aj < c_box)
            sol.bias = b2;
        else
            sol.bias = (b1 + b2) / 2.0;

        sol.objective_trace.push_back(dual_objective(gram, sol));
        return true;
    };

    // Alphas closer than this to 0 or C count as being at the bound for
    // the KKT test; clipping can leave residues of order 1e-17 that would
    // otherwise flag phantom support vectors no step can repair.
    constexpr double bound_eps = 1e-9;

    for (int pass = 0; pass < params.max_passes; ++pass) {
        sol.passes_used = pass + 1;
        std::size_t violations = 0;
        std::size_t accepted = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double yi = labels[i];
            const double ei = score(i) - yi;
            const bool violates =
                (yi * ei < -tol && sol.alphas[i] < c_box - bound_eps) ||
                (yi * ei > tol && sol.alphas[i] > bound_eps);
            if (!violates || n < 2) continue;
            ++violations;

            // Second index: one seeded random candidate, then the rest in
            // cyclic order until a pair accepts the step. Rejected attempts
            // leave the state untouched, so ei stays valid throughout.
            const std::size_t start = (i + 1 + rng.next_below(n - 1)) % n;
            for (std::size_t offset = 0; offset < n; ++offset) {
                const std::size_t j = (start + offset) % n;
                if (j == i) continue;
                if (try_pair(i, j, ei)) {
                    ++accepted;
                    break;
                }
            }
        }
        // Convergence means a clean sweep: every point satisfied its KKT
        // condition within tolerance, not merely that no step was accepted.
        if (violations == 0) {
            sol.converged = true;
            break;
        }
        // Violations with no accepted step leave the state frozen; every
        // later sweep would repeat the same rejections, so give up now and
        // let the caller escalate.
        if (accepted == 0) break;
    }

    // Bias recomputed from the margin condition of non-bound support
    // vectors; more stable than the incrementally tracked value.
    double bias_sum = 0.0;
    std::size_t bias_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sol.alphas[i] > 1e-9 && sol.alphas[i] < c_box - 1e-9) {
            double f = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (sol.alphas[j] > 0.0) f += sol.alphas[j] * labels[j] * gram.at(j, i);
            bias_sum += labels[i] - f;
            ++bias_count;
        }
    }
    if (bias_count > 0) sol.bias = bias_sum / static_cast<double>(bias_count);

    for (std::size_t i = 0; i < n; ++i)
        if (sol.alphas[i] > 1e-9) sol.support_indices.push_back(i);
    return sol;
}

} // namespace

double dual_objective(const Matrix& gram, const DualSolution& model) {
    double linear = 0.0;
    double quad = 0.0;
    const std::size_t n = model.alphas.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (model.alphas[i] == 0.0) continue;
        linear += model.alphas[i];
        for (std::size_t j = 0; j < n; ++j)
            if (model.alphas[j] != 0.0)
                quad += model.alphas[i] * model.alphas[j] * model.labels[i] * model.labels[j] *
                        gram.at(i, j);
    }
    return linear - 0.5 * quad;
}

DualSolution solve_dual(const Matrix& gram, std::span<const int> labels,
                        const SvmParams& params) {
    validate_gram(gram, labels, params);

    // Single-class data: the equality constraint pins every alpha to zero,
    // so the decision reduces to a constant of the right sign.
    if (std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels[0]; })) {
        DualSolution sol;
        sol.alphas.assign(labels.size(), 0.0);
        sol.labels.assign(labels.begin(), labels.end());
        sol.regularization_c = params.regularization_c;
        sol.bias = labels[0];
        sol.converged = true;
        sol.passes_used = 0;
        return sol;
    }

    DualSolution sol = smo(gram, labels, params);
    if (sol.converged) return sol;

    // Shot-estimated grams can be slightly non-PSD, which stalls SMO.
    // Escalating diagonal jitter restores convexity.
    for (double jitter = 1e-8; jitter <= 1e-4 * 1.0000001; jitter *= 10.0) {
        Matrix stabilized = gram;
        for (std::size_t i = 0; i < stabilized.rows; ++i) stabilized.at(i, i) += jitter;
        sol = smo(stabilized, labels, params);
        sol.jitter = jitter;
        if (sol.converged) return sol;
    }
    return sol;
}

double decision_function(const DualSolution& model, std::span<const double> kernel_row) {
    if (kernel_row.size() != model.alphas.size())
        throw ShapeError("kernel row length " + std::to_string(kernel_row.size()) +
                         " does not match training size " + std::to_string(model.alphas.size()));
    double f = model.bias;
    for (std::size_t i = 0; i < model.alphas.size(); ++i)
        if (model.alphas[i] > 0.0) f += model.alphas[i] * model.labels[i] * kernel_row[i];
    return f;
}

OvrModel fit_ovr(const Matrix& gram, std::span<const int> labels, const SvmParams& params) {
    if (labels.size() != gram.rows)
        throw ShapeError("label count does not match gram size");
    int classes = 0;
    for (int y : labels) {
        if (y < 0) throw PreconditionError("class labels must be nonnegative");
        classes = std::max(classes, y + 1);
    }
    if (classes < 2) throw DataError("one-against-rest needs at least 2 classes");
    std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
    for (int y : labels) ++counts[static_cast<std::size_t>(y)];
    for (int c = 0; c < classes; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw DataError("class " + std::to_string(c) + " absent from training data");

    OvrModel model;
    model.classes = classes;
    model.models.resize(static_cast<std::size_t>(classes));
    parallel_for(static_cast<std::size_t>(classes), [&](std::size_t c) {
        std::vector<int> binary(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            binary[i] = labels[i] == static_cast<int>(c) ? 1 : -1;
        SvmParams per_class = params;
        per_class.seed = derive_seed(params.seed, 6, c, 0);
        model.models[c] = solve_dual(gram, binary, per_class);
    });
    model.converged = std::all_of(model.models.begin(), model.models.end(),
                                  [](const DualSolution& s) { return s.converged; });
    return model;
}

std::vector<int> predict_ovr(const OvrModel& model, const Matrix& kernel_rows) {
    if (model.models.empty()) throw PreconditionError("model is not fitted");
    std::vector<int> out(kernel_rows.rows, 0);
    for (std::size_t t = 0; t < kernel_rows.rows; ++t) {
        double best = -std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < model.models.size(); ++c) {
            double f = decision_function(model.models[c], kernel_rows.row(t));
            if (f > best) {
                best = f;
                best_c = static_cast<int>(c);
            }
        }
        out[t] = best_c;
    }
    return out;
}

Matrix rbf_kernel(const Matrix& a, const Matrix& b, double gamma) {
    if (a.cols != b.cols) throw ShapeError("rbf operands differ in dimension");
    if (!(gamma > 0.0)) throw PreconditionError("gamma must be positive");
    Matrix out(a.rows, b.rows);
    parallel_for(a.rows, [&](std::size_t i) {
        for (std::size_t j = 0; j < b.rows; ++j) {
            double d2 = 0.0;
            auto ra = a.row(i);
            auto rb = b.row(j);
            for (std::size_t d = 0; d < a.cols; ++d) {
                double diff = ra[d] - rb[d];
                d2 += diff * diff;
            }
            out.at(i, j) = std::exp(-gamma * d2);
        }
    });
    return out;
}

double default_rbf_gamma(const Matrix& points) {
    if (points.empty()) throw PreconditionError("empty point set");
    double mean = 0.0;
    for (double v : points.values) mean += v;
    mean /= static_cast<double>(points.values.size());
    double var = 0.0;
    for (double v : points.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(points.values.size());
    double p = static_cast<double>(points.cols);
    return var > 0.0 ? 1.0 / (p * var) : 1.0 / p;
}

} // namespace qkm
