#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "qkm/errors.hpp"

namespace qkm {

/// Dense row-major matrix of doubles. The only linear-algebra container the
/// library needs: feature tables, Gram matrices, cross-kernel blocks.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), values(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }
    std::span<double> row(std::size_t r) {
        return {values.data() + r * cols, cols};
    }

    bool empty() const { return rows == 0 || cols == 0; }

    /// Copy of the listed columns, in the given order.
    Matrix select_columns(std::span<const int> indices) const {
        Matrix out(rows, indices.size());
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t k = 0; k < indices.size(); ++k) {
                const int c = indices[k];
                if (c < 0 || static_cast<std::size_t>(c) >= cols) {
                    throw ShapeError("select_columns: column index out of range");
                }
                out.at(r, k) = at(r, static_cast<std::size_t>(c));
            }
        }
        return out;
    }

    /// Copy of the listed rows, in the given order.
    Matrix select_rows(std::span<const std::size_t> indices) const {
        Matrix out(indices.size(), cols);
        for (std::size_t k = 0; k < indices.size(); ++k) {
            if (indices[k] >= rows) {
                throw ShapeError("select_rows: row index out of range");
            }
            auto src = row(indices[k]);
            std::copy(src.begin(), src.end(), out.row(k).begin());
        }
        return out;
    }
};

} // namespace qkm
