#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>

#include "qkm/distance.hpp"
#include "qkm/matrix.hpp"

namespace qkm {

using Complex = std::complex<double>;
/// Row-major 4x4 complex matrix; element (r, c) sits at index 4r + c.
using Mat4 = std::array<Complex, 16>;
using State4 = std::array<Complex, 4>;

/// Gram matrix of the feature-map kernel over one point set. In exact mode
/// the matrix is symmetric with unit diagonal and positive semidefinite up
/// to rounding; in shots mode entries are binomial frequencies around the
/// exact values.
struct KernelGram {
    Matrix matrix;
    EstimationMode mode = EstimationMode::exact;
    std::int64_t shots = 0;
};

/// Diagonal phase block U(x) for a two-feature point: basis state with bits
/// (b1, b0) picks up phase c1*(-1)^b0 + c2*(-1)^b1 + c12*(-1)^(b0+b1) with
/// c1 = x1, c2 = x2, c12 = (pi - x1)(pi - x2). Inputs are expected in
/// [0, 2pi); anything with dimension != 2 is a shape error.
Mat4 phase_unitary(std::span<const double> x);

/// Feature-map unitary M(x) = U(x) (HxH) U(x) (HxH), rightmost factor
/// applied first.
Mat4 feature_map_unitary(std::span<const double> x);

/// M(x)|00>, i.e. column 0 of the feature-map unitary. The kernel only
/// ever needs this column.
State4 feature_map_state(std::span<const double> x);

/// Kernel value |<00| M(x)^dag M(z) |00>|^2 in [0, 1]. Shots mode samples
/// the zero-string frequency of that probability. Points with more than
/// two features contribute their first two components.
double kernel_entry(std::span<const double> x, std::span<const double> z,
                    EstimationMode mode = EstimationMode::exact,
                    std::int64_t shots = kDefaultShots, std::uint64_t seed = 0);

/// Full Gram matrix over the rows of points. Only the upper triangle is
/// evaluated (in parallel, per-entry derived seeds); the lower is mirrored,
/// so shot-mode output is exactly symmetric too.
KernelGram kernel_gram(const Matrix& points, EstimationMode mode = EstimationMode::exact,
                       std::int64_t shots = kDefaultShots, std::uint64_t seed = 0);

/// Rectangular kernel block K(a_i, b_j) of shape a.rows x b.rows. Used for
/// scoring test points against a training set; seeds are derived per entry
/// on a stream disjoint from kernel_gram's.
Matrix kernel_cross(const Matrix& a, const Matrix& b,
                    EstimationMode mode = EstimationMode::exact,
                    std::int64_t shots = kDefaultShots, std::uint64_t seed = 0);

/// CSV round-trip: header line "N,mode,shots" then N rows of N entries.
void save_gram(const KernelGram& gram, const std::filesystem::path& path);
KernelGram load_gram(const std::filesystem::path& path);

} // namespace qkm
