#include "qkm/qkernel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "qkm/errors.hpp"
#include "qkm/parallel.hpp"
#include "qkm/rng.hpp"

namespace qkm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Mat4 matmul(const Mat4& a, const Mat4& b) {
    Mat4 out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            Complex acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += a[4 * r + k] * b[4 * k + c];
            out[4 * r + c] = acc;
        }
    return out;
}

// H tensor H; both qubits into equal superposition.
const Mat4& hadamard_pair() {
    static const Mat4 w = [] {
        Mat4 m{};
        const double h[2][2] = {{1.0, 1.0}, {1.0, -1.0}};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                int rb1 = r >> 1, rb0 = r & 1;
                int cb1 = c >> 1, cb0 = c & 1;
                m[4 * r + c] = 0.5 * h[rb1][cb1] * h[rb0][cb0];
            }
        return m;
    }();
    return w;
}

void check_two_features(std::span<const double> x) {
    if (x.size() != 2)
        throw ShapeError("feature map needs exactly 2 features, got " +
                         std::to_string(x.size()));
}

std::span<const double> first_two(std::span<const double> x) {
    if (x.size() < 2)
        throw ShapeError("kernel inputs need at least 2 features, got " +
                         std::to_string(x.size()));
    return x.subspan(0, 2);
}

double exact_entry(std::span<const double> x, std::span<const double> z) {
    State4 sx = feature_map_state(first_two(x));
    State4 sz = feature_map_state(first_two(z));
    Complex inner = 0.0;
    for (int i = 0; i < 4; ++i) inner += std::conj(sx[i]) * sz[i];
    // norm() of a unit-modulus product can land a couple of ulps above 1;
    // the true value is a probability.
    return std::clamp(std::norm(inner), 0.0, 1.0);
}

} // namespace

Mat4 phase_unitary(std::span<const double> x) {
    check_two_features(x);
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
        throw DegenerateInputError("feature map input is not finite");
    const double c1 = x[0];
    const double c2 = x[1];
    const double c12 = (kPi - x[0]) * (kPi - x[1]);
    Mat4 u{};
    for (int d = 0; d < 4; ++d) {
        int b0 = d & 1;
        int b1 = (d >> 1) & 1;
        double theta = c1 * (b0 ? -1.0 : 1.0) + c2 * (b1 ? -1.0 : 1.0) +
                       c12 * ((b0 ^ b1) ? -1.0 : 1.0);
        u[4 * d + d] = std::polar(1.0, theta);
    }
    return u;
}

Mat4 feature_map_unitary(std::span<const double> x) {
    Mat4 u = phase_unitary(x);
    const Mat4& w = hadamard_pair();
    return matmul(matmul(u, w), matmul(u, w));
}

State4 feature_map_state(std::span<const double> x) {
    Mat4 m = feature_map_unitary(x);
    return {m[0], m[4], m[8], m[12]};
}

double kernel_entry(std::span<const double> x, std::span<const double> z,
                    EstimationMode mode, std::int64_t shots, std::uint64_t seed) {
    double exact = exact_entry(x, z);
    if (mode == EstimationMode::exact) return exact;
    if (shots < 1) throw PreconditionError("shots must be >= 1");
    SplitMix64 rng(seed);
    auto zeros = binomial_draw(rng, shots, exact);
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

KernelGram kernel_gram(const Matrix& points, EstimationMode mode, std::int64_t shots,
                       std::uint64_t seed) {
    if (points.rows == 0) throw PreconditionError("empty point set");
    KernelGram gram;
    gram.matrix = Matrix(points.rows, points.rows);
    gram.mode = mode;
    gram.shots = mode == EstimationMode::shots ? shots : 0;

    parallel_for(points.rows, [&](std::size_t i) {
        for (std::size_t j = i; j < points.rows; ++j) {
            double v = kernel_entry(points.row(i), points.row(j), mode, shots,
                                    derive_seed(seed, i, j, 0));
            gram.matrix.at(i, j) = v;
            gram.matrix.at(j, i) = v;
        }
    });
    return gram;
}

Matrix kernel_cross(const Matrix& a, const Matrix& b, EstimationMode mode, std::int64_t shots,
                    std::uint64_t seed) {
    Matrix out(a.rows, b.rows);
    parallel_for(a.rows, [&](std::size_t i) {
        for (std::size_t j = 0; j < b.rows; ++j)
            out.at(i, j) =
                kernel_entry(a.row(i), b.row(j), mode, shots, derive_seed(seed, i, j, 1));
    });
    return out;
}

void save_gram(const KernelGram& gram, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << gram.matrix.rows << ','
        << (gram.mode == EstimationMode::exact ? "exact" : "shots") << ',' << gram.shots
        << '\n';
    char buf[32];
    for (std::size_t i = 0; i < gram.matrix.rows; ++i) {
        for (std::size_t j = 0; j < gram.matrix.cols; ++j) {
            if (j) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", gram.matrix.at(i, j));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw DataError("write to '" + path.string() + "' failed");
}

KernelGram load_gram(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty gram file", 1);

    std::istringstream header(line);
    std::string n_text, mode_text, shots_text;
    if (!std::getline(header, n_text, ',') || !std::getline(header, mode_text, ',') ||
        !std::getline(header, shots_text))
        throw ParseError("gram header must be 'N,mode,shots'", 1);

    KernelGram gram;
    std::size_t n = 0;
    auto [p1, e1] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
    if (e1 != std::errc() || n == 0) throw ParseError("bad gram size '" + n_text + "'", 1);
    if (mode_text == "exact")
        gram.mode = EstimationMode::exact;
    else if (mode_text == "shots")
        gram.mode = EstimationMode::shots;
    else
        throw ParseError("bad gram mode '" + mode_text + "'", 1);
    auto [p2, e2] =
        std::from_chars(shots_text.data(), shots_text.data() + shots_text.size(), gram.shots);
    if (e2 != std::errc()) throw ParseError("bad shot count '" + shots_text + "'", 1);

    gram.matrix = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw ParseError("expected " + std::to_string(n) + " rows", i + 1);
        std::istringstream row(line);
        std::string cell;
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::getline(row, cell, ','))
                throw ParseError("row has fewer than " + std::to_string(n) + " entries", i + 2);
            double v = 0.0;
            auto [p, e] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (e != std::errc()) throw ParseError("bad entry '" + cell + "'", i + 2);
            gram.matrix.at(i, j) = v;
        }
    }
    return gram;
}

} // namespace qkm
