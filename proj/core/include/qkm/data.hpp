#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkm/matrix.hpp"

namespace qkm {

/// An N x P feature table with optional dense integer labels in
/// [0, num_classes).
struct Dataset {
    Matrix features;
    std::optional<std::vector<int>> labels;
    std::vector<std::string> feature_names;
    std::string provenance;

    std::size_t size() const { return features.rows; }
    std::size_t dimension() const { return features.cols; }
    int num_classes() const;
};

/// Parameters for the isotropic Gaussian blob generator.
struct BlobSpec {
    std::size_t n_points = 100;
    std::size_t dims = 2;
    int k_clusters = 3;
    double stddev = 1.0;
    double mean_low = -10.0;
    double mean_high = 10.0;
    std::uint64_t seed = 0;
};

/// Gaussian blobs: k centroid means drawn uniformly from
/// [mean_low, mean_high] per dimension, then each point drawn around a
/// uniformly chosen centroid with the given standard deviation. Labels are
/// the generating centroid. Bit-identical output for a fixed seed; normal
/// variates come from the Marsaglia polar method over SplitMix64.
Dataset make_blobs(const BlobSpec& spec);

/// CSV ingestion: UTF-8, one header row, '.'-decimal doubles. When
/// label_column names a column, its cells are mapped to dense integers in
/// first-appearance order; all other columns must parse as doubles.
Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<std::string>& label_column = std::nullopt);

/// Writes features (f0..f{P-1} headers unless the dataset carries names)
/// plus a "label" column when labels are present. Doubles are emitted with
/// round-trip precision so rereading is exact.
void save_csv(const Dataset& data, const std::filesystem::path& path);

enum class ScaleTarget { none, unit_interval, angle_interval, standardize };

/// Per-feature affine map x' = scale * x + offset fitted on one dataset and
/// reusable on another. Interval targets clip transformed values into the
/// fitted range so unseen data cannot leave it.
struct FittedScaler {
    ScaleTarget target = ScaleTarget::none;
    std::vector<double> scale;
    std::vector<double> offset;
    double clip_low = 0.0;
    double clip_high = 0.0;

    Matrix apply(const Matrix& features) const;
    Matrix inverse(const Matrix& features) const;
};

FittedScaler fit_scaler(const Matrix& features, ScaleTarget target);

/// Fits on `data` and returns the transformed copy together with the
/// scaler. Constant features map to the midpoint of interval targets (0
/// under standardize).
std::pair<Dataset, FittedScaler> scale_features(const Dataset& data, ScaleTarget target);

/// Disjoint seeded train/test subsets of the requested sizes. Stratified
/// mode balances classes as evenly as floor division allows and requires
/// labels.
std::pair<Dataset, Dataset> subsample_split(const Dataset& data, std::size_t n_train,
                                            std::size_t n_test, bool stratified,
                                            std::uint64_t seed);

/// Locates a dataset shipped with the library ("wine" or "iris"). Looks at
/// QKM_DATA_DIR, then the installed share directory, then the source tree.
std::filesystem::path find_bundled_dataset(const std::string& name);

} // namespace qkm
