#include "qkm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "qkm/errors.hpp"
#include "qkm/rng.hpp"

namespace qkm {

namespace {

// Round-trip decimal formatting; 17 significant digits suffice for IEEE754
// binary64.
std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view text, std::size_t line) {
    // Trim ASCII whitespace; from_chars rejects leading spaces.
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError("cell '" + std::string(text) + "' is not a number", line);
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

int Dataset::num_classes() const {
    if (!labels || labels->empty()) return 0;
    int max_label = *std::max_element(labels->begin(), labels->end());
    return max_label + 1;
}

Dataset make_blobs(const BlobSpec& spec) {
    if (spec.n_points == 0 || spec.dims == 0 || spec.k_clusters < 1)
        throw PreconditionError("blob spec requires n_points >= 1, dims >= 1, k >= 1");
    if (!(spec.stddev > 0.0) || !std::isfinite(spec.stddev))
        throw PreconditionError("blob stddev must be finite and positive");
    if (!(spec.mean_low <= spec.mean_high))
        throw PreconditionError("blob mean range is empty");

    SplitMix64 mean_rng(derive_seed(spec.seed, 0, 0, 0));
    Matrix centers(static_cast<std::size_t>(spec.k_clusters), spec.dims);
    for (std::size_t c = 0; c < centers.rows; ++c)
        for (std::size_t d = 0; d < spec.dims; ++d)
            centers.at(c, d) =
                spec.mean_low + (spec.mean_high - spec.mean_low) * mean_rng.next_double();

    SplitMix64 point_rng(derive_seed(spec.seed, 1, 0, 0));
    Dataset out;
    out.features = Matrix(spec.n_points, spec.dims);
    out.labels = std::vector<int>(spec.n_points, 0);
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        auto c = point_rng.next_below(static_cast<std::uint64_t>(spec.k_clusters));
        (*out.labels)[i] = static_cast<int>(c);
        for (std::size_t d = 0; d < spec.dims; ++d)
            out.features.at(i, d) =
                centers.at(c, d) + spec.stddev * point_rng.next_normal();
    }
    out.feature_names.reserve(spec.dims);
    for (std::size_t d = 0; d < spec.dims; ++d)
        out.feature_names.push_back("f" + std::to_string(d));
    out.provenance = "blobs";
    return out;
}

Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<std::string>& label_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);
    if (header.empty() || header[0].empty())
        throw ParseError("missing header row", 1);

    std::size_t label_idx = header.size();
    if (label_column) {
        auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end())
            throw DataError("label column '" + *label_column + "' not found in '" +
                            path.string() + "'");
        label_idx = static_cast<std::size_t>(it - header.begin());
    }

    Dataset out;
    std::size_t feature_count = header.size() - (label_column ? 1 : 0);
    if (feature_count == 0) throw ParseError("no feature columns", 1);
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_idx) out.feature_names.push_back(header[c]);

    std::vector<double> values;
    std::vector<int> labels;
    std::unordered_map<std::string, int> label_codes;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " cells, got " +
                                 std::to_string(cells.size()),
                             line_no);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_idx) {
                std::string key = trim(cells[c]);
                auto [it, inserted] =
                    label_codes.emplace(key, static_cast<int>(label_codes.size()));
                labels.push_back(it->second);
            } else {
                values.push_back(parse_double(cells[c], line_no));
            }
        }
        ++rows;
    }
    if (rows == 0) throw ParseError("no data rows", line_no);

    out.features = Matrix(rows, feature_count);
    out.features.values = std::move(values);
    if (label_column) out.labels = std::move(labels);
    out.provenance = path.filename().string();
    return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");

    for (std::size_t c = 0; c < data.dimension(); ++c) {
        if (c) out << ',';
        out << (c < data.feature_names.size() ? data.feature_names[c]
                                              : "f" + std::to_string(c));
    }
    if (data.labels) out << ",label";
    out << '\n';

    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t c = 0; c < data.dimension(); ++c) {
            if (c) out << ',';
            out << format_double(data.features.at(i, c));
        }
        if (data.labels) out << ',' << (*data.labels)[i];
        out << '\n';
    }
    if (!out) throw DataError("write to '" + path.string() + "' failed");
}

Matrix FittedScaler::apply(const Matrix& features) const {
    if (target == ScaleTarget::none) return features;
    if (features.cols != scale.size())
        throw ShapeError("scaler fitted on " + std::to_string(scale.size()) +
                         " features, applied to " + std::to_string(features.cols));
    Matrix out = features;
    bool clip = target == ScaleTarget::unit_interval || target == ScaleTarget::angle_interval;
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t c = 0; c < out.cols; ++c) {
            double v = features.at(i, c) * scale[c] + offset[c];
            if (clip) v = std::clamp(v, clip_low, clip_high);
            out.at(i, c) = v;
        }
    return out;
}

Matrix FittedScaler::inverse(const Matrix& features) const {
    if (target == ScaleTarget::none) return features;
    if (features.cols != scale.size())
        throw ShapeError("scaler fitted on " + std::to_string(scale.size()) +
                         " features, applied to " + std::to_string(features.cols));
    Matrix out = features;
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t c = 0; c < out.cols; ++c)
            out.at(i, c) = (features.at(i, c) - offset[c]) / scale[c];
    return out;
}

FittedScaler fit_scaler(const Matrix& features, ScaleTarget target) {
    FittedScaler s;
    s.target = target;
    if (target == ScaleTarget::none) return s;
    if (features.rows == 0) throw PreconditionError("cannot fit scaler on empty matrix");

    s.scale.assign(features.cols, 1.0);
    s.offset.assign(features.cols, 0.0);

    if (target == ScaleTarget::standardize) {
        for (std::size_t c = 0; c < features.cols; ++c) {
            double mean = 0.0;
            for (std::size_t i = 0; i < features.rows; ++i) mean += features.at(i, c);
            mean /= static_cast<double>(features.rows);
            double var = 0.0;
            for (std::size_t i = 0; i < features.rows; ++i) {
                double d = features.at(i, c) - mean;
                var += d * d;
            }
            var /= static_cast<double>(features.rows);
            double sd = std::sqrt(var);
            s.scale[c] = sd > 0.0 ? 1.0 / sd : 1.0;
            s.offset[c] = -mean * s.scale[c];
        }
        return s;
    }

    // angle_interval is half-open [0, 2pi): the fitted max lands just under
    // 2pi so phase coefficients never wrap.
    double lo = 0.0;
    double hi = target == ScaleTarget::unit_interval
                    ? 1.0
                    : 2.0 * std::acos(-1.0) * (1.0 - std::numeric_limits<double>::epsilon());
    s.clip_low = lo;
    s.clip_high = hi;
    for (std::size_t c = 0; c < features.cols; ++c) {
        double mn = features.at(0, c);
        double mx = mn;
        for (std::size_t i = 1; i < features.rows; ++i) {
            mn = std::min(mn, features.at(i, c));
            mx = std::max(mx, features.at(i, c));
        }
        if (mx > mn) {
            s.scale[c] = (hi - lo) / (mx - mn);
            s.offset[c] = lo - mn * s.scale[c];
        } else {
            // Constant feature: map everything to the interval midpoint.
            s.scale[c] = 1.0;
            s.offset[c] = (lo + hi) / 2.0 - mn;
        }
    }
    return s;
}

std::pair<Dataset, FittedScaler> scale_features(const Dataset& data, ScaleTarget target) {
    FittedScaler s = fit_scaler(data.features, target);
    Dataset out = data;
    out.features = s.apply(data.features);
    return {std::move(out), std::move(s)};
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.features = data.features.select_rows(rows);
    if (data.labels) {
        out.labels = std::vector<int>();
        out.labels->reserve(rows.size());
        for (auto r : rows) out.labels->push_back((*data.labels)[r]);
    }
    out.feature_names = data.feature_names;
    out.provenance = data.provenance;
    return out;
}

} // namespace

std::pair<Dataset, Dataset> subsample_split(const Dataset& data, std::size_t n_train,
                                            std::size_t n_test, bool stratified,
                                            std::uint64_t seed) {
    if (n_train + n_test > data.size())
        throw PreconditionError("split sizes exceed dataset size");
    if (stratified && !data.labels)
        throw PreconditionError("stratified split requires labels");

    SplitMix64 rng(derive_seed(seed, 2, 0, 0));
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with the unbiased bounded draw.
    for (std::size_t i = order.size(); i > 1; --i) {
        auto j = rng.next_below(i);
        std::swap(order[i - 1], order[j]);
    }

    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    if (!stratified) {
        train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                         order.begin() + static_cast<std::ptrdiff_t>(n_train + n_test));
    } else {
        int classes = data.num_classes();
        if (classes < 1) throw PreconditionError("stratified split requires labels");
        std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
        for (auto r : order) by_class[static_cast<std::size_t>((*data.labels)[r])].push_back(r);

        // Even per-class quotas first, then round-robin the remainder over
        // classes in label order so the draw is deterministic.
        auto allot = [&](std::size_t want, std::vector<std::size_t>& dst,
                         std::vector<std::size_t>& cursor) {
            std::size_t base = want / static_cast<std::size_t>(classes);
            std::size_t extra = want % static_cast<std::size_t>(classes);
            for (std::size_t c = 0; c < by_class.size(); ++c) {
                std::size_t quota = base + (c < extra ? 1 : 0);
                for (std::size_t t = 0; t < quota; ++t) {
                    if (cursor[c] >= by_class[c].size())
                        throw DataError("class " + std::to_string(c) +
                                        " has too few points for a stratified split");
                    dst.push_back(by_class[c][cursor[c]++]);
                }
            }
        };
        std::vector<std::size_t> cursor(by_class.size(), 0);
        allot(n_train, train_rows, cursor);
        allot(n_test, test_rows, cursor);
    }

    // Row order within each part follows the original dataset so output is
    // stable regardless of shuffle internals.
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {take_rows(data, train_rows), take_rows(data, test_rows)};
}

std::filesystem::path find_bundled_dataset(const std::string& name) {
    if (name != "wine" && name != "iris")
        throw DataError("unknown bundled dataset '" + name + "'");
    std::string file = name + ".csv";
    std::vector<std::filesystem::path> roots;
    if (const char* env = std::getenv("QKM_DATA_DIR")) roots.emplace_back(env);
#ifdef QKM_INSTALL_DATA_DIR
    roots.emplace_back(QKM_INSTALL_DATA_DIR);
#endif
#ifdef QKM_SOURCE_DATA_DIR
    roots.emplace_back(QKM_SOURCE_DATA_DIR);
#endif
    for (const auto& root : roots) {
        auto candidate = root / file;
        std::error_code ec;
        if (std::filesystem::exists(candidate, ec)) return candidate;
    }
    throw DataError("bundled dataset '" + name + "' not found; set QKM_DATA_DIR");
}

} // namespace qkm
