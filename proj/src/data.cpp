#include "imb/data.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace imb {

// ---------------------------------------------------------------------------------------------------------------
// LabeledDataset

LabeledDataset::LabeledDataset(Matrix features, std::vector<int> labels, std::array<std::string, 2> class_names,
                               int minority_label, std::vector<std::string> feature_names) :
    features_{ std::move(features) },
    labels_{ std::move(labels) },
    class_names_{ std::move(class_names) },
    minority_label_{ minority_label },
    feature_names_{ std::move(feature_names) } {
    if (features_.rows() < 2) {
        throw invalid_argument{ fmt::format("a dataset needs at least 2 samples, got {}", features_.rows()) };
    }
    if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
        throw invalid_argument{ fmt::format("{} feature rows but {} labels", features_.rows(), labels_.size()) };
    }
    if (minority_label_ != 0 && minority_label_ != 1) {
        throw invalid_argument{ "minority label must be 0 or 1" };
    }
    if (!feature_names_.empty() && feature_names_.size() != n_features()) {
        throw invalid_argument{ fmt::format("{} feature names for {} features", feature_names_.size(), n_features()) };
    }
    if (!features_.allFinite()) {
        throw invalid_argument{ "features must be finite" };
    }
    if (std::any_of(labels_.begin(), labels_.end(), [](int l) { return l != 0 && l != 1; })) {
        throw invalid_argument{ "labels must be class indices 0 or 1" };
    }
    if (count(0) == 0 || count(1) == 0) {
        throw unsupported_dataset_error{ "expected binary labels, but only one class is present" };
    }
    if (minority_count() > majority_count()) {
        throw invalid_argument{ fmt::format("minority class '{}' has more samples ({}) than the majority ({})",
                                            class_names_[static_cast<std::size_t>(minority_label_)], minority_count(),
                                            majority_count()) };
    }
}

LabeledDataset LabeledDataset::from_tags(Matrix features, const std::vector<std::string> &tags,
                                         const std::optional<std::string> &positive_label,
                                         std::vector<std::string> feature_names) {
    std::vector<std::string> classes;
    std::vector<int> labels;
    labels.reserve(tags.size());
    for (const std::string &tag : tags) {
        auto it = std::find(classes.begin(), classes.end(), tag);
        if (it == classes.end()) {
            classes.push_back(tag);
            it = classes.end() - 1;
        }
        labels.push_back(static_cast<int>(it - classes.begin()));
    }
    if (classes.size() != 2) {
        throw unsupported_dataset_error{ fmt::format("expected binary labels, found {} distinct classes", classes.size()) };
    }
    const auto n0 = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 0));
    const std::size_t n1 = labels.size() - n0;
    int minority = n0 < n1 ? 0 : 1;
    if (n0 == n1) {
        const std::string preferred = positive_label.value_or("positive");
        minority = classes[0] == preferred ? 0 : 1;
    }
    return LabeledDataset{ std::move(features), std::move(labels), { classes[0], classes[1] }, minority, std::move(feature_names) };
}

std::size_t LabeledDataset::count(int label) const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

double LabeledDataset::imbalance_ratio() const noexcept {
    return static_cast<double>(majority_count()) / static_cast<double>(minority_count());
}

std::vector<std::size_t> LabeledDataset::indices_of(int label) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) {
            out.push_back(i);
        }
    }
    return out;
}

Matrix LabeledDataset::rows_of(int label) const {
    const std::vector<std::size_t> idx = indices_of(label);
    Matrix out(static_cast<Eigen::Index>(idx.size()), features_.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = features_.row(static_cast<Eigen::Index>(idx[i]));
    }
    return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
    Matrix x(static_cast<Eigen::Index>(rows.size()), features_.cols());
    std::vector<int> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= n_samples()) {
            throw invalid_argument{ fmt::format("row index {} out of range for {} samples", rows[i], n_samples()) };
        }
        x.row(static_cast<Eigen::Index>(i)) = features_.row(static_cast<Eigen::Index>(rows[i]));
        y[i] = labels_[rows[i]];
    }
    // the minority is the rarer class of the subset; an exact tie keeps the parent's designation
    const auto n_min = static_cast<std::size_t>(std::count(y.begin(), y.end(), minority_label_));
    const int minority = 2 * n_min > rows.size() ? majority_label() : minority_label_;
    return LabeledDataset{ std::move(x), std::move(y), class_names_, minority, feature_names_ };
}

LabeledDataset LabeledDataset::with_features(Matrix features) const {
    if (features.rows() != features_.rows() || features.cols() != features_.cols()) {
        throw invalid_argument{ "replacement feature matrix must keep the dataset's shape" };
    }
    return LabeledDataset{ std::move(features), labels_, class_names_, minority_label_, feature_names_ };
}

LabeledDataset LabeledDataset::append_minority(const Matrix &rows) const {
    if (rows.rows() == 0) {
        return *this;
    }
    if (rows.cols() != features_.cols()) {
        throw invalid_argument{ fmt::format("appended rows have {} features, dataset has {}", rows.cols(), features_.cols()) };
    }
    Matrix x(features_.rows() + rows.rows(), features_.cols());
    x.topRows(features_.rows()) = features_;
    x.bottomRows(rows.rows()) = rows;
    std::vector<int> y = labels_;
    y.insert(y.end(), static_cast<std::size_t>(rows.rows()), minority_label_);
    // appending can only make the minority class catch up with the majority
    const std::size_t n_min = minority_count() + static_cast<std::size_t>(rows.rows());
    const int minority = n_min > majority_count() ? majority_label() : minority_label_;
    return LabeledDataset{ std::move(x), std::move(y), class_names_, minority, feature_names_ };
}

bool operator==(const LabeledDataset &a, const LabeledDataset &b) {
    return a.features_.rows() == b.features_.rows() && a.features_.cols() == b.features_.cols() &&
           a.features_ == b.features_ && a.labels_ == b.labels_ && a.class_names_ == b.class_names_ &&
           a.minority_label_ == b.minority_label_;
}

// ---------------------------------------------------------------------------------------------------------------
// text helpers

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
        s = s.substr(1, s.size() - 2);
    }
    return std::string{ s };
}

std::vector<std::string> split_fields(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::string current;
    bool quoted = false;
    for (const char c : line) {
        if (c == '"') {
            quoted = !quoted;
            current.push_back(c);
        } else if (c == sep && !quoted) {
            out.push_back(unquote(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    out.push_back(unquote(current));
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return std::nullopt;
    }
    double value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::string lower(std::string_view s) {
    std::string out{ s };
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::ifstream open_input(const std::filesystem::path &path) {
    std::ifstream in{ path };
    if (!in) {
        throw error{ fmt::format("cannot open '{}' for reading", path.string()) };
    }
    return in;
}

Matrix to_matrix(const std::vector<std::vector<double>> &rows, std::size_t cols) {
    Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return x;
}

struct KeelAttribute {
    std::string name;
    bool numeric{ true };
};

// `@attribute name type...`; name may be quoted
KeelAttribute parse_keel_attribute(std::string_view rest, const std::string &path, std::size_t line_no) {
    rest = trim(rest);
    std::string name;
    if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
        const char q = rest.front();
        const std::size_t end = rest.find(q, 1);
        if (end == std::string_view::npos) {
            throw parse_error{ path, line_no, "unterminated quoted attribute name" };
        }
        name = std::string{ rest.substr(1, end - 1) };
        rest = trim(rest.substr(end + 1));
    } else {
        std::size_t end = 0;
        while (end < rest.size() && !std::isspace(static_cast<unsigned char>(rest[end])) && rest[end] != '{') {
            ++end;
        }
        name = std::string{ rest.substr(0, end) };
        rest = trim(rest.substr(end));
    }
    if (name.empty() || rest.empty()) {
        throw parse_error{ path, line_no, "@attribute needs a name and a type" };
    }
    if (rest.front() == '{') {
        if (rest.find('}') == std::string_view::npos) {
            throw parse_error{ path, line_no, "unterminated nominal value list" };
        }
        return { name, false };
    }
    std::size_t end = 0;
    while (end < rest.size() && std::isalpha(static_cast<unsigned char>(rest[end]))) {
        ++end;
    }
    const std::string type = lower(rest.substr(0, end));
    if (type == "real" || type == "integer" || type == "numeric") {
        return { name, true };
    }
    throw parse_error{ path, line_no, fmt::format("unknown attribute type '{}'", rest) };
}

std::vector<std::string> parse_name_list(std::string_view rest) {
    std::vector<std::string> names;
    for (std::string &n : split_fields(rest)) {
        if (!n.empty()) {
            names.push_back(std::move(n));
        }
    }
    return names;
}

}  // namespace

// ---------------------------------------------------------------------------------------------------------------
// Keel

LabeledDataset load_keel(const std::filesystem::path &path, const std::optional<std::string> &positive_label) {
    std::ifstream in = open_input(path);
    const std::string file = path.string();

    std::vector<KeelAttribute> attributes;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    bool in_data = false;
    bool seen_relation = false;

    std::vector<std::size_t> input_cols;
    std::size_t class_col = 0;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> tags;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '%') {
            continue;
        }
        if (!in_data) {
            if (line.front() != '@') {
                throw parse_error{ file, line_no, "expected a header line starting with '@' before @data" };
            }
            const std::size_t space = line.find_first_of(" \t");
            const std::string directive = lower(line.substr(0, space));
            const std::string_view rest = space == std::string_view::npos ? std::string_view{} : line.substr(space);
            if (directive == "@relation") {
                seen_relation = true;
            } else if (directive == "@attribute") {
                attributes.push_back(parse_keel_attribute(rest, file, line_no));
            } else if (directive == "@inputs" || directive == "@input") {
                inputs = parse_name_list(rest);
            } else if (directive == "@outputs" || directive == "@output") {
                outputs = parse_name_list(rest);
            } else if (directive == "@data") {
                if (!seen_relation || attributes.size() < 2) {
                    throw parse_error{ file, line_no, "@data before @relation and at least two @attribute lines" };
                }
                if (outputs.size() > 1) {
                    throw parse_error{ file, line_no, "only a single output attribute is supported" };
                }
                const std::string class_name = outputs.empty() ? attributes.back().name : outputs.front();
                const auto find_attr = [&](const std::string &name) -> std::size_t {
                    for (std::size_t i = 0; i < attributes.size(); ++i) {
                        if (attributes[i].name == name) {
                            return i;
                        }
                    }
                    throw parse_error{ file, line_no, fmt::format("unknown attribute '{}'", name) };
                };
                class_col = find_attr(class_name);
                for (const std::string &name : inputs) {
                    find_attr(name);
                }
                for (std::size_t i = 0; i < attributes.size(); ++i) {
                    if (i == class_col) {
                        continue;
                    }
                    if (!inputs.empty() && std::find(inputs.begin(), inputs.end(), attributes[i].name) == inputs.end()) {
                        continue;
                    }
                    if (!attributes[i].numeric) {
                        throw unsupported_attribute_error{ fmt::format("{}: input attribute '{}' is nominal; only numeric inputs are supported",
                                                                       file, attributes[i].name) };
                    }
                    input_cols.push_back(i);
                }
                in_data = true;
            } else {
                throw parse_error{ file, line_no, fmt::format("unknown header directive '{}'", directive) };
            }
            continue;
        }

        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != attributes.size()) {
            throw parse_error{ file, line_no, fmt::format("expected {} fields, found {}", attributes.size(), fields.size()) };
        }
        std::vector<double> row;
        row.reserve(input_cols.size());
        for (const std::size_t c : input_cols) {
            if (fields[c] == "?") {
                throw parse_error{ file, line_no, "missing values are not supported" };
            }
            const std::optional<double> v = parse_number(fields[c]);
            if (!v) {
                throw parse_error{ file, line_no, fmt::format("attribute '{}': '{}' is not a number", attributes[c].name, fields[c]) };
            }
            row.push_back(*v);
        }
        if (fields[class_col].empty() || fields[class_col] == "?") {
            throw parse_error{ file, line_no, "missing class value" };
        }
        rows.push_back(std::move(row));
        tags.push_back(fields[class_col]);
    }
    if (!in_data) {
        throw parse_error{ file, line_no, "no @data section" };
    }

    std::vector<std::string> names;
    for (const std::size_t c : input_cols) {
        names.push_back(attributes[c].name);
    }
    try {
        return LabeledDataset::from_tags(to_matrix(rows, input_cols.size()), tags, positive_label, std::move(names));
    } catch (const unsupported_dataset_error &e) {
        throw unsupported_dataset_error{ fmt::format("{}: {}", file, e.what()) };
    }
}

// ---------------------------------------------------------------------------------------------------------------
// CSV

LabeledDataset load_csv(const std::filesystem::path &path, const CsvOptions &options) {
    std::ifstream in = open_input(path);
    const std::string file = path.string();

    std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        if (trim(raw).empty()) {
            continue;
        }
        lines.emplace_back(line_no, split_fields(raw));
    }
    if (lines.empty()) {
        throw parse_error{ file, line_no, "empty CSV file" };
    }
    const std::size_t width = lines.front().second.size();
    if (width < 2) {
        throw parse_error{ file, lines.front().first, "a CSV needs at least one feature column and a label column" };
    }

    const bool by_name = std::holds_alternative<std::string>(options.label_column);
    bool header = options.has_header.value_or(by_name);
    std::size_t label_col = 0;
    if (!by_name) {
        label_col = std::get<std::size_t>(options.label_column);
        if (label_col >= width) {
            throw invalid_argument{ fmt::format("{}: label column {} is out of range for {} columns", file, label_col, width) };
        }
        if (!options.has_header) {
            const auto &first = lines.front().second;
            for (std::size_t j = 0; j < first.size(); ++j) {
                if (j != label_col && !parse_number(first[j])) {
                    header = true;
                }
            }
        }
    } else {
        if (!header) {
            throw invalid_argument{ fmt::format("{}: a named label column requires a header row", file) };
        }
        const std::string &wanted = std::get<std::string>(options.label_column);
        const auto &names = lines.front().second;
        const auto it = std::find(names.begin(), names.end(), wanted);
        if (it == names.end()) {
            throw invalid_argument{ fmt::format("{}: missing column '{}'", file, wanted) };
        }
        label_col = static_cast<std::size_t>(it - names.begin());
    }

    std::vector<std::string> feature_names;
    if (header) {
        for (std::size_t j = 0; j < width; ++j) {
            if (j != label_col) {
                feature_names.push_back(lines.front().second[j]);
            }
        }
    }

    std::vector<std::vector<double>> rows;
    std::vector<std::string> tags;
    for (std::size_t i = header ? 1 : 0; i < lines.size(); ++i) {
        const auto &[no, fields] = lines[i];
        if (fields.size() != width) {
            throw parse_error{ file, no, fmt::format("expected {} fields, found {}", width, fields.size()) };
        }
        std::vector<double> row;
        row.reserve(width - 1);
        for (std::size_t j = 0; j < width; ++j) {
            if (j == label_col) {
                continue;
            }
            const std::optional<double> v = parse_number(fields[j]);
            if (!v) {
                throw parse_error{ file, no, fmt::format("column {}: '{}' is not a number", j, fields[j]) };
            }
            row.push_back(*v);
        }
        if (fields[label_col].empty()) {
            throw parse_error{ file, no, "missing label" };
        }
        rows.push_back(std::move(row));
        tags.push_back(fields[label_col]);
    }
    try {
        return LabeledDataset::from_tags(to_matrix(rows, width - 1), tags, options.positive_label, std::move(feature_names));
    } catch (const unsupported_dataset_error &e) {
        throw unsupported_dataset_error{ fmt::format("{}: {}", file, e.what()) };
    }
}

void save_csv(const LabeledDataset &data, const std::filesystem::path &path) {
    std::ofstream out{ path };
    if (!out) {
        throw error{ fmt::format("cannot open '{}' for writing", path.string()) };
    }
    std::vector<std::string> names = data.feature_names();
    if (names.empty()) {
        for (std::size_t j = 0; j < data.n_features(); ++j) {
            names.push_back(fmt::format("x{}", j));
        }
    }
    out << fmt::format("{},class\n", fmt::join(names, ","));
    const Matrix &x = data.features();
    std::string line;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        line.clear();
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            fmt::format_to(std::back_inserter(line), "{},", x(i, j));
        }
        line += data.label_name(static_cast<std::size_t>(i));
        line += '\n';
        out << line;
    }
    if (!out) {
        throw error{ fmt::format("failed writing '{}'", path.string()) };
    }
}

// ---------------------------------------------------------------------------------------------------------------
// standardization

Standardizer fit_standardizer(const Matrix &train) {
    if (train.rows() == 0) {
        throw invalid_argument{ "cannot fit a standardizer on an empty matrix" };
    }
    Standardizer s;
    s.mean = train.colwise().mean().transpose();
    s.scale.resize(train.cols());
    const auto n = static_cast<double>(train.rows());
    for (Eigen::Index j = 0; j < train.cols(); ++j) {
        const double var = (train.col(j).array() - s.mean(j)).square().sum() / n;
        const double sd = std::sqrt(var);
        // constant columns (up to rounding in the mean) are left unscaled
        s.scale(j) = sd <= 1e-12 * std::max(1.0, std::abs(s.mean(j))) ? 1.0 : sd;
    }
    return s;
}

Standardizer fit_standardizer(const LabeledDataset &train) { return fit_standardizer(train.features()); }

Matrix apply_standardizer(const Standardizer &s, const Matrix &x) {
    if (x.cols() != s.mean.size()) {
        throw invalid_argument{ fmt::format("standardizer fitted on {} features applied to {}", s.mean.size(), x.cols()) };
    }
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out(i, j) = (x(i, j) - s.mean(j)) / s.scale(j);
        }
    }
    return out;
}

LabeledDataset apply_standardizer(const Standardizer &s, const LabeledDataset &d) {
    return d.with_features(apply_standardizer(s, d.features()));
}

// ---------------------------------------------------------------------------------------------------------------
// folds

FoldPlan stratified_kfold(const LabeledDataset &d, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw invalid_argument{ fmt::format("k-fold needs k >= 2, got {}", k) };
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    std::vector<std::vector<std::size_t>> test(k);

    std::size_t offset = 0;
    for (int label = 0; label < 2; ++label) {
        std::vector<std::size_t> idx = d.indices_of(label);
        if (idx.size() < k) {
            throw invalid_argument{ fmt::format("class '{}' has {} samples, fewer than the {} folds requested",
                                                d.class_names()[static_cast<std::size_t>(label)], idx.size(), k) };
        }
        std::mt19937_64 rng{ derive_seed(seed, { static_cast<std::uint64_t>(label) }) };
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            test[(offset + i) % k].push_back(idx[i]);
        }
        offset += idx.size();
    }

    std::vector<std::size_t> fold_of(d.n_samples());
    for (std::size_t f = 0; f < k; ++f) {
        for (const std::size_t i : test[f]) {
            fold_of[i] = f;
        }
    }
    plan.folds.resize(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::sort(test[f].begin(), test[f].end());
        plan.folds[f].test = std::move(test[f]);
        for (std::size_t i = 0; i < d.n_samples(); ++i) {
            if (fold_of[i] != f) {
                plan.folds[f].train.push_back(i);
            }
        }
    }
    return plan;
}

// ---------------------------------------------------------------------------------------------------------------
// clover

double CloverGeometry::envelope(double theta) noexcept {
    return petal_radius * std::abs(std::cos(0.5 * petals * theta));
}

bool CloverGeometry::inside(double x, double y) noexcept {
    const double dx = x - center_x;
    const double dy = y - center_y;
    return std::hypot(dx, dy) <= envelope(std::atan2(dy, dx));
}

bool CloverGeometry::in_border(double x, double y) noexcept {
    const double dx = x - center_x;
    const double dy = y - center_y;
    const double r = std::hypot(dx, dy);
    const double edge = envelope(std::atan2(dy, dx));
    return r > edge && r <= edge + border_width;
}

LabeledDataset generate_clover(std::size_t majority_n, std::size_t minority_n, int disturbance_pct, std::uint64_t seed) {
    if (majority_n < 1 || minority_n < 1) {
        throw invalid_argument{ fmt::format("clover needs majority_n >= 1 and minority_n >= 1 (got {}, {})", majority_n, minority_n) };
    }
    if (disturbance_pct < 0 || disturbance_pct > 70) {
        throw invalid_argument{ fmt::format("disturbance must be within [0, 70] percent, got {}", disturbance_pct) };
    }

    std::uniform_real_distribution<double> unit{ 0.0, 1.0 };
    const auto draw = [&](std::mt19937_64 &rng, auto &&accept) {
        for (;;) {
            const double x = unit(rng);
            const double y = unit(rng);
            if (accept(x, y)) {
                return std::pair{ x, y };
            }
        }
    };

    const std::size_t n = majority_n + minority_n;
    Matrix x(static_cast<Eigen::Index>(n), 2);
    std::vector<std::string> tags(n);

    std::mt19937_64 majority_rng{ derive_seed(seed, { 1 }) };
    for (std::size_t i = 0; i < majority_n; ++i) {
        const auto [px, py] = draw(majority_rng, [](double a, double b) { return !CloverGeometry::inside(a, b); });
        x(static_cast<Eigen::Index>(i), 0) = px;
        x(static_cast<Eigen::Index>(i), 1) = py;
        tags[i] = "negative";
    }
    std::mt19937_64 minority_rng{ derive_seed(seed, { 2 }) };
    for (std::size_t i = majority_n; i < n; ++i) {
        const auto [px, py] = draw(minority_rng, [](double a, double b) { return CloverGeometry::inside(a, b); });
        x(static_cast<Eigen::Index>(i), 0) = px;
        x(static_cast<Eigen::Index>(i), 1) = py;
        tags[i] = "positive";
    }

    const std::size_t disturbed = (static_cast<std::size_t>(disturbance_pct) * minority_n + 50) / 100;
    std::mt19937_64 disturb_rng{ derive_seed(seed, { 3 }) };
    std::vector<std::size_t> order(minority_n);
    std::iota(order.begin(), order.end(), majority_n);
    std::shuffle(order.begin(), order.end(), disturb_rng);
    for (std::size_t i = 0; i < disturbed; ++i) {
        const auto [px, py] = draw(disturb_rng, [](double a, double b) { return CloverGeometry::in_border(a, b); });
        x(static_cast<Eigen::Index>(order[i]), 0) = px;
        x(static_cast<Eigen::Index>(order[i]), 1) = py;
    }

    return LabeledDataset::from_tags(std::move(x), tags, std::string{ "positive" }, { "x1", "x2" });
}

}  // namespace imb
