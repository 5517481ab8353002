#include "imb/bench.hpp"

#include "json.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace imb::bench {

namespace {

using json = nlohmann::json;

constexpr std::array<std::pair<Metric, std::string_view>, 4> metric_names{ {
    { Metric::f1, "f1" },
    { Metric::f2, "f2" },
    { Metric::minority_acc, "minority_acc" },
    { Metric::overall_acc, "overall_acc" },
} };

void reject_unknown(const json &obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) {
        throw invalid_argument{ fmt::format("{}: expected an object", where) };
    }
    for (const auto &item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw invalid_argument{ fmt::format("{}: unknown key '{}'", where, item.key()) };
        }
    }
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
    const std::filesystem::path path{ p };
    return path.is_absolute() ? path : base / path;
}

template <typename T>
T get(const json &obj, std::string_view key, std::string_view where) {
    try {
        return obj.at(std::string{ key }).get<T>();
    } catch (const json::exception &e) {
        throw invalid_argument{ fmt::format("{}: bad or missing '{}' ({})", where, key, e.what()) };
    }
}

template <typename T>
T get_or(const json &obj, std::string_view key, T fallback, std::string_view where) {
    return obj.contains(std::string{ key }) ? get<T>(obj, key, where) : fallback;
}

DatasetSource parse_dataset(const json &j, const std::filesystem::path &base, std::size_t index) {
    const std::string where = fmt::format("datasets[{}]", index);
    reject_unknown(j, { "name", "keel", "csv", "clover", "label_column", "positive_label" }, where);
    DatasetSource src;
    src.name = get<std::string>(j, "name", where);
    const int kinds = static_cast<int>(j.contains("keel")) + static_cast<int>(j.contains("csv")) + static_cast<int>(j.contains("clover"));
    if (kinds != 1) {
        throw invalid_argument{ fmt::format("{}: exactly one of 'keel', 'csv', 'clover' is required", where) };
    }
    std::optional<std::string> positive;
    if (j.contains("positive_label")) {
        positive = get<std::string>(j, "positive_label", where);
    }
    if (j.contains("keel")) {
        src.source = KeelSource{ resolve(base, get<std::string>(j, "keel", where)), positive };
    } else if (j.contains("csv")) {
        CsvSource csv{ resolve(base, get<std::string>(j, "csv", where)), {} };
        if (j.contains("label_column")) {
            const json &col = j.at("label_column");
            if (col.is_number_unsigned()) {
                csv.options.label_column = col.get<std::size_t>();
            } else if (col.is_string()) {
                csv.options.label_column = col.get<std::string>();
            } else {
                throw invalid_argument{ fmt::format("{}: 'label_column' must be a name or a column index", where) };
            }
        }
        csv.options.positive_label = positive;
        src.source = std::move(csv);
    } else {
        const json &c = j.at("clover");
        reject_unknown(c, { "majority", "minority", "disturbance", "seed" }, where + ".clover");
        CloverSource clover;
        clover.majority = get_or<std::size_t>(c, "majority", clover.majority, where);
        clover.minority = get_or<std::size_t>(c, "minority", clover.minority, where);
        clover.disturbance = get_or<int>(c, "disturbance", clover.disturbance, where);
        clover.seed = get_or<std::uint64_t>(c, "seed", clover.seed, where);
        src.source = clover;
    }
    return src;
}

template <typename T>
std::vector<T> parse_axis(const json &j, std::string_view key, std::string_view where) {
    const json &axis = j.at(std::string{ key });
    std::vector<T> values;
    if (axis.is_array()) {
        values = get<std::vector<T>>(j, key, where);
    } else if (axis.is_number()) {
        values.push_back(axis.get<T>());
    } else {
        throw invalid_argument{ fmt::format("{}: '{}' must be a number or a list of numbers", where, key) };
    }
    if (values.empty()) {
        throw invalid_argument{ fmt::format("{}: '{}' must not be empty", where, key) };
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

SamplerGrid parse_sampler(const json &j, std::size_t index) {
    const std::string where = fmt::format("samplers[{}]", index);
    if (j.is_string()) {
        return default_grid(parse_sampler_kind(j.get<std::string>()));
    }
    reject_unknown(j, { "kind", "name", "k", "eta", "r", "p_t", "w_t", "em" }, where);
    SamplerGrid grid = default_grid(parse_sampler_kind(get<std::string>(j, "kind", where)));
    grid.name = get_or<std::string>(j, "name", grid.name, where);
    if (j.contains("k")) {
        grid.k_values = parse_axis<std::size_t>(j, "k", where);
    }
    if (j.contains("eta")) {
        grid.eta_values = parse_axis<double>(j, "eta", where);
    }
    SamplerSpec &b = grid.base;
    b.subdivisions = get_or<std::size_t>(j, "r", b.subdivisions, where);
    b.prob_threshold = get_or<double>(j, "p_t", b.prob_threshold, where);
    b.weight_threshold = get_or<double>(j, "w_t", b.weight_threshold, where);
    if (j.contains("em")) {
        const json &em = j.at("em");
        reject_unknown(em, { "max_iters", "tol", "reg_floor", "n_init" }, where + ".em");
        b.em.max_iters = get_or<int>(em, "max_iters", b.em.max_iters, where);
        b.em.tol = get_or<double>(em, "tol", b.em.tol, where);
        b.em.reg_floor = get_or<double>(em, "reg_floor", b.em.reg_floor, where);
        b.em.n_init = get_or<int>(em, "n_init", b.em.n_init, where);
    }
    return grid;
}

}  // namespace

std::string_view to_string(Metric m) noexcept {
    for (const auto &[k, name] : metric_names) {
        if (k == m) {
            return name;
        }
    }
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    for (const auto &[k, n] : metric_names) {
        if (n == name) {
            return k;
        }
    }
    throw invalid_argument{ fmt::format("unknown metric '{}' (expected f1, f2, minority_acc or overall_acc)", name) };
}

const std::vector<Metric> &all_metrics() {
    static const std::vector<Metric> all{ Metric::f1, Metric::f2, Metric::minority_acc, Metric::overall_acc };
    return all;
}

std::vector<SamplerSpec> SamplerGrid::points() const {
    const std::vector<std::size_t> ks = uses_neighbors(base.kind) && !k_values.empty() ? k_values : std::vector<std::size_t>{ base.k_neighbors };
    const std::vector<double> etas = uses_eta(base.kind) && !eta_values.empty() ? eta_values : std::vector<double>{ base.eta };
    std::vector<SamplerSpec> out;
    for (const std::size_t k : ks) {
        for (const double eta : etas) {
            SamplerSpec s = base;
            s.k_neighbors = k;
            s.eta = eta;
            out.push_back(s);
        }
    }
    return out;
}

SamplerGrid default_grid(SamplerKind kind) {
    SamplerGrid g;
    g.name = std::string{ to_string(kind) };
    g.base.kind = kind;
    if (uses_neighbors(kind)) {
        for (std::size_t k = 2; k <= 10; ++k) {
            g.k_values.push_back(k);
        }
    }
    if (uses_eta(kind)) {
        for (int t = 1; t <= 10; ++t) {
            g.eta_values.push_back(static_cast<double>(t) / 10.0);
        }
    }
    return g;
}

void ExperimentConfig::validate() const {
    if (datasets.empty()) {
        throw invalid_argument{ "config lists no datasets" };
    }
    if (samplers.empty()) {
        throw invalid_argument{ "config lists no samplers" };
    }
    if (folds < 2) {
        throw invalid_argument{ fmt::format("folds must be at least 2, got {}", folds) };
    }
    if (metrics.empty()) {
        throw invalid_argument{ "config lists no metrics" };
    }
    std::set<std::string> names;
    for (const DatasetSource &d : datasets) {
        if (!names.insert(d.name).second) {
            throw invalid_argument{ fmt::format("dataset name '{}' appears twice", d.name) };
        }
    }
    names.clear();
    for (const SamplerGrid &g : samplers) {
        if (!names.insert(g.name).second) {
            throw invalid_argument{ fmt::format("sampler name '{}' appears twice; set 'name' to tell them apart", g.name) };
        }
        for (const SamplerSpec &s : g.points()) {
            s.validate();
        }
        g.base.em.validate();
    }
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path &base_dir) {
    json j;
    try {
        j = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error &e) {
        throw invalid_argument{ fmt::format("config is not valid JSON: {}", e.what()) };
    }
    reject_unknown(j, { "datasets", "samplers", "folds", "seed", "metrics", "output" }, "config");
    ExperimentConfig cfg;
    if (!j.contains("datasets") || !j.at("datasets").is_array()) {
        throw invalid_argument{ "config: 'datasets' must be a list" };
    }
    if (!j.contains("samplers") || !j.at("samplers").is_array()) {
        throw invalid_argument{ "config: 'samplers' must be a list" };
    }
    for (std::size_t i = 0; i < j.at("datasets").size(); ++i) {
        cfg.datasets.push_back(parse_dataset(j.at("datasets")[i], base_dir, i));
    }
    for (std::size_t i = 0; i < j.at("samplers").size(); ++i) {
        cfg.samplers.push_back(parse_sampler(j.at("samplers")[i], i));
    }
    cfg.folds = get_or<std::size_t>(j, "folds", cfg.folds, "config");
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed, "config");
    if (j.contains("metrics")) {
        cfg.metrics.clear();
        for (const std::string &m : get<std::vector<std::string>>(j, "metrics", "config")) {
            const Metric metric = parse_metric(m);
            if (std::find(cfg.metrics.begin(), cfg.metrics.end(), metric) == cfg.metrics.end()) {
                cfg.metrics.push_back(metric);
            }
        }
    }
    if (j.contains("output")) {
        const json &o = j.at("output");
        reject_unknown(o, { "path", "format" }, "output");
        OutputSpec out;
        out.path = resolve(base_dir, get<std::string>(o, "path", "output"));
        const std::string format = get_or<std::string>(o, "format", "markdown", "output");
        if (format == "csv") {
            out.format = Format::csv;
        } else if (format == "markdown") {
            out.format = Format::markdown;
        } else {
            throw invalid_argument{ fmt::format("output: unknown format '{}' (expected csv or markdown)", format) };
        }
        cfg.output = out;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in{ path };
    if (!in) {
        throw error{ fmt::format("cannot open config file '{}'", path.string()) };
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str(), path.parent_path());
    } catch (const invalid_argument &e) {
        throw invalid_argument{ fmt::format("{}: {}", path.string(), e.what()) };
    }
}

LabeledDataset load(const DatasetSource &src) {
    if (const auto *keel = std::get_if<KeelSource>(&src.source)) {
        return load_keel(keel->path, keel->positive_label);
    }
    if (const auto *csv = std::get_if<CsvSource>(&src.source)) {
        return load_csv(csv->path, csv->options);
    }
    const auto &c = std::get<CloverSource>(src.source);
    return generate_clover(c.majority, c.minority, c.disturbance, c.seed);
}

}  // namespace imb::bench
