#include "imb/bench.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>

namespace imb::bench {

namespace {

constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;

LabeledDataset load_input(const std::filesystem::path &path, const std::string &label_column,
                          const std::optional<std::string> &positive) {
    if (path.extension() == ".dat") {
        return load_keel(path, positive);
    }
    CsvOptions opts;
    opts.positive_label = positive;
    if (!label_column.empty()) {
        const bool numeric = label_column.find_first_not_of("0123456789") == std::string::npos;
        opts.label_column = numeric ? ColumnRef{ static_cast<std::size_t>(std::stoull(label_column)) } : ColumnRef{ label_column };
    }
    return load_csv(path, opts);
}

}  // namespace

int cli(int argc, const char *const *argv) {
    auto logger = spdlog::stderr_color_mt("imbench");
    spdlog::set_default_logger(logger);

    CLI::App app{ "imbench: minority oversampling toolkit and benchmark runner", "imbench" };
    app.set_version_flag("--version", std::string{ "imbench " } + IMB_VERSION);
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
        ->check(CLI::IsMember({ "trace", "debug", "info", "warn", "error", "off" }));

    // run
    auto *run_cmd = app.add_subcommand("run", "grid-search samplers on datasets with cross-validation");
    std::filesystem::path config_path;
    std::size_t workers = 0;
    bool audit = false;
    run_cmd->add_option("--config", config_path, "JSON experiment file")->required();
    run_cmd->add_option("--workers", workers, "parallel work units (default: IMBENCH_WORKERS or all cores)");
    run_cmd->add_flag("--audit", audit, "fail if a test row reaches a resampler");

    // resample
    auto *res_cmd = app.add_subcommand("resample", "rebalance one dataset and write it as CSV");
    std::filesystem::path input;
    std::filesystem::path output;
    std::string sampler_name;
    std::string label_column;
    std::optional<std::string> positive_label;
    SamplerSpec spec;
    res_cmd->add_option("--input", input, "Keel .dat or CSV file")->required();
    res_cmd->add_option("--sampler", sampler_name, "none, ros, smote, bsmote1, bsmote2, svmsmote, adasyn, adaptive_gmm")->required();
    res_cmd->add_option("--output", output, "CSV destination")->required();
    res_cmd->add_option("--k", spec.k_neighbors, "neighbour count K")->capture_default_str();
    res_cmd->add_option("--r", spec.subdivisions, "interpolation subdivisions r")->capture_default_str();
    res_cmd->add_option("--eta", spec.eta, "cluster fraction eta")->capture_default_str();
    res_cmd->add_option("--pt", spec.prob_threshold, "posterior threshold p_t")->capture_default_str();
    res_cmd->add_option("--wt", spec.weight_threshold, "weight threshold w_t")->capture_default_str();
    res_cmd->add_option("--seed", spec.seed, "random seed")->capture_default_str();
    res_cmd->add_option("--label-column", label_column, "CSV class column, by name or 0-based index (default: class)");
    res_cmd->add_option("--positive-label", positive_label, "class treated as positive when counts tie");

    // gen-clover
    auto *clover_cmd = app.add_subcommand("gen-clover", "write the synthetic five-petal clover dataset as CSV");
    CloverSource clover;
    std::filesystem::path clover_out;
    clover_cmd->add_option("--majority", clover.majority, "majority samples")->required();
    clover_cmd->add_option("--minority", clover.minority, "minority samples")->required();
    clover_cmd->add_option("--disturbance", clover.disturbance, "percent of minority moved to the petal border")->required();
    clover_cmd->add_option("--seed", clover.seed, "random seed")->capture_default_str();
    clover_cmd->add_option("--output", clover_out, "CSV destination")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (run_cmd->parsed()) {
            const ExperimentConfig config = load_config(config_path);
            const ExperimentReport report = run(config, RunOptions{ workers, audit });
            if (config.output) {
                emit(report, config.output->format, config.output->path);
                spdlog::info("report written to {}", config.output->path.string());
            } else {
                std::cout << render_markdown(report);
            }
            if (report.rows.empty()) {
                spdlog::error("no dataset produced results");
                return exit_runtime;
            }
        } else if (res_cmd->parsed()) {
            spec.kind = parse_sampler_kind(sampler_name);
            const LabeledDataset d = load_input(input, label_column, positive_label);
            const Resampled r = resample(d, spec);
            save_csv(r.data, output);
            spdlog::info("{}: {} rows in, {} rows out ({} synthetic)", output.string(), d.n_samples(), r.data.n_samples(),
                         r.provenance.size());
        } else if (clover_cmd->parsed()) {
            save_csv(generate_clover(clover.majority, clover.minority, clover.disturbance, clover.seed), clover_out);
        }
    } catch (const std::exception &e) {
        std::cerr << "imbench: error: " << e.what() << '\n';
        return exit_runtime;
    }
    return 0;
}

}  // namespace imb::bench
