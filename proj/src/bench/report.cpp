#include "imb/bench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>

namespace imb::bench {

namespace {

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string four(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

std::string render_csv(const ExperimentReport &report) {
    std::string out = "dataset,sampler,params,metric,mean,variance\n";
    for (const ReportRow &row : report.rows) {
        for (const auto &[metric, summary] : row.metrics) {
            out += fmt::format("{},{},{},{},{},{}\n", csv_field(row.dataset), csv_field(row.sampler),
                               csv_field(format_params(row.chosen)), to_string(metric), four(summary.mean),
                               four(summary.variance));
        }
    }
    return out;
}

std::string render_markdown(const ExperimentReport &report) {
    // first-appearance order of datasets and samplers
    std::vector<std::string> datasets;
    std::vector<std::string> samplers;
    std::map<std::pair<std::string, std::string>, const ReportRow *> cell;
    for (const ReportRow &row : report.rows) {
        if (std::find(datasets.begin(), datasets.end(), row.dataset) == datasets.end()) {
            datasets.push_back(row.dataset);
        }
        if (std::find(samplers.begin(), samplers.end(), row.sampler) == samplers.end()) {
            samplers.push_back(row.sampler);
        }
        cell[{ row.dataset, row.sampler }] = &row;
    }

    std::string out;
    for (const Metric metric : report.metrics) {
        out += fmt::format("### {}\n\n| Dataset |", to_string(metric));
        for (const std::string &s : samplers) {
            out += fmt::format(" {} |", s);
        }
        out += "\n|---|";
        for (std::size_t i = 0; i < samplers.size(); ++i) {
            out += "---|";
        }
        out += "\n";
        for (const std::string &d : datasets) {
            // bold compares the printed means so that visually equal cells are treated alike
            std::string best;
            for (const std::string &s : samplers) {
                const auto it = cell.find({ d, s });
                if (it != cell.end()) {
                    const std::string m = four(it->second->at(metric).mean);
                    if (best.empty() || std::stod(m) > std::stod(best)) {
                        best = m;
                    }
                }
            }
            out += fmt::format("| {} |", d);
            for (const std::string &s : samplers) {
                const auto it = cell.find({ d, s });
                if (it == cell.end()) {
                    out += " n/a |";
                    continue;
                }
                const CvSummary &summary = it->second->at(metric);
                const std::string m = four(summary.mean);
                const std::string text = fmt::format("{} ± {}", m, four(summary.variance));
                out += m == best ? fmt::format(" **{}** |", text) : fmt::format(" {} |", text);
            }
            out += "\n";
        }
        out += "\n";
    }
    out += "Cells show mean ± variance over folds. Chosen parameters:\n\n";
    for (const ReportRow &row : report.rows) {
        out += fmt::format("- {} / {}: {}\n", row.dataset, row.sampler, format_params(row.chosen));
    }
    return out;
}

void emit(const ExperimentReport &report, Format format, const std::filesystem::path &path) {
    const std::string text = format == Format::csv ? render_csv(report) : render_markdown(report);
    std::ofstream out{ path, std::ios::binary };
    if (!out) {
        throw error{ fmt::format("cannot open '{}' for writing: {}", path.string(), std::strerror(errno)) };
    }
    out << text;
    out.flush();
    if (!out) {
        throw error{ fmt::format("failed writing '{}'", path.string()) };
    }
}

}  // namespace imb::bench
