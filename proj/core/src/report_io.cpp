#include "chemoeda/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "chemoeda/errors.hpp"
#include "chemoeda/version.hpp"

namespace chemo {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

namespace {

void config_echo(const OptimizerConfig& cfg, std::ostream& out) {
    out << "# population = " << cfg.population_size << "\n";
    out << "# selection = " << cfg.selection.describe() << "\n";
    out << "# pc = " << format_double(cfg.ga.crossover_rate) << "\n";
    out << "# pm = " << format_double(cfg.ga.mutation_rate) << "\n";
    out << "# learning_rate = " << format_double(cfg.pbil.learning_rate) << "\n";
    out << "# offspring_fraction = " << format_double(cfg.hboa.offspring_fraction) << "\n";
    out << "# rtr_window = " << cfg.hboa.rtr_window << "\n";
}

std::string digest_hex(std::uint64_t digest) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

}  // namespace

void write_run_record(const RunRecord& record, std::uint64_t instance_digest,
                      const std::string& instance_ref, std::ostream& out) {
    out << "# chemoeda run v" << kVersion << "\n";
    out << "# optimizer = " << to_string(record.kind) << "\n";
    out << "# seed = " << record.seed << "\n";
    out << "# instance = " << (instance_ref.empty() ? "<builtin>" : instance_ref) << "\n";
    out << "# instance_digest = " << digest_hex(instance_digest) << "\n";
    config_echo(record.config, out);
    out << "# budget = " << record.config.stop.max_evaluations << "\n";
    out << "# stop_reason = " << record.stop_reason << "\n";
    out << "# total_evaluations = " << record.total_evaluations << "\n";
    out << "# first_feasible = " << record.first_feasible << "\n";
    out << "# best_fitness = " << format_double(record.best_fitness) << "\n";
    if (record.best_report) {
        const auto& r = *record.best_report;
        out << "# best_efficacy = " << format_double(r.efficacy) << "\n";
        out << "# best_distances = " << format_double(r.distances[0]) << ", "
            << format_double(r.distances[1]) << ", " << format_double(r.distances[2]) << ", "
            << format_double(r.distances[3]) << "\n";
        out << "# best_feasible = " << (r.feasible ? 1 : 0) << "\n";
    }
    out << "# best_bits = ";
    for (auto b : record.best.bits) out << int(b);
    out << "\n";
    out << "generation,evaluations,best_fitness,mean_fitness\n";
    for (const auto& g : record.trace)
        out << g.generation << "," << g.evaluations << "," << format_double(g.best) << ","
            << format_double(g.mean) << "\n";
}

void write_results_csv(const ExperimentSummary& summary, std::ostream& out) {
    const auto& spec = summary.spec;
    out << "# chemoeda results v" << kVersion << "\n";
    out << "# label = " << spec.label << "\n";
    out << "# protocol = " << to_string(spec.protocol) << "\n";
    out << "# optimizer = " << to_string(spec.optimizer) << "\n";
    out << "# instance = " << (spec.instance_path.empty() ? "<builtin>" : spec.instance_path)
        << "\n";
    out << "# instance_digest = " << digest_hex(summary.instance_digest) << "\n";
    config_echo(spec.config, out);
    out << "# runs = " << spec.runs << "\n";
    out << "# eval_cap = " << spec.eval_cap << "\n";
    out << "# base_seed = " << spec.base_seed << "\n";
    out << "run_index,seed,metric_value,censored_flag,total_evaluations\n";
    for (const auto& o : summary.outcomes)
        out << o.index << "," << o.seed << "," << format_double(o.metric) << ","
            << (o.censored ? 1 : 0) << "," << o.total_evaluations << "\n";
    out << "# n = " << summary.stats.n << "\n";
    out << "# mean = " << format_double(summary.stats.mean) << "\n";
    out << "# std = " << format_double(summary.stats.stddev) << "\n";
    out << "# censored = " << summary.censored << "\n";
}

void write_results_meta(const ExperimentSummary& summary, std::ostream& out) {
    const auto& spec = summary.spec;
    nlohmann::ordered_json j;
    j["tool"] = "chemoeda";
    j["version"] = kVersion;
    j["label"] = spec.label;
    j["protocol"] = to_string(spec.protocol);
    j["optimizer"] = to_string(spec.optimizer);
    j["instance"] = spec.instance_path.empty() ? "<builtin>" : spec.instance_path;
    j["instance_digest"] = digest_hex(summary.instance_digest);
    j["runs"] = spec.runs;
    j["eval_cap"] = spec.eval_cap;
    j["base_seed"] = spec.base_seed;
    j["population"] = spec.config.population_size;
    j["selection"] = spec.config.selection.describe();
    j["pc"] = spec.config.ga.crossover_rate;
    j["pm"] = spec.config.ga.mutation_rate;
    j["learning_rate"] = spec.config.pbil.learning_rate;
    j["offspring_fraction"] = spec.config.hboa.offspring_fraction;
    j["rtr_window"] = spec.config.hboa.rtr_window;
    j["n"] = summary.stats.n;
    j["mean"] = summary.stats.mean;
    j["std"] = summary.stats.stddev;
    j["censored"] = summary.censored;
    out << j.dump(2) << "\n";
}

LoadedResults load_results_csv(std::istream& in, const std::string& source_name) {
    LoadedResults results;
    bool have_protocol = false;
    double footer_mean = 0.0, footer_std = 0.0;
    int footer_n = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = source_name + ":" + std::to_string(lineno);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                size_t a = s.find_first_not_of(" \t");
                size_t b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            std::string key = trim(body.substr(0, eq));
            std::string value = trim(body.substr(eq + 1));
            if (key == "label") results.label = value;
            else if (key == "protocol") {
                results.protocol = protocol_from_string(value);
                have_protocol = true;
            } else if (key == "n") footer_n = std::stoi(value);
            else if (key == "mean") footer_mean = std::stod(value);
            else if (key == "std") footer_std = std::stod(value);
            continue;
        }
        if (line.find("run_index") == 0) continue;  // column header
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 5) throw ParseError(where + ": expected 5 CSV fields");
        try {
            RunOutcome o;
            o.index = std::stoi(fields[0]);
            o.seed = std::stoull(fields[1]);
            o.metric = std::stod(fields[2]);
            o.censored = std::stoi(fields[3]) != 0;
            o.total_evaluations = std::stoll(fields[4]);
            results.outcomes.push_back(o);
        } catch (const std::exception&) {
            throw ParseError(where + ": bad results row '" + line + "'");
        }
    }
    if (!have_protocol) throw ParseError(source_name + ": missing '# protocol = ...' header");

    std::vector<double> kept;
    for (const auto& o : results.outcomes)
        if (!o.censored) kept.push_back(o.metric);
    if (kept.size() >= 2) {
        results.stats = summarize(kept);
    } else if (footer_n >= 2) {
        // summary-only file
        results.stats = SummaryStats{footer_n, footer_mean, footer_std};
    } else {
        throw ParseError(source_name + ": no usable rows or summary footer");
    }
    return results;
}

LoadedResults load_results_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open results file: " + path);
    return load_results_csv(in, path);
}

}  // namespace chemo
