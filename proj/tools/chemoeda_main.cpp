#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chemoeda/errors.hpp"
#include "chemoeda/experiment.hpp"
#include "chemoeda/linkage.hpp"
#include "chemoeda/report_io.hpp"
#include "chemoeda/version.hpp"

namespace fs = std::filesystem;
using namespace chemo;

namespace {

// 0 success, 2 usage, 3 parse, 4 invariant, 5 experiment/config
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitInvariant = 4;
constexpr int kExitExperiment = 5;

struct CommonFlags {
    std::string instance_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::uint64_t seed = 1;
    int jobs = 1;
    int verbosity = 1;
};

InstanceOverrides parse_overrides(const std::vector<std::string>& raw, int verbosity) {
    InstanceOverrides out;
    for (const auto& item : raw) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ParseError("--set expects key=value, got '" + item + "'");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        if (verbosity > 0)
            std::cerr << "override: " << item.substr(0, eq) << " = " << item.substr(eq + 1)
                      << "\n";
    }
    return out;
}

ProblemInstance resolve_instance(const CommonFlags& flags) {
    auto overrides = parse_overrides(flags.overrides, flags.verbosity);
    if (flags.instance_path.empty()) return instance_from_overrides(overrides);
    return load_instance(flags.instance_path, overrides);
}

fs::path resolve_out_dir(const std::string& flag_value) {
    std::string dir = flag_value;
    if (dir.empty()) {
        const char* env = std::getenv("CHEMOEDA_OUT");
        dir = env ? env : ".";
    }
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << contents;
}

int cmd_validate(const CommonFlags& flags) {
    ProblemInstance inst;
    try {
        inst = resolve_instance(flags);
    } catch (const InvariantError& e) {
        std::cout << e.what() << "\n";
        return kExitInvariant;
    }
    std::cout << "instance ok: s=" << inst.num_doses << " d=" << inst.num_drugs
              << " bits=" << inst.bits_per_dose << " organs=" << inst.organs()
              << " chromosome_length=" << inst.chromosome_length() << "\n";
    std::cout << "instance_digest = ";
    {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(instance_digest(inst)));
        std::cout << buf << "\n";
    }

    // untreated tumour: does the all-zero schedule break the size cap?
    DoseSchedule zero(inst.num_doses, inst.num_drugs);
    auto traj = tumour_trajectory(zero, inst);
    bool crosses = false;
    std::cout << "untreated trajectory (cells at each dose time):\n";
    for (int i = 0; i < inst.num_doses; ++i) {
        bool over = traj[i] > inst.max_size;
        crosses |= over;
        std::cout << "  t=" << format_double(inst.dose_times[i]) << "  N="
                  << format_double(traj[i]) << (over ? "  > n_max" : "") << "\n";
    }
    std::cout << (crosses ? "untreated tumour crosses n_max (treatment pressure present)\n"
                          : "warning: untreated tumour stays below n_max; the all-zero "
                            "schedule is feasible\n");
    return 0;
}

int cmd_run(const std::string& kind_name, const CommonFlags& flags, OptimizerConfig cfg,
            const std::string& target_text, bool stop_on_feasible, long long budget) {
    OptimizerKind kind = optimizer_from_string(kind_name);
    ProblemInstance inst = resolve_instance(flags);
    cfg.stop.max_evaluations = budget;
    cfg.stop.stop_on_feasible = stop_on_feasible;
    if (!target_text.empty()) cfg.stop.target_fitness = std::stod(target_text);

    RunRecord record = run_optimizer(kind, inst, cfg, flags.seed);

    fs::path dir = resolve_out_dir(flags.out_dir);
    fs::path path = dir / ("run-" + to_string(kind) + "-seed" + std::to_string(flags.seed) +
                           ".csv");
    std::ostringstream body;
    write_run_record(record, instance_digest(inst), flags.instance_path, body);
    write_file(path, body.str());

    std::cout << "optimizer = " << to_string(kind) << "\n";
    std::cout << "stop_reason = " << record.stop_reason << "\n";
    std::cout << "total_evaluations = " << record.total_evaluations << "\n";
    std::cout << "first_feasible = " << record.first_feasible << "\n";
    std::cout << "best_fitness = " << format_double(record.best_fitness) << "\n";
    auto best_traj = tumour_trajectory(decode(record.best, inst), inst);
    std::cout << "best_eradicates = " << (eradicated(best_traj) ? 1 : 0) << "\n";
    std::cout << "trace = " << path.string() << "\n";
    return 0;
}

int cmd_experiment(const std::string& spec_path, const CommonFlags& flags) {
    ExperimentSpec spec = load_experiment_spec(spec_path);
    if (!flags.instance_path.empty()) spec.instance_path = flags.instance_path;
    auto overrides = parse_overrides(flags.overrides, flags.verbosity);
    ProblemInstance inst = spec.instance_path.empty()
                               ? instance_from_overrides(overrides)
                               : load_instance(spec.instance_path, overrides);
    ExperimentSummary summary = run_experiment(spec, inst, flags.jobs);

    fs::path dir = resolve_out_dir(flags.out_dir);
    fs::path csv = dir / (spec.label + ".csv");
    fs::path meta = dir / (spec.label + ".meta.json");
    std::ostringstream body, meta_body;
    write_results_csv(summary, body);
    write_results_meta(summary, meta_body);
    write_file(csv, body.str());
    write_file(meta, meta_body.str());

    std::cout << "label = " << spec.label << "\n";
    std::cout << "protocol = " << to_string(spec.protocol) << "\n";
    std::cout << "n = " << summary.stats.n << "  mean = " << format_double(summary.stats.mean)
              << "  std = " << format_double(summary.stats.stddev)
              << "  censored = " << summary.censored << "\n";
    std::cout << "results = " << csv.string() << "\n";
    if (summary.censored > 0)
        std::cerr << "warning: " << summary.censored
                  << " run(s) censored (no feasible solution within the cap)\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& files, const std::string& out_file) {
    if (files.size() < 2) throw ConfigError("compare needs at least two results files");
    std::vector<LoadedResults> loaded;
    for (const auto& f : files) loaded.push_back(load_results_csv_file(f));
    for (size_t i = 1; i < loaded.size(); ++i)
        if (loaded[i].protocol != loaded[0].protocol)
            throw ConfigError("cannot compare results from different protocols: " + files[0] +
                              " vs " + files[i]);

    std::ostringstream table;
    table << "pair,diff_in_means,std_error,t,df,p,degenerate\n";
    for (size_t a = 0; a < loaded.size(); ++a) {
        for (size_t b = a + 1; b < loaded.size(); ++b) {
            TTestResult r = welch_t_test(loaded[a].stats, loaded[b].stats);
            table << loaded[a].label << " vs " << loaded[b].label << ","
                  << format_double(r.diff) << "," << format_double(r.se) << ","
                  << format_double(r.t) << "," << format_double(r.df) << ","
                  << format_double(r.p) << "," << (r.degenerate ? 1 : 0) << "\n";
        }
    }
    std::cout << table.str();
    if (!out_file.empty()) write_file(out_file, table.str());
    return 0;
}

int cmd_linkage(const CommonFlags& flags, int backgrounds, double tol,
                const std::string& oracle_name, int oracle_bits) {
    FitnessFn fn;
    int length = 0;
    ProblemInstance inst;
    if (oracle_name == "chemo") {
        inst = resolve_instance(flags);
        length = inst.chromosome_length();
    } else if (oracle_name == "onemax") {
        length = oracle_bits > 0 ? oracle_bits : 64;
    } else {
        throw ConfigError("unknown linkage oracle '" + oracle_name + "'");
    }

    InteractionReport report;
    if (oracle_name == "chemo") {
        Evaluator eval(inst);
        fn = [&eval](const Chromosome& x) { return eval.report(x).fitness; };
        report = detect_interactions(fn, length, backgrounds, tol, flags.seed);
    } else {
        fn = [](const Chromosome& x) {
            int ones = 0;
            for (auto b : x.bits) ones += b;
            return static_cast<double>(ones);
        };
        report = detect_interactions(fn, length, backgrounds, tol, flags.seed);
    }

    fs::path dir = resolve_out_dir(flags.out_dir);
    fs::path path = dir / ("linkage-seed" + std::to_string(flags.seed) + ".txt");
    std::ostringstream body;
    body << "# chemoeda linkage v" << kVersion << "\n";
    if (oracle_name == "chemo") {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(instance_digest(inst)));
        body << "# instance = "
             << (flags.instance_path.empty() ? "<builtin>" : flags.instance_path) << "\n";
        body << "# instance_digest = " << buf << "\n";
    } else {
        body << "# oracle = " << oracle_name << "\n";
    }
    write_interaction_report(report, body);
    write_file(path, body.str());

    std::cout << "pairs = " << report.pairs.size() << " of " << report.possible_pairs()
              << "\n";
    std::cout << "density = " << format_double(report.density()) << "\n";
    std::cout << "oracle_calls = " << report.oracle_calls << "\n";
    std::cout << "report = " << path.string() << "\n";
    return 0;
}

int cmd_plotdata(const std::vector<std::string>& files, const std::string& out_file) {
    if (files.empty()) throw ConfigError("plotdata needs at least one results file");
    std::ostringstream table;
    table << "label,mean,std\n";
    for (const auto& f : files) {
        LoadedResults r = load_results_csv_file(f);
        table << r.label << "," << format_double(r.stats.mean) << ","
              << format_double(r.stats.stddev) << "\n";
    }
    std::cout << table.str();
    if (!out_file.empty()) write_file(out_file, table.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-drug treatment schedule optimization with EDA/GA solvers"};
    app.set_version_flag("--version", std::string("chemoeda ") + kVersion);
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);

    CommonFlags flags;

    auto add_common = [&](CLI::App* sub, bool with_instance = true) {
        if (with_instance)
            sub->add_option("--instance", flags.instance_path, "instance file (default: builtin)");
        sub->add_option("--set", flags.overrides, "override an instance key, key=value")
            ->take_all();
        sub->add_option("--out", flags.out_dir, "output directory (default: $CHEMOEDA_OUT or .)");
        sub->add_option("--seed", flags.seed, "random seed");
        sub->add_option("--jobs", flags.jobs, "worker threads for independent runs");
        sub->add_flag("-q{0},--quiet{0}", flags.verbosity, "suppress override logging");
    };

    // validate
    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check an instance file and its pressure");
    validate->add_option("instance", validate_path, "instance file")->required();
    add_common(validate, false);

    // run
    auto* run = app.add_subcommand("run", "run one optimizer once and write its trace");
    std::string run_kind;
    run->add_option("kind", run_kind, "ga | umda | pbil | hboa")->required();
    OptimizerConfig run_cfg;
    std::string run_select = "tournament:6";
    std::string run_target;
    bool run_stop_feasible = false;
    long long run_budget = 200000;
    run->add_option("--pop", run_cfg.population_size, "population size");
    run->add_option("--select", run_select, "tournament:K or truncation:K");
    run->add_option("--budget", run_budget, "evaluation budget");
    run->add_flag("--stop-on-feasible", run_stop_feasible, "stop once a feasible schedule is found");
    run->add_option("--target", run_target, "stop at this fitness");
    run->add_option("--pc", run_cfg.ga.crossover_rate, "GA crossover rate");
    run->add_option("--pm", run_cfg.ga.mutation_rate, "GA per-bit mutation rate (default 1/L)");
    run->add_option("--alpha", run_cfg.pbil.learning_rate, "PBIL learning rate");
    run->add_option("--offspring-frac", run_cfg.hboa.offspring_fraction,
                    "hBOA offspring per generation as a fraction of the population");
    run->add_option("--rtr-window", run_cfg.hboa.rtr_window,
                    "hBOA replacement window (default min(L, pop/20))");
    add_common(run);

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a multi-run protocol from a spec file");
    std::string experiment_spec;
    experiment->add_option("spec", experiment_spec, "experiment spec file")->required();
    add_common(experiment);

    // compare
    auto* compare = app.add_subcommand("compare", "pairwise Welch t-tests over results files");
    std::vector<std::string> compare_files;
    std::string compare_out;
    compare->add_option("files", compare_files, "results CSV files")->required();
    compare->add_option("--out", compare_out, "also write the table to this file");

    // linkage
    auto* linkage = app.add_subcommand("linkage", "bivariate interaction census");
    int linkage_backgrounds = 1;
    double linkage_tol = 1e-9;
    std::string linkage_oracle = "chemo";
    int linkage_bits = 0;
    linkage->add_option("--backgrounds", linkage_backgrounds, "background points per census");
    linkage->add_option("--tol", linkage_tol, "detection tolerance (relative)");
    linkage->add_option("--oracle", linkage_oracle, "fitness oracle")->group("");  // test hook
    linkage->add_option("--bits", linkage_bits, "length for non-chemo oracles")->group("");
    add_common(linkage);

    // plotdata
    auto* plotdata = app.add_subcommand("plotdata", "emit label,mean,std rows for bar charts");
    std::vector<std::string> plot_files;
    std::string plot_out;
    plotdata->add_option("files", plot_files, "results CSV files")->required();
    plotdata->add_option("--out", plot_out, "also write the rows to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed()) {
            flags.instance_path = validate_path;
            return cmd_validate(flags);
        }
        if (run->parsed()) {
            run_cfg.selection = selection_from_string(run_select);
            return cmd_run(run_kind, flags, run_cfg, run_target, run_stop_feasible, run_budget);
        }
        if (experiment->parsed()) return cmd_experiment(experiment_spec, flags);
        if (compare->parsed()) return cmd_compare(compare_files, compare_out);
        if (linkage->parsed())
            return cmd_linkage(flags, linkage_backgrounds, linkage_tol, linkage_oracle,
                               linkage_bits);
        if (plotdata->parsed()) return cmd_plotdata(plot_files, plot_out);
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InvariantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExperiment;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExperiment;
    }
}
