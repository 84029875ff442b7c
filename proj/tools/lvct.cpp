// lvct: fit the latent-variable logit model to 2x2 table sets, pool and test,
// run the simulation studies, and export the bundled datasets.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lvct/datasets.hpp"
#include "lvct/gem.hpp"
#include "lvct/inference.hpp"
#include "lvct/report.hpp"
#include "lvct/simulation.hpp"
#include "lvct/table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNonConverged = 3;

using json = nlohmann::ordered_json;

struct FitFlags {
    std::uint64_t seed = 0;
    std::size_t samples = 10000;
    std::size_t burnin = 2000;
    std::size_t thin = 1;
    int max_iters = 100;
    double tol = 1e-4;
    double epsilon = 0.1;
    double sigma2_floor = 1e-3;
    double level = 0.05;
    std::string estimator = "mh";
    unsigned threads = 0;

    lvct::FitConfig config() const
    {
        lvct::FitConfig c;
        c.epsilon = epsilon;
        c.max_iters = max_iters;
        c.tol = tol;
        c.sigma2_floor = sigma2_floor;
        c.level = level;
        c.estimator = lvct::parse_estimator(estimator);
        c.sampler.samples = samples;
        c.sampler.burn_in = burnin;
        c.sampler.thin = thin;
        c.sampler.seed = seed;
        return c;
    }
};

void add_fit_flags(CLI::App& app, FitFlags& f, bool with_seed = true)
{
    if (with_seed)
        app.add_option("--seed", f.seed, "Master random seed")->capture_default_str();
    app.add_option("--samples", f.samples, "Retained Metropolis-Hastings draws per E-step")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--burnin", f.burnin, "Burn-in proposals (step tuning happens here)")
        ->capture_default_str();
    app.add_option("--thin", f.thin, "Keep every thin-th draw")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-iters", f.max_iters, "GEM iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--tol", f.tol, "Stop when the largest parameter change is below this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--epsilon", f.epsilon, "Degenerate-cell correction for y = 0 or y = n")
        ->check(CLI::Range(1e-12, 0.4999999))
        ->capture_default_str();
    app.add_option("--sigma2-floor", f.sigma2_floor, "Lower bound on the latent variance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--level", f.level, "Size of the two-sided independence test")
        ->check(CLI::Range(1e-12, 0.9999999))
        ->capture_default_str();
    app.add_option("--estimator", f.estimator, "Posterior expectations by mh or quadrature")
        ->check(CLI::IsMember({"mh", "quadrature"}))
        ->capture_default_str();
    app.add_option("--threads", f.threads, "Worker threads (0 = logical CPUs)")->capture_default_str();
}

struct StudyFlags {
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double sigma = 1.0;
    std::vector<lvct::Count> n1{20, 10, 30, 5, 15};
    std::vector<lvct::Count> n2{6, 20, 15, 25, 10};
    std::string output;
    std::string data;

    lvct::GeneratorConfig config() const
    {
        lvct::GeneratorConfig c;
        c.alpha1 = alpha1;
        c.alpha2 = alpha2;
        c.sigma = sigma;
        c.n1 = n1;
        c.n2 = n2;
        c.replications = reps;
        c.seed = seed;
        return c;
    }
};

void add_study_flags(CLI::App& app, StudyFlags& s, std::size_t default_reps)
{
    s.reps = default_reps;
    app.add_option("--reps", s.reps, "Replications")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--seed", s.seed, "Master random seed")->capture_default_str();
    app.add_option("--alpha1", s.alpha1, "Arm-1 logit intercept")->capture_default_str();
    app.add_option("--alpha2", s.alpha2, "Arm-2 logit intercept")->capture_default_str();
    app.add_option("--sigma", s.sigma, "Latent standard deviation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--n1", s.n1, "Arm-1 table sizes")->delimiter(',')->capture_default_str();
    app.add_option("--n2", s.n2, "Arm-2 table sizes")->delimiter(',')->capture_default_str();
    app.add_option("-o,--output", s.output, "Summary JSON path (default: standard output)");
    app.add_option("--data", s.data, "Per-replication CSV path");
}

std::string joined_command(int argc, char** argv)
{
    std::string out = "lvct";
    for (int i = 1; i < argc; ++i) {
        out += ' ';
        out += argv[i];
    }
    return out;
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw lvct::input_error("cannot write '" + path + "'");
    out << contents;
    if (!out)
        throw lvct::input_error("failed writing '" + path + "'");
}

void emit(const std::string& path, const std::string& contents)
{
    if (path.empty())
        std::cout << contents << std::flush;
    else
        write_file(path, contents);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw lvct::input_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dataset_name(const std::string& path)
{
    auto name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (auto dot = name.rfind('.'); dot != std::string::npos && dot > 0)
        name = name.substr(0, dot);
    return name;
}

int run_fit(const std::string& command, const std::string& input, const FitFlags& flags,
            const std::string& format, bool no_pool, const std::string& output)
{
    const auto bytes = read_file(input);
    std::istringstream in(bytes);
    const auto tables = lvct::parse_table_set(in, dataset_name(input));
    const auto cfg = flags.config();
    lvct::validate(cfg);

    const auto fits = lvct::fit_table_set(tables, cfg, flags.threads);
    std::optional<lvct::PooledResult> pooled;
    if (!no_pool)
        pooled = lvct::pool_fits(fits, tables, cfg.level);
    const lvct::PooledResult* combined = pooled ? &*pooled : nullptr;

    std::string report;
    if (format == "json")
        report = lvct::fit_report_json(tables.name, fits, combined).dump(2) + "\n";
    else if (format == "csv")
        report = lvct::fit_report_csv(fits, combined);
    else
        report = lvct::fit_report_table(fits, combined);
    emit(output, report);

    if (!output.empty()) {
        json config = {{"fit", lvct::to_json(cfg)},
                       {"input", input},
                       {"format", format},
                       {"pool", !no_pool}};
        write_file(output + ".manifest.json",
                   lvct::run_manifest(command, config, cfg.sampler.seed, bytes).dump(2) + "\n");
    }

    bool all_converged = true;
    for (const auto& f : fits) {
        if (!f.converged) {
            std::cerr << "warning: table '" << f.label << "' did not converge in " << f.iters
                      << " iterations\n";
            all_converged = false;
        }
    }
    return all_converged ? kExitOk : kExitNonConverged;
}

void finish_study(const std::string& command, const StudyFlags& s, const json& config,
                  const json& summary, const std::string& data_csv)
{
    emit(s.output, summary.dump(2) + "\n");
    if (!s.data.empty())
        write_file(s.data, data_csv);
    if (!s.output.empty())
        write_file(s.output + ".manifest.json",
                   lvct::run_manifest(command, config, s.seed, {}).dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Latent-variable logit model for sets of 2x2 contingency tables"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lvct::kToolVersion);

    auto* fit = app.add_subcommand("fit", "Fit every table, pool, and test independence");
    std::string input, format = "table", fit_output;
    bool no_pool = false;
    FitFlags fit_flags;
    fit->add_option("input", input, "Table file with header trial,y1,n1,y2,n2")->required();
    add_fit_flags(*fit, fit_flags);
    fit->add_option("--format", format, "json, table or csv")
        ->check(CLI::IsMember({"json", "table", "csv"}))
        ->capture_default_str();
    fit->add_flag("--no-pool", no_pool, "Skip the combined estimate");
    fit->add_option("-o,--output", fit_output, "Report path (default: standard output)");

    auto* simulate = app.add_subcommand("simulate", "Run a simulation study");
    simulate->require_subcommand(1);
    auto* corr = simulate->add_subcommand("correlation", "Distribution of the rate correlation");
    StudyFlags corr_flags;
    unsigned corr_threads = 0;
    add_study_flags(*corr, corr_flags, 10000);
    corr->add_option("--threads", corr_threads, "Worker threads (0 = logical CPUs)");

    auto* perf = simulate->add_subcommand("performance", "Estimation and testing performance");
    StudyFlags perf_flags;
    FitFlags perf_fit;
    add_study_flags(*perf, perf_flags, 200);
    add_fit_flags(*perf, perf_fit, false);

    auto* datasets = app.add_subcommand("datasets", "List or export the bundled datasets");
    datasets->require_subcommand(1);
    datasets->add_subcommand("list", "Print bundled dataset names");
    auto* dexport = datasets->add_subcommand("export", "Write a dataset to standard output");
    std::string export_name;
    dexport->add_option("name", export_name, "Dataset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    const auto command = joined_command(argc, argv);
    try {
        if (*fit)
            return run_fit(command, input, fit_flags, format, no_pool, fit_output);

        if (*corr) {
            const auto gen = corr_flags.config();
            const auto result = lvct::correlation_study(gen, corr_threads);
            json config = {{"generator", lvct::to_json(gen)}};
            finish_study(command, corr_flags, config, lvct::correlation_summary_json(gen, result),
                         lvct::correlation_data_csv(gen, result));
            return kExitOk;
        }

        if (*perf) {
            const auto gen = perf_flags.config();
            auto cfg = perf_fit.config();
            cfg.sampler.seed = perf_flags.seed;
            const auto result = lvct::performance_study(gen, cfg, perf_fit.threads);
            json config = {{"generator", lvct::to_json(gen)}, {"fit", lvct::to_json(cfg)}};
            finish_study(command, perf_flags, config,
                         lvct::performance_summary_json(gen, cfg, result),
                         lvct::performance_data_csv(result));
            return result.summary.non_converged_fits ? kExitNonConverged : kExitOk;
        }

        if (datasets->got_subcommand("list")) {
            for (const auto& d : lvct::bundled_datasets())
                std::cout << d.name << '\n';
            return kExitOk;
        }
        if (*dexport) {
            const auto* d = lvct::find_dataset(export_name);
            if (!d) {
                std::cerr << "error: unknown dataset '" << export_name << "'\n";
                return kExitInput;
            }
            std::cout << d->contents << std::flush;
            return kExitOk;
        }
    } catch (const lvct::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
