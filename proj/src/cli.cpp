#include "wignerchaos/cli.hpp"

#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "wignerchaos/error.hpp"
#include "wignerchaos/experiment.hpp"
#include "wignerchaos/io.hpp"
#include "wignerchaos/moment.hpp"
#include "wignerchaos/pairing.hpp"
#include "wignerchaos/rmsim.hpp"

namespace wigner::cli {

namespace {

int default_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<std::vector<int>> parse_words(const std::string& text) {
    std::vector<std::vector<int>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw UsageError("--words: empty word in '" + text + "'", kExitUsage);
        out.push_back(io::parse_word(item));
    }
    return out;
}

std::string format_from_path(const std::string& path, const std::string& fallback) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return "csv";
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return "json";
    return fallback;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
    RunConfig cfg;
    cfg.jobs = default_jobs();
    CLI::App app{"Exact moments of multiple Wigner integrals with step kernels", "wignerchaos"};
    app.set_version_flag("--version", std::string("wignerchaos ") + kVersion);
    bool schema = false;
    app.add_flag("--schema", schema, "Print JSON schemas for kernel files and reports");
    app.require_subcommand(0, 1);

    std::string format;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_path, "Output file (written atomically); stdout if omitted");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--jobs", cfg.jobs, "Worker threads (default: available parallelism)")
            ->check(CLI::Range(1, 1024));
    };

    auto* pairings = app.add_subcommand("pairings", "Enumerate pairings as JSON lines");
    pairings->add_option("--n", cfg.n, "Ground set size")->check(CLI::Range(0, kMaxNcPairingsSize));
    pairings->add_flag("--nc", cfg.noncrossing, "Non-crossing pairings only");
    pairings->add_option("--blocks", cfg.blocks, "Block sizes, e.g. 2,2,2,2")->delimiter(',');
    pairings->add_flag("--respectful", cfg.respectful_only, "Only pairings respecting --blocks");
    pairings->add_option("--out", cfg.out_path, "Output file");

    std::string word_text;
    auto* moment = app.add_subcommand("moment", "Joint moment of Wigner (or Wiener) integrals");
    moment->add_option("--kernel", cfg.kernel_paths, "Kernel JSON file (repeat; letter i = i-th file)")
        ->required()
        ->check(CLI::ExistingFile);
    moment->add_option("--word", word_text, "Index word, e.g. 1212 or 1,2,10")->required();
    moment->add_option("--engine", cfg.engine, "free or classical")->check(CLI::IsMember({"free", "classical"}));
    moment->add_flag("--contributions", cfg.contributions, "Include per-pairing contributions");
    bool csv = false;
    moment->add_flag("--csv", csv, "Emit a single CSV row");
    moment->add_flag("--naive", cfg.naive, "Evaluate pairing integrals by naive summation");
    add_common(moment);

    std::string ks_text = "1,4,16,64";
    auto* experiment = app.add_subcommand("experiment", "Convergence experiment on a kernel family");
    experiment->add_option("--family", cfg.family, "tensor_sum, correlated_pair or static_bad")
        ->check(CLI::IsMember({"tensor_sum", "correlated_pair", "static_bad"}));
    experiment->add_option("--mode", cfg.mode, "component, joint or transfer")
        ->check(CLI::IsMember({"component", "joint", "transfer"}));
    experiment->add_option("--order", cfg.order, "Chaos order n")->check(CLI::Range(1, 8));
    experiment->add_option("--rho", cfg.rho, "Correlation for correlated_pair")->check(CLI::Range(-1.0, 1.0));
    experiment->add_option("--ks", cfg.ks, "Increasing k values, e.g. 1,4,16,64")->delimiter(',');
    experiment->add_option("--max-order", cfg.max_order, "Longest word tracked")->check(CLI::Range(1, 8));
    add_common(experiment);

    std::string words_text;
    auto* sim = app.add_subcommand("sim", "GUE Monte Carlo trace moments");
    sim->add_option("--dim", cfg.dim, "Matrix size N")->check(CLI::Range(2, 1 << 14));
    sim->add_option("--samples", cfg.samples, "Number of samples")->check(CLI::Range(1, 1 << 24));
    sim->add_option("--seed", cfg.seed, "RNG seed");
    sim->add_option("--cov", cfg.cov_path, "Covariance JSON file")->check(CLI::ExistingFile);
    sim->add_option("--words", words_text, "Comma-separated words, e.g. 1212,1122")->required();
    add_common(sim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), kExitOk);
    } catch (const CLI::CallForAllHelp&) {
        throw UsageError(app.help("", CLI::AppFormatMode::All), kExitOk);
    } catch (const CLI::CallForVersion&) {
        throw UsageError(std::string("wignerchaos ") + kVersion + "\n", kExitOk);
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.get_name()) + ": " + e.what() + "\n" + "Run with --help for usage.\n",
                         kExitUsage);
    }

    if (schema) {
        cfg.subcommand = "schema";
        return cfg;
    }
    if (app.get_subcommands().empty()) throw UsageError(app.help(), kExitUsage);
    cfg.subcommand = app.get_subcommands().front()->get_name();

    try {
        if (cfg.subcommand == "pairings") {
            if (!cfg.blocks.empty()) {
                int total = 0;
                for (int b : cfg.blocks) {
                    if (b < 1) throw UsageError("--blocks: sizes must be positive", kExitUsage);
                    total += b;
                }
                if (pairings->count("--n") && cfg.n != total) {
                    throw UsageError("--n disagrees with the total of --blocks", kExitUsage);
                }
                cfg.n = total;
            } else if (!pairings->count("--n")) {
                throw UsageError("pairings: --n or --blocks is required", kExitUsage);
            }
            if (cfg.respectful_only && cfg.blocks.empty()) {
                throw UsageError("--respectful requires --blocks", kExitUsage);
            }
            if (cfg.n % 2 != 0) throw UsageError("pairings: n must be even", kExitUsage);
            if (!cfg.noncrossing && cfg.n > kMaxAllPairingsSize) {
                throw UsageError("pairings: n > 20 requires --nc", kExitUsage);
            }
        } else if (cfg.subcommand == "moment") {
            cfg.word = io::parse_word(word_text);
            for (int letter : cfg.word) {
                if (letter < 1 || letter > static_cast<int>(cfg.kernel_paths.size())) {
                    throw UsageError("--word letter " + std::to_string(letter) + " has no matching --kernel",
                                     kExitUsage);
                }
            }
            cfg.format = csv ? "csv" : format_from_path(cfg.out_path, format.empty() ? "json" : format);
        } else if (cfg.subcommand == "experiment") {
            if (cfg.ks.empty()) throw UsageError("--ks must be nonempty", kExitUsage);
            for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
                if (cfg.ks[i] < 1 || (i && cfg.ks[i] <= cfg.ks[i - 1])) {
                    throw UsageError("--ks must be positive and strictly increasing", kExitUsage);
                }
            }
            cfg.format = format.empty() ? format_from_path(cfg.out_path, "csv") : format;
        } else if (cfg.subcommand == "sim") {
            cfg.words = parse_words(words_text);
            cfg.format = format.empty() ? format_from_path(cfg.out_path, "json") : format;
        }
    } catch (const Error& e) {
        throw UsageError(std::string(e.what()) + "\n", kExitUsage);
    }
    return cfg;
}

namespace {

void emit(const RunConfig& cfg, std::ostream& out, const std::string& content) {
    if (cfg.out_path.empty()) {
        out << content;
        out.flush();
    } else {
        io::atomic_write(cfg.out_path, content);
    }
}

void run_pairings(const RunConfig& cfg, std::ostream& out) {
    const BlockStructure blocks =
        cfg.blocks.empty() ? BlockStructure::singletons(cfg.n) : BlockStructure(cfg.blocks);
    auto stream = cfg.respectful_only
                      ? (cfg.noncrossing ? enumerate_respectful_nc(blocks) : enumerate_respectful(blocks))
                      : (cfg.noncrossing ? enumerate_nc_pairings(cfg.n) : enumerate_pairings(cfg.n));
    std::string text;
    while (auto pi = stream.next()) {
        const bool resp = respects(*pi, blocks);
        io::json line = {{"pairs", io::pairing_to_json(*pi)},
                         {"noncrossing", is_noncrossing(*pi)},
                         {"respects", resp},
                         {"connected", resp && is_connected(*pi, blocks)}};
        text += line.dump() + "\n";
    }
    emit(cfg, out, text);
}

void run_moment(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    MomentRequest req;
    for (const auto& path : cfg.kernel_paths) req.kernels.push_back(io::read_kernel(path));
    req.word = cfg.word;
    const EvalOptions opts{cfg.naive ? Strategy::Naive : Strategy::Auto, cfg.jobs};
    const MomentReport report =
        cfg.engine == "classical" ? classical_joint_moment(req, opts) : free_joint_moment(req, opts);
    for (const auto& w : report.warnings) err << "warning: " << w << "\n";
    if (cfg.format == "csv") {
        emit(cfg, out, io::moment_report_csv_header() + "\n" + io::moment_report_csv_row(report) + "\n");
    } else {
        emit(cfg, out, io::moment_report_to_json(report, cfg.contributions).dump(2) + "\n");
    }
}

void run_experiment(const RunConfig& cfg, std::ostream& out) {
    const FamilyKind kind = parse_family_kind(cfg.family);
    KernelFamily family = kind == FamilyKind::TensorSum      ? KernelFamily::tensor_sum(cfg.order)
                          : kind == FamilyKind::StaticBad    ? KernelFamily::static_bad(cfg.order)
                                                             : KernelFamily::correlated_pair(cfg.order, cfg.rho);
    const EvalOptions opts{Strategy::Auto, cfg.jobs};
    ConvergenceReport report;
    if (cfg.mode == "component") {
        report = run_component_convergence(family, cfg.ks, opts);
    } else if (cfg.mode == "joint") {
        report = run_joint_convergence({family}, family.limit_covariance(), cfg.ks, cfg.max_order, opts);
    } else {
        report = run_transfer_principle({family}, cfg.ks, cfg.max_order, opts);
    }
    emit(cfg, out,
         cfg.format == "csv" ? io::convergence_report_to_csv(report)
                             : io::convergence_report_to_json(report).dump(2) + "\n");
}

void run_sim(const RunConfig& cfg, std::ostream& out) {
    SimConfig sim;
    sim.dim = cfg.dim;
    sim.samples = cfg.samples;
    sim.seed = cfg.seed;
    sim.jobs = cfg.jobs;
    if (!cfg.cov_path.empty()) {
        sim.covariance = io::covariance_from_json(io::parse_json_text(io::read_text(cfg.cov_path)));
    } else {
        int d = 1;
        for (const auto& w : cfg.words) {
            for (int letter : w) d = std::max(d, letter);
        }
        sim.covariance = CovarianceMatrix::identity(d);
    }
    const auto rows = empirical_trace_moments(sim, cfg.words);
    emit(cfg, out,
         cfg.format == "csv" ? io::empirical_moments_to_csv(rows)
                             : io::empirical_moments_to_json(rows, sim).dump(2) + "\n");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.subcommand == "schema") {
            out << io::schemas().dump(2) << "\n";
        } else if (cfg.subcommand == "pairings") {
            run_pairings(cfg, out);
        } else if (cfg.subcommand == "moment") {
            run_moment(cfg, out, err);
        } else if (cfg.subcommand == "experiment") {
            run_experiment(cfg, out);
        } else if (cfg.subcommand == "sim") {
            run_sim(cfg, out);
        } else {
            err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
            return kExitUsage;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(argc, argv);
    } catch (const UsageError& e) {
        (e.exit_code() == kExitOk ? out : err) << e.what();
        return e.exit_code();
    }
    return run(cfg, out, err);
}

}  // namespace wigner::cli
