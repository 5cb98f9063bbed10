// dynmatch: run, verify, generate and benchmark update streams for the
// lookahead maximal-matching maintainer.
//
// Exit codes: 0 success, 1 usage, 2 input/parse, 3 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynmatch/bench.hpp"
#include "dynmatch/stream.hpp"

namespace {

using namespace dynmatch;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitVerify = 3;

struct RunFlags {
    std::string stream_path;
    Algorithm mode = Algorithm::lookahead;
    IndicatorStrategy indicator = IndicatorStrategy::lazy_matrix;
    MateStrategy mate = MateStrategy::dense;
    std::size_t threshold = kDefaultThreshold;
    std::optional<std::size_t> phase_override;
    bool verify = false;
    bool echo_queries = false;
    bool eager_setup = false;
    std::string csv_path;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_csv) {
    const std::map<std::string, Algorithm> modes{{"lookahead", Algorithm::lookahead},
                                                 {"recompute", Algorithm::recompute}};
    const std::map<std::string, IndicatorStrategy> indicators{
        {"matrix", IndicatorStrategy::lazy_matrix}, {"set", IndicatorStrategy::ordered_set}};
    const std::map<std::string, MateStrategy> mates{{"dense", MateStrategy::dense},
                                                    {"map", MateStrategy::ordered_map}};
    cmd->add_option("--stream", f.stream_path, "Update stream file")->required();
    cmd->add_option("--mode", f.mode, "lookahead | recompute")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    cmd->add_option("--indicator", f.indicator, "matrix | set")
        ->transform(CLI::CheckedTransformer(indicators, CLI::ignore_case));
    cmd->add_option("--mate", f.mate, "dense | map")
        ->transform(CLI::CheckedTransformer(mates, CLI::ignore_case));
    cmd->add_option("--threshold", f.threshold, "Small-graph threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--phase-override", f.phase_override, "Fixed batch length per phase")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--echo-queries", f.echo_queries, "Print the answer to every '?' record");
    cmd->add_flag("--eager-setup", f.eager_setup,
                  "Clear the indicator matrix with an explicit n*n pass");
    if (with_csv) {
        cmd->add_flag("--verify", f.verify, "Check against the recompute baseline after every update");
        cmd->add_option("--csv", f.csv_path, "Append the record to this CSV file");
    }
}

RunOptions to_options(const RunFlags& f) {
    RunOptions o;
    o.algorithm = f.mode;
    o.indicator = f.indicator;
    o.mate = f.mate;
    o.indicator_setup = f.eager_setup ? IndicatorSetup::eager_n2 : IndicatorSetup::lazy;
    o.threshold = f.threshold;
    o.phase_override = f.phase_override;
    o.verify = f.verify;
    o.query_out = f.echo_queries ? &std::cout : nullptr;
    return o;
}

std::optional<Stream> load_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open stream file '" << path << "'\n";
        return std::nullopt;
    }
    try {
        return parse_stream(in);
    } catch (const ParseError& e) {
        std::cerr << "error: " << path << ": " << e.what() << '\n';
        return std::nullopt;
    }
}

void append_csv(const std::string& path, const BenchRecord& record) {
    if (path.empty()) {
        write_csv_header(std::cout);
        write_csv_row(std::cout, record);
        return;
    }
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream out(path, std::ios::app);
    if (fresh) {
        write_csv_header(out);
    }
    write_csv_row(out, record);
}

int cmd_run(const RunFlags& flags, bool emit_csv) {
    const std::optional<Stream> stream = load_stream(flags.stream_path);
    if (!stream) {
        return kExitInput;
    }
    const RunOptions opts = to_options(flags);
    if (!stream->header.vertex_count &&
        (opts.mate == MateStrategy::dense ||
         (opts.algorithm == Algorithm::lookahead && opts.indicator == IndicatorStrategy::lazy_matrix))) {
        std::cerr << "error: stream has no 'n' header; sparse ids need --mate map"
                  << (opts.algorithm == Algorithm::lookahead ? " --indicator set" : "") << '\n';
        return kExitInput;
    }
    RunResult result;
    try {
        result = run_stream(*stream, std::filesystem::path(flags.stream_path).filename().string(), opts);
    } catch (const std::bad_alloc&) {
        std::cerr << "error: cannot allocate the indicator matrix; try --indicator set\n";
        return kExitInput;
    }
    if (result.failure) {
        std::cerr << "verification failed after update " << result.failure->update_index << ": "
                  << result.failure->message << '\n';
        return kExitVerify;
    }
    if (emit_csv) {
        append_csv(flags.csv_path, result.record);
    } else {
        std::cerr << "ok: " << result.record.updates << " updates verified, m_max "
                  << result.record.m_max << '\n';
    }
    return kExitOk;
}

struct GenFlags {
    WorkloadConfig cfg;
    bool allow_noop = false;
    std::string out_path;
};

int cmd_gen(GenFlags flags) {
    if (flags.allow_noop && flags.cfg.noop_rate == 0.0) {
        flags.cfg.noop_rate = 0.1;
    }
    Stream stream;
    try {
        stream = generate(flags.cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (flags.out_path.empty()) {
        serialize_stream(std::cout, stream);
    } else {
        std::ofstream out(flags.out_path, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "error: cannot write '" << flags.out_path << "'\n";
            return kExitInput;
        }
        serialize_stream(out, stream);
    }
    std::cerr << "m_max " << replay_max_edges(stream) << '\n';
    return kExitOk;
}

struct ScalingFlags {
    std::vector<std::size_t> sizes;
    unsigned min_exp = 10;
    unsigned max_exp = 16;
    std::uint64_t seed = 1;
    double p_delete = 0.1;
    std::size_t threshold = kDefaultThreshold;
    bool with_tree = false;
    std::string csv_path;
    std::string summary_path;
};

int cmd_scaling(const ScalingFlags& flags) {
    ScalingOptions opts;
    opts.target_edges = flags.sizes;
    if (opts.target_edges.empty()) {
        if (flags.min_exp > flags.max_exp || flags.max_exp > 30) {
            std::cerr << "error: need min-exp <= max-exp <= 30\n";
            return kExitUsage;
        }
        for (unsigned e = flags.min_exp; e <= flags.max_exp; ++e) {
            opts.target_edges.push_back(std::size_t{1} << e);
        }
    }
    opts.seed = flags.seed;
    opts.p_delete = flags.p_delete;
    opts.threshold = flags.threshold;
    opts.include_tree_variant = flags.with_tree;
    const ScalingReport report = run_scaling(opts);

    std::ofstream csv_file;
    std::ostream* csv = &std::cout;
    if (!flags.csv_path.empty()) {
        csv_file.open(flags.csv_path, std::ios::trunc);
        csv = &csv_file;
    }
    write_csv_header(*csv);
    for (const BenchRecord& r : report.records) {
        write_csv_row(*csv, r);
    }
    if (flags.summary_path.empty()) {
        write_scaling_summary(std::cerr, report);
    } else {
        std::ofstream summary(flags.summary_path, std::ios::trunc);
        write_scaling_summary(summary, report);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fully dynamic maximal matching with lookahead"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "Run a stream and emit a CSV record");
    add_run_flags(run, run_flags, /*with_csv=*/true);

    RunFlags verify_flags;
    CLI::App* verify = app.add_subcommand("verify", "Run a stream with per-update verification");
    add_run_flags(verify, verify_flags, /*with_csv=*/false);

    GenFlags gen_flags;
    CLI::App* gen = app.add_subcommand("gen", "Generate a seeded workload stream");
    gen->add_option("--n", gen_flags.cfg.n, "Vertex count")->check(CLI::Range(2, 1 << 24));
    gen->add_option("--updates", gen_flags.cfg.updates, "Number of update events");
    gen->add_option("--seed", gen_flags.cfg.seed, "Generator seed");
    gen->add_option("--p-delete", gen_flags.cfg.p_delete, "Delete probability")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--query-rate", gen_flags.cfg.query_rate, "Expected queries per update")
        ->check(CLI::Range(0.0, 10.0));
    gen->add_flag("--allow-noop", gen_flags.allow_noop, "Inject idempotent no-op updates");
    gen->add_option("--noop-rate", gen_flags.cfg.noop_rate, "No-op probability per update")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--out", gen_flags.out_path, "Output file (default stdout)");

    ScalingFlags scaling_flags;
    CLI::App* scaling = app.add_subcommand("scaling", "Doubling-series cost comparison");
    scaling->add_option("--sizes", scaling_flags.sizes, "Target peak edge counts")->delimiter(',');
    scaling->add_option("--min-exp", scaling_flags.min_exp, "Smallest size as a power of two");
    scaling->add_option("--max-exp", scaling_flags.max_exp, "Largest size as a power of two");
    scaling->add_option("--seed", scaling_flags.seed, "Generator seed");
    scaling->add_option("--p-delete", scaling_flags.p_delete, "Delete probability")
        ->check(CLI::Range(0.0, 0.45));
    scaling->add_option("--threshold", scaling_flags.threshold, "Small-graph threshold")
        ->check(CLI::PositiveNumber);
    scaling->add_flag("--with-tree", scaling_flags.with_tree,
                      "Also run the tree-backed mate store and indicator");
    scaling->add_option("--csv", scaling_flags.csv_path, "CSV output (default stdout)");
    scaling->add_option("--summary", scaling_flags.summary_path,
                        "Doubling summary output (default stderr)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*run) {
        return cmd_run(run_flags, true);
    }
    if (*verify) {
        verify_flags.verify = true;
        return cmd_run(verify_flags, false);
    }
    if (*gen) {
        return cmd_gen(gen_flags);
    }
    return cmd_scaling(scaling_flags);
}
