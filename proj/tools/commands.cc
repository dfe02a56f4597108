/*******************************************************************************
 * @file:   commands.cc
 * @brief:  Subcommands of the batchcut tool: partition, compare, trace, sweep,
 *          generate and match.
 ******************************************************************************/
#include "commands.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "batchcut/costmodel.h"
#include "batchcut/dataset.h"
#include "batchcut/oracle.h"
#include "batchcut/partition.h"
#include "batchcut/pipeline.h"
#include "batchcut/report.h"
#include "batchcut/simgraph.h"
#include "batchcut/spectral.h"
#include "batchcut/theory.h"

namespace batchcut::cli {
namespace {

// Raised for argument combinations CLI11 cannot express; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SizeArgs {
    std::size_t k          = 0;
    std::size_t batch_size = 0;
};

struct ClusterArgs {
    std::size_t           k_prime  = 0;
    std::uint64_t         seed     = 0;
    std::size_t           max_iter = 100;
    std::optional<double> heavy_cutoff;
    bool                  plusplus = false;
};

struct CostArgs {
    std::int64_t sentence_length     = 32;
    std::int64_t hidden_dim          = 768;
    bool         include_target      = false;
    bool         include_integration = false;

    [[nodiscard]] CostParams params() const {
        return {sentence_length, hidden_dim, include_target, include_integration};
    }
};

std::string fixed(const double value, const int precision = 6) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
    return buffer;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open " + path + " for writing");
    }
    return out;
}

void add_size_options(CLI::App* cmd, SizeArgs& args) {
    auto* group = cmd->add_option_group("batch count", "exactly one of --k / --batch-size");
    group->add_option("--k", args.k, "Number of batches")->check(CLI::PositiveNumber);
    group->add_option("--batch-size", args.batch_size, "Samples per batch; k = ceil(n / batch size)")
        ->check(CLI::PositiveNumber);
    group->require_option(1);
}

void add_cluster_options(CLI::App* cmd, ClusterArgs& args) {
    cmd->add_option("--k-prime", args.k_prime, "Embedding dimension (default min(8, k, n))")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args.seed, "Random seed")->capture_default_str();
    cmd->add_option("--max-iter", args.max_iter, "k-means iteration limit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--heavy-cutoff", args.heavy_cutoff, "Skip descriptions held by more than this fraction of samples")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--plusplus", args.plusplus, "k-means++ initialization instead of uniform sampling");
}

void add_cost_options(CLI::App* cmd, CostArgs& args) {
    cmd->add_option("--sentence-length", args.sentence_length, "L in the cost model")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--hidden-dim", args.hidden_dim, "D in the cost model")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_flag("--include-target", args.include_target, "Add the target-sentence term");
    cmd->add_flag("--include-integration", args.include_integration, "Add the integration term");
}

BatchID resolve_k(const std::size_t n, const SizeArgs& args) {
    if (args.k > 0) {
        if (args.k > n) {
            throw InvalidArgument("--k " + std::to_string(args.k) + " exceeds the number of samples " + std::to_string(n));
        }
        return static_cast<BatchID>(args.k);
    }
    return batches_for_size(n, args.batch_size);
}

SpectralPartitionOptions spectral_options(const ClusterArgs& args, const std::size_t n, std::ostream& err) {
    SpectralPartitionOptions options;
    options.k_prime = args.k_prime;
    if (options.k_prime > n) {
        err << "warning: --k-prime " << options.k_prime << " exceeds n = " << n << "; using " << n << "\n";
        options.k_prime = n;
    }
    options.seed          = args.seed;
    options.max_iter      = args.max_iter;
    options.heavy_cutoff  = args.heavy_cutoff;
    options.plusplus_init = args.plusplus;
    return options;
}

void warn_if_unconverged(const SpectralEmbedding& embedding, std::ostream& err) {
    if (!embedding.converged) {
        err << "warning: eigensolver stopped at max residual " << embedding.max_residual
            << " above tolerance; using the current Ritz vectors\n";
    }
}

struct Summary {
    double mean = 0.0;
    double std  = 0.0;
};

Summary summarize(const std::vector<double>& values) {
    Summary s;
    if (values.empty()) {
        return s;
    }
    for (const double v: values) {
        s.mean += v;
    }
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v: values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

// partition ------------------------------------------------------------------

struct PartitionArgs {
    std::string dataset;
    SizeArgs    size;
    ClusterArgs cluster;
    CostArgs    cost;
    std::string out_dir;
    std::string embedding_out;
    std::string graph_out;
};

void setup_partition(CLI::App* cmd, PartitionArgs& args) {
    cmd->add_option("--dataset", args.dataset, "JSONL dataset")->required();
    add_size_options(cmd, args.size);
    add_cluster_options(cmd, args.cluster);
    add_cost_options(cmd, args.cost);
    cmd->add_option("--out", args.out_dir, "Output directory for partition.json and report.json")->required();
    cmd->add_option("--embedding-out", args.embedding_out, "Also write the embedding as CSV");
    cmd->add_option("--graph-out", args.graph_out, "Also write the similarity graph as an edge list");
}

int run_partition(const PartitionArgs& args, std::ostream& out, std::ostream& err) {
    const Dataset dataset = load_dataset(args.dataset);
    const BatchID k       = resolve_k(dataset.size(), args.size);
    const auto    result  = spectral_partition(dataset, k, spectral_options(args.cluster, dataset.size(), err));
    warn_if_unconverged(result.embedding, err);

    const auto report = make_report(dataset, result.graph, result.partition(), args.cost.params());

    std::filesystem::create_directories(args.out_dir);
    const std::filesystem::path dir(args.out_dir);
    {
        auto file = open_output((dir / "partition.json").string());
        write_partition_json(file, result.partition(), dataset);
    }
    {
        auto file = open_output((dir / "report.json").string());
        write_report_json(file, report);
    }
    if (!args.embedding_out.empty()) {
        auto file = open_output(args.embedding_out);
        write_embedding_csv(file, result.embedding);
    }
    if (!args.graph_out.empty()) {
        auto file = open_output(args.graph_out);
        write_edge_list(file, result.graph);
    }

    out << "samples " << dataset.size() << ", batches " << k << ", k' " << result.embedding.k_prime << "\n";
    out << "k-means " << result.kmeans.iterations << " iterations (" << to_string(result.kmeans.stop_reason) << ")\n";
    out << "objective " << report.objective << ", cut weight " << report.cut_weight << "\n";
    return kExitOk;
}

// compare --------------------------------------------------------------------

struct CompareArgs {
    std::string              dataset;
    SizeArgs                 size;
    ClusterArgs              cluster;
    std::vector<std::string> methods{"spectral", "random", "greedy", "brute"};
    std::size_t              seeds = 10;
    std::string              csv_out;
};

void setup_compare(CLI::App* cmd, CompareArgs& args) {
    cmd->add_option("--dataset", args.dataset, "JSONL dataset")->required();
    add_size_options(cmd, args.size);
    add_cluster_options(cmd, args.cluster);
    cmd->add_option("--methods", args.methods, "Comma-separated subset of spectral,random,greedy,brute")
        ->delimiter(',')
        ->check(CLI::IsMember({"spectral", "random", "greedy", "brute"}))
        ->capture_default_str();
    cmd->add_option("--seeds", args.seeds, "Number of random-baseline seeds")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--csv-out", args.csv_out, "Write the CSV table here instead of standard output");
}

struct CompareRow {
    std::string method;
    bool        skipped = false;
    Summary     objective;
    double      cut     = 0.0;
    double      bound   = 0.0;
    double      bound_s = 0.0;
    double      speedup = 0.0;
};

int run_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
    const Dataset dataset = load_dataset(args.dataset);
    const auto    n       = dataset.size();
    const BatchID k       = resolve_k(n, args.size);
    const auto    graph   = build_graph(dataset, args.cluster.heavy_cutoff);

    const auto measure = [&](const std::string& method, const std::vector<Partition>& partitions) {
        CompareRow           row{method};
        std::vector<double>  objectives;
        for (const auto& p: partitions) {
            objectives.push_back(static_cast<double>(objective(dataset, p)));
            row.cut += static_cast<double>(cut_weight(graph, p));
            row.bound += theorem1_bound(dataset, graph, p, BoundCoefficient::corrected_s_minus_1);
            row.bound_s += theorem1_bound(dataset, graph, p, BoundCoefficient::paper_s);
        }
        const auto count = static_cast<double>(partitions.size());
        row.objective    = summarize(objectives);
        row.cut /= count;
        row.bound /= count;
        row.bound_s /= count;
        return row;
    };

    std::vector<Partition> random;
    for (std::size_t s = 0; s < args.seeds; ++s) {
        random.push_back(random_partition(n, k, args.cluster.seed + s));
    }
    const CompareRow baseline = measure("random", random);

    std::vector<CompareRow> rows;
    for (const auto& method: args.methods) {
        if (method == "random") {
            rows.push_back(baseline);
        } else if (method == "spectral") {
            const auto result = spectral_partition(dataset, graph, k, spectral_options(args.cluster, n, err));
            warn_if_unconverged(result.embedding, err);
            rows.push_back(measure(method, {result.partition()}));
        } else if (method == "greedy") {
            rows.push_back(measure(method, {greedy_partition(dataset, k)}));
        } else {
            try {
                rows.push_back(measure(method, {brute_force_optimal(dataset, k).partition}));
            } catch (const InstanceTooLarge& e) {
                err << "note: brute force skipped: " << e.what() << "\n";
                rows.push_back({method, true});
            }
        }
        if (!rows.back().skipped) {
            rows.back().speedup = rows.back().objective.mean > 0 ? baseline.objective.mean / rows.back().objective.mean : 1.0;
        }
    }

    std::ofstream csv_file;
    if (!args.csv_out.empty()) {
        csv_file = open_output(args.csv_out);
    }
    std::ostream& csv = args.csv_out.empty() ? out : csv_file;
    csv << "method,objective,objective_std,cut_weight,theorem1_bound,theorem1_bound_paper,speedup_vs_random\n";
    for (const auto& row: rows) {
        if (row.skipped) {
            csv << row.method << ",skipped,,,,,\n";
            continue;
        }
        csv << row.method << ',' << fixed(row.objective.mean) << ',' << fixed(row.objective.std) << ',' << fixed(row.cut)
            << ',' << fixed(row.bound) << ',' << fixed(row.bound_s) << ',' << fixed(row.speedup) << '\n';
    }
    if (args.csv_out.empty()) {
        out << '\n';
    }

    char line[256];
    std::snprintf(line, sizeof(line), "%-10s %-22s %12s %12s %12s %9s\n", "method", "objective", "cut", "bound(s-1)", "bound(s)", "speedup");
    out << line;
    for (const auto& row: rows) {
        if (row.skipped) {
            std::snprintf(line, sizeof(line), "%-10s %-22s\n", row.method.c_str(), "skipped");
        } else {
            const std::string objective = row.method == "random"
                                              ? fixed(row.objective.mean, 2) + " ± " + fixed(row.objective.std, 2)
                                              : fixed(row.objective.mean, 0);
            std::snprintf(
                line, sizeof(line), "%-10s %-22s %12.2f %12.2f %12.2f %9.3f\n", row.method.c_str(), objective.c_str(), row.cut,
                row.bound, row.bound_s, row.speedup
            );
        }
        out << line;
    }
    return kExitOk;
}

// trace ----------------------------------------------------------------------

struct TraceArgs {
    std::string dataset;
    SizeArgs    size;
    ClusterArgs cluster;
    std::string trace_out;
};

void setup_trace(CLI::App* cmd, TraceArgs& args) {
    cmd->add_option("--dataset", args.dataset, "JSONL dataset")->required();
    add_size_options(cmd, args.size);
    add_cluster_options(cmd, args.cluster);
    cmd->add_option("--trace-out", args.trace_out, "Trace CSV path (default: standard output)");
}

int run_trace(const TraceArgs& args, std::ostream& out, std::ostream& err) {
    const Dataset dataset = load_dataset(args.dataset);
    const BatchID k       = resolve_k(dataset.size(), args.size);
    auto          options = spectral_options(args.cluster, dataset.size(), err);
    options.trace         = true;
    const auto result     = spectral_partition(dataset, k, options);
    warn_if_unconverged(result.embedding, err);
    const auto& trace = *result.kmeans.trace;

    std::ostream* message = &out;
    if (args.trace_out.empty()) {
        write_trace_csv(out, trace, dataset);
        message = &err;
    } else {
        auto file = open_output(args.trace_out);
        write_trace_csv(file, trace, dataset);
    }

    *message << "iterations " << trace.size() << "\n";
    try {
        const double r = correlation(trace, dataset);
        *message << "pearson_r " << fixed(r) << "\n";
    } catch (const UndefinedCorrelation& e) {
        *message << "pearson_r undefined (" << e.what() << ")\n";
    }
    return kExitOk;
}

// sweep ----------------------------------------------------------------------

struct SweepArgs {
    std::string              dataset;
    std::vector<std::size_t> batch_sizes;
    std::vector<std::size_t> caps;
    std::size_t              batch_size = 16;
    std::size_t              seeds      = 10;
    ClusterArgs              cluster;
    CostArgs                 cost;
    std::string              out_path;
};

void setup_sweep(CLI::App* cmd, SweepArgs& args) {
    cmd->add_option("--dataset", args.dataset, "JSONL dataset")->required();
    auto* axis = cmd->add_option_group("axis", "exactly one of --batch-sizes / --caps");
    axis->add_option("--batch-sizes", args.batch_sizes, "Comma-separated batch sizes")->delimiter(',')->expected(0, -1);
    axis->add_option("--caps", args.caps, "Comma-separated per-sample description caps")->delimiter(',')->expected(0, -1);
    axis->require_option(1);
    cmd->add_option("--batch-size", args.batch_size, "Batch size used with --caps")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seeds", args.seeds, "Number of random-baseline seeds")->check(CLI::PositiveNumber)->capture_default_str();
    add_cluster_options(cmd, args.cluster);
    add_cost_options(cmd, args.cost);
    cmd->add_option("--out", args.out_path, "CSV path (default: standard output)");
}

int run_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    const bool  by_cap = !args.caps.empty();
    const auto& values = by_cap ? args.caps : args.batch_sizes;
    if (values.empty()) {
        throw UsageError("sweep axis list is empty");
    }
    for (const std::size_t v: values) {
        if (v == 0) {
            throw UsageError("sweep axis values must be positive");
        }
    }

    const Dataset    base   = load_dataset(args.dataset);
    const CostParams params = args.cost.params();
    std::optional<SimilarityGraph> shared_graph;
    if (!by_cap) {
        shared_graph = build_graph(base, args.cluster.heavy_cutoff);
    }

    std::vector<SweepRow> rows;
    for (const std::size_t value: values) {
        const Dataset     dataset    = by_cap ? cap_descriptions(base, value) : base;
        const std::size_t batch_size = by_cap ? args.batch_size : value;
        const std::size_t n          = dataset.size();
        if (batch_size > n) {
            throw InvalidArgument("batch size " + std::to_string(batch_size) + " exceeds the number of samples");
        }
        const BatchID k = batches_for_size(n, batch_size);

        SimilarityGraph graph  = shared_graph ? *shared_graph : build_graph(dataset, args.cluster.heavy_cutoff);
        const auto      result = spectral_partition(dataset, std::move(graph), k, spectral_options(args.cluster, n, err));
        warn_if_unconverged(result.embedding, err);

        std::vector<double> random_objectives;
        std::vector<double> random_costs;
        for (std::size_t s = 0; s < args.seeds; ++s) {
            const auto p = random_partition(n, k, args.cluster.seed + s);
            random_objectives.push_back(static_cast<double>(objective(dataset, p)));
            random_costs.push_back(partition_cost(dataset, p, params).total());
        }
        const Summary random_objective = summarize(random_objectives);

        rows.push_back({
            by_cap ? "description_cap" : "batch_size",
            static_cast<std::int64_t>(value),
            static_cast<std::int64_t>(batch_size),
            objective(dataset, result.partition()),
            random_objective.mean,
            random_objective.std,
            partition_cost(dataset, result.partition(), params).total(),
            summarize(random_costs).mean,
        });
    }

    if (args.out_path.empty()) {
        write_sweep_csv(out, rows);
    } else {
        auto file = open_output(args.out_path);
        write_sweep_csv(file, rows);
    }
    return kExitOk;
}

// generate -------------------------------------------------------------------

struct GenerateArgs {
    PlantedConfig config;
    std::string   out_path;
    std::string   truth_path;
};

void setup_generate(CLI::App* cmd, GenerateArgs& args) {
    cmd->add_option("--n", args.config.n, "Number of samples")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--clusters", args.config.k_clusters, "Number of planted clusters")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--shared", args.config.shared_per_cluster, "Shared descriptions per cluster")->capture_default_str();
    cmd->add_option("--private", args.config.private_per_sample, "Private descriptions per sample")->capture_default_str();
    cmd->add_option("--noise", args.config.noise_overlap, "Probability of one cross-cluster description")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--seed", args.config.seed, "Random seed")->capture_default_str();
    cmd->add_option("--out", args.out_path, "Output JSONL dataset")->required();
    cmd->add_option("--truth", args.truth_path, "Also write the planted partition as JSON");
}

int run_generate(const GenerateArgs& args, std::ostream& out, std::ostream&) {
    const auto [dataset, planted] = generate_planted(args.config);
    write_dataset(args.out_path, dataset);
    if (!args.truth_path.empty()) {
        auto file = open_output(args.truth_path);
        write_partition_json(file, planted, dataset);
    }
    out << "wrote " << dataset.size() << " samples, " << dataset.num_descriptions() << " descriptions\n";
    return kExitOk;
}

// match ----------------------------------------------------------------------

struct MatchArgs {
    std::string texts_path;
    std::string lexicon_path;
    std::string out_path;
};

void setup_match(CLI::App* cmd, MatchArgs& args) {
    cmd->add_option("--texts", args.texts_path, "Text file, one sample per line")->required()->check(CLI::ExistingFile);
    cmd->add_option("--lexicon", args.lexicon_path, "TSV of trigger phrase and description id")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_path, "Output JSONL dataset")->required();
}

int run_match(const MatchArgs& args, std::ostream& out, std::ostream&) {
    std::ifstream in(args.texts_path);
    if (!in) {
        throw Error("cannot open " + args.texts_path);
    }
    std::vector<std::string> texts;
    for (std::string line; std::getline(in, line);) {
        texts.push_back(line);
    }
    const Dataset dataset = match_triggers(texts, load_lexicon(args.lexicon_path));
    write_dataset(args.out_path, dataset);
    out << "matched " << dataset.total_set_size() << " descriptions over " << dataset.size() << " samples\n";
    return kExitOk;
}

} // namespace

int run(const int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Group training samples into equal-size batches that share knowledge descriptions."};
    app.name("batchcut");
    app.require_subcommand(1);
    app.set_version_flag("--version", "batchcut 0.1.0");

    PartitionArgs partition_args;
    CompareArgs   compare_args;
    TraceArgs     trace_args;
    SweepArgs     sweep_args;
    GenerateArgs  generate_args;
    MatchArgs     match_args;

    auto* partition = app.add_subcommand("partition", "Spectral partition of a dataset; writes partition and report JSON");
    auto* compare   = app.add_subcommand("compare", "Compare spectral, random, greedy and brute-force partitions");
    auto* trace     = app.add_subcommand("trace", "Per-iteration k-means trace and its correlation statistic");
    auto* sweep     = app.add_subcommand("sweep", "Speedup over random across batch sizes or description caps");
    auto* generate  = app.add_subcommand("generate", "Write a planted synthetic dataset");
    auto* match     = app.add_subcommand("match", "Build a dataset by trigger-phrase matching");
    setup_partition(partition, partition_args);
    setup_compare(compare, compare_args);
    setup_trace(trace, trace_args);
    setup_sweep(sweep, sweep_args);
    setup_generate(generate, generate_args);
    setup_match(match, match_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (partition->parsed()) {
            return run_partition(partition_args, out, err);
        }
        if (compare->parsed()) {
            return run_compare(compare_args, out, err);
        }
        if (trace->parsed()) {
            return run_trace(trace_args, out, err);
        }
        if (sweep->parsed()) {
            return run_sweep(sweep_args, out, err);
        }
        if (generate->parsed()) {
            return run_generate(generate_args, out, err);
        }
        return run_match(match_args, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace batchcut::cli
