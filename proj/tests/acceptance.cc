/*******************************************************************************
 * @file:   acceptance.cc
 * @brief:  Acceptance suite. Prints one PASS/FAIL line per criterion and exits
 *          non-zero if any criterion fails.
 ******************************************************************************/
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "batchcut/capkmeans.h"
#include "batchcut/costmodel.h"
#include "batchcut/oracle.h"
#include "batchcut/pipeline.h"
#include "batchcut/simgraph.h"
#include "batchcut/spectral.h"
#include "batchcut/theory.h"
#include "commands.h"
#include "support.h"

using namespace batchcut;

namespace {

struct Outcome {
    bool        pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(const char* fmt, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof(buffer), fmt, args...);
    return buffer;
}

Partition shuffled_partition(const std::size_t n, const BatchID k, std::mt19937_64& rng) {
    std::vector<SampleID> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto           caps = make_capacities(n, k);
    std::vector<BatchID> assignment(n);
    std::size_t          pos = 0;
    for (BatchID b = 0; b < k; ++b) {
        for (SampleID c = 0; c < caps[b]; ++c) {
            assignment[perm[pos++]] = b;
        }
    }
    return {assignment, caps};
}

// 1 ---------------------------------------------------------------------------

Outcome fixture_counting() {
    const auto start   = Clock::now();
    const auto dataset = testing::counting_fixture();
    const auto bad     = objective(dataset, testing::batches({{0, 2}, {1, 3}}, 4));
    const auto good    = objective(dataset, testing::batches({{0, 1}, {2, 3}}, 4));

    const BatchID k    = batches_for_size(dataset.size(), 2);
    int           hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto result = spectral_partition(dataset, k, {.seed = seed});
        hits += objective(dataset, result.partition()) == 4 ? 1 : 0;
    }
    const double elapsed = seconds_since(start);
    return {
        bad == 7 && good == 4 && hits >= 45 && elapsed < 1.0,
        format("objectives %lld/%lld, spectral reaches 4 in %d/50 seeds, %.3f s", static_cast<long long>(bad),
               static_cast<long long>(good), hits, elapsed)
    };
}

// 2 and 3 share their instances -----------------------------------------------

struct IdentityStats {
    int    instances       = 0;
    int    partitions      = 0;
    int    brute_instances = 0;
    int    identity_fail   = 0;
    int    bound_fail      = 0;
    double worst_identity  = 0.0;
};

const IdentityStats& identity_stats() {
    static const IdentityStats stats = [] {
        IdentityStats   s;
        std::mt19937_64 rng(20240501);
        for (int round = 0; round < 200; ++round) {
            const std::size_t size    = std::array<std::size_t, 3>{2, 4, 5}[rng() % 3];
            const std::size_t k       = 1 + rng() % (40 / size);
            const std::size_t n       = size * k;
            const double      density = 0.05 + 0.45 * static_cast<double>(rng() % 1000) / 1000.0;
            const auto        dataset = testing::random_dataset(n, static_cast<DescriptionID>(1 + rng() % 30), density, rng);
            const auto        graph   = build_graph(dataset);
            const auto        kb      = static_cast<BatchID>(k);

            std::vector<Partition> partitions;
            partitions.push_back(shuffled_partition(n, kb, rng));
            partitions.push_back(random_partition(n, kb, rng()));
            partitions.push_back(spectral_partition(dataset, graph, kb, {.seed = rng()}).partition());
            if (count_balanced_partitions(n, kb) <= kBruteForceLimit) {
                partitions.push_back(brute_force_optimal(dataset, kb).partition);
                ++s.brute_instances;
            }

            ++s.instances;
            for (const auto& p: partitions) {
                ++s.partitions;
                const auto   check = theorem2_check(graph, p);
                const double gap   = std::abs(check.lhs - check.rhs);
                s.worst_identity   = std::max(s.worst_identity, gap);
                s.identity_fail += gap <= 1e-9 ? 0 : 1;
                const double bound = theorem1_bound(dataset, graph, p, BoundCoefficient::corrected_s_minus_1);
                s.bound_fail += static_cast<double>(objective(dataset, p)) <= bound + 1e-9 ? 0 : 1;
            }
        }
        return s;
    }();
    return stats;
}

Outcome cut_identity() {
    const auto& s = identity_stats();
    return {
        s.instances == 200 && s.identity_fail == 0,
        format("%d instances, %d partitions (brute on %d), %d violations, max gap %.2e", s.instances, s.partitions,
               s.brute_instances, s.identity_fail, s.worst_identity)
    };
}

Outcome corrected_bound() {
    const auto& s     = identity_stats();
    const auto  twins = Dataset::from_sets({{0, 1}, {0, 1}});
    const auto  graph = build_graph(twins);
    const auto  one   = testing::batches({{0, 1}}, 2);
    const auto  obj   = objective(twins, one);
    const double s_bound = theorem1_bound(twins, graph, one, BoundCoefficient::paper_s);
    return {
        s.bound_fail == 0 && obj == 2 && s_bound == 0.0 && static_cast<double>(obj) > s_bound,
        format("corrected bound violated on %d/%d partitions; s-coefficient counterexample objective %lld > bound %.1f",
               s.bound_fail, s.partitions, static_cast<long long>(obj), s_bound)
    };
}

// 4 ---------------------------------------------------------------------------

Outcome optimality_floor() {
    std::mt19937_64 rng(4);
    int             floor_fail = 0;
    for (int round = 0; round < 50; ++round) {
        const std::size_t n       = 2 + rng() % 9;
        const auto        k       = static_cast<BatchID>(1 + rng() % n);
        const auto        dataset = testing::random_dataset(n, static_cast<DescriptionID>(2 + rng() % 12), 0.3, rng);
        const auto        best    = brute_force_optimal(dataset, k).objective;
        const auto        found   = objective(dataset, spectral_partition(dataset, k, {.seed = rng()}).partition());
        floor_fail += best <= found ? 0 : 1;
    }

    struct Shape {
        std::size_t   n;
        std::uint32_t clusters;
    };
    const std::vector<Shape> shapes{{4, 2}, {6, 2}, {6, 3}, {8, 2}, {8, 4}, {9, 3}, {10, 2}, {10, 5}};
    int                      runs = 0;
    int                      optimal = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Shape&        shape = shapes[seed % shapes.size()];
        const PlantedConfig config{shape.n, shape.clusters, static_cast<std::uint32_t>(1 + seed % 3),
                                   static_cast<std::uint32_t>(seed % 2), 0.0, seed};
        const auto [dataset, planted] = generate_planted(config);
        const auto best               = brute_force_optimal(dataset, shape.clusters).objective;
        const auto found = objective(dataset, spectral_partition(dataset, shape.clusters, {.seed = seed}).partition());
        ++runs;
        optimal += found == best ? 1 : 0;
    }
    return {
        floor_fail == 0 && optimal * 10 >= runs * 9,
        format("brute above spectral on %d/50 random instances; planted spectral optimal in %d/%d seeds", floor_fail,
               optimal, runs)
    };
}

// 5 ---------------------------------------------------------------------------

Outcome eigensolver() {
    std::mt19937_64 rng(5);
    double          worst_residual = 0.0;
    double          worst_value    = 0.0;
    for (int round = 0; round < 20; ++round) {
        const std::size_t n         = 20 + rng() % 181;
        const double      density   = 0.02 + 0.1 * static_cast<double>(rng() % 100) / 100.0;
        const auto        dataset   = testing::random_dataset(n, static_cast<DescriptionID>(10 + rng() % 60), density, rng);
        const auto        op        = normalized_affinity(build_graph(dataset));
        const auto        dense     = testing::reference_affinity(dataset);
        const auto        reference = testing::jacobi_eigenvalues(dense);
        for (const auto solver: {EigenSolverKind::dense, EigenSolverKind::lanczos}) {
            EigenOptions options;
            options.k_prime = 8;
            options.seed    = rng();
            options.solver  = solver;
            const auto eig  = top_eigenpairs(op, options);
            for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
                const double residual = (dense * eig.vectors.col(j) - eig.values[j] * eig.vectors.col(j)).norm();
                worst_residual        = std::max(worst_residual, residual);
                worst_value           = std::max(worst_value, std::abs(eig.values[j] - reference[j]));
            }
        }
    }
    return {
        worst_residual <= 1e-8 && worst_value <= 1e-8,
        format("20 graphs x {dense, Lanczos}: max residual %.2e, max eigenvalue error %.2e", worst_residual, worst_value)
    };
}

// 6 ---------------------------------------------------------------------------

Outcome capacity_exactness() {
    std::mt19937_64 rng(6);
    int             violations = 0;
    std::size_t     snapshots  = 0;
    for (int round = 0; round < 1000; ++round) {
        const std::size_t n    = 1 + rng() % 200;
        const auto        k    = static_cast<BatchID>(1 + rng() % n);
        const auto        seed = rng();
        const auto        caps = make_capacities(n, k);

        // Independent restatement: the first n mod k batches hold one extra sample.
        bool formula_ok = caps.size() == k;
        for (BatchID b = 0; b < k && formula_ok; ++b) {
            formula_ok = caps[b] == n / k + (b < n % k ? 1 : 0);
        }
        violations += formula_ok ? 0 : 1;

        const auto dim    = static_cast<Eigen::Index>(1 + rng() % 8);
        const auto points = testing::random_points(static_cast<Eigen::Index>(n), dim, rng);
        const auto result = balanced_kmeans(points, k, caps, {.seed = seed, .max_iter = 30, .trace = true});
        for (const auto& record: *result.trace) {
            ++snapshots;
            std::vector<SampleID> sizes(k, 0);
            for (const BatchID b: record.partition.assignment()) {
                ++sizes[b];
            }
            violations += sizes == caps ? 0 : 1;
        }
    }
    return {violations == 0, format("1000 runs, %zu iteration snapshots, %d violations", snapshots, violations)};
}

// 7 ---------------------------------------------------------------------------

Outcome speedup_direction() {
    const auto start              = Clock::now();
    const auto [dataset, planted] = generate_planted({2000, 50, 20, 2, 0.05, 7});
    const auto graph              = build_graph(dataset);

    std::vector<double> speedups;
    for (const std::size_t size: {8, 16, 32}) {
        const BatchID k        = batches_for_size(dataset.size(), size);
        const auto    spectral = objective(dataset, spectral_partition(dataset, graph, k, {.seed = 7}).partition());
        double        random   = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            random += static_cast<double>(objective(dataset, random_partition(dataset.size(), k, seed)));
        }
        speedups.push_back(random / 10.0 / static_cast<double>(spectral));
    }
    const double elapsed = seconds_since(start);
    const bool   pass    = speedups[0] >= 1.3 && speedups[1] >= 1.3 && speedups[2] >= 1.3 && speedups[0] <= speedups[1]
                      && speedups[1] <= speedups[2] && elapsed < 60.0;
    return {pass, format("speedup %.3f / %.3f / %.3f at batch size 8 / 16 / 32, %.1f s", speedups[0], speedups[1],
                         speedups[2], elapsed)};
}

// 8 ---------------------------------------------------------------------------

Outcome centroid_correlation() {
    int         kept     = 0;
    int         strong   = 0;
    int         attempts = 0;
    double      lowest   = 1.0;
    for (std::uint64_t seed = 0; kept < 10 && seed < 100; ++seed) {
        ++attempts;
        const auto [dataset, planted] = generate_planted({1000, 100, 2, 6, 1.0, seed});
        const auto result = spectral_partition(dataset, 100, {.seed = seed, .trace = true});
        if (result.kmeans.trace->size() < 5) {
            continue;
        }
        ++kept;
        try {
            const double r = correlation(*result.kmeans.trace, dataset);
            lowest         = std::min(lowest, r);
            strong += r >= 0.5 ? 1 : 0;
        } catch (const UndefinedCorrelation&) {
            lowest = std::min(lowest, -1.0);
        }
    }
    return {kept == 10 && strong >= 8,
            format("%d/%d runs with >= 5 iterations have r >= 0.5 (min r %.3f, %d seeds tried)", strong, kept, lowest,
                   attempts)};
}

// 9 ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& path) {
    std::ifstream      in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Outcome cli_determinism() {
    const auto dir = std::filesystem::temp_directory_path() / ("batchcut_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto data = (dir / "data.jsonl").string();
    write_dataset(data, generate_planted({1200, 40, 6, 3, 0.3, 9}).first);

    const auto run = [&](const std::string& out) {
        const std::vector<std::string> args{"batchcut", "partition", "--dataset", data, "--batch-size", "30", "--seed", "11",
                                            "--out", out};
        std::vector<const char*>       argv;
        for (const auto& a: args) {
            argv.push_back(a.c_str());
        }
        std::ostringstream sink;
        return cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink);
    };
    const int  first  = run((dir / "a").string());
    const int  second = run((dir / "b").string());
    const bool same_partition = slurp(dir / "a" / "partition.json") == slurp(dir / "b" / "partition.json");
    const bool same_report    = slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json");
    const bool nonempty       = !slurp(dir / "a" / "partition.json").empty();
    std::filesystem::remove_all(dir);
    return {first == 0 && second == 0 && same_partition && same_report && nonempty,
            format("exit codes %d/%d, partition.json %s, report.json %s", first, second,
                   same_partition ? "identical" : "differs", same_report ? "identical" : "differs")};
}

// 10 --------------------------------------------------------------------------

Outcome scale_smoke() {
    const auto start              = Clock::now();
    const auto [dataset, planted] = generate_planted({20000, 625, 20, 2, 0.05, 10});
    const auto result             = spectral_partition(dataset, 625, {.k_prime = 8, .seed = 10});
    const auto spectral           = objective(dataset, result.partition());
    const double elapsed          = seconds_since(start);

    double random = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        random += static_cast<double>(objective(dataset, random_partition(dataset.size(), 625, seed)));
    }
    random /= 5.0;
    return {elapsed < 600.0 && static_cast<double>(spectral) < random,
            format("spectral %lld vs random mean %.1f, %.1f s end to end (eigensolver %s, max residual %.1e)",
                   static_cast<long long>(spectral), random, elapsed,
                   result.embedding.converged ? "converged" : "not converged", result.embedding.max_residual)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"fixture counting example", fixture_counting},
        {"cut-weight identity", cut_identity},
        {"corrected upper bound", corrected_bound},
        {"exhaustive optimum is a floor", optimality_floor},
        {"eigensolver accuracy", eigensolver},
        {"capacity exactness", capacity_exactness},
        {"speedup over random", speedup_direction},
        {"centroid distance correlation", centroid_correlation},
        {"CLI determinism", cli_determinism},
        {"scale smoke test", scale_smoke},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failed += outcome.pass ? 0 : 1;
        std::printf("criterion %2zu %s  %s: %s\n", i + 1, outcome.pass ? "PASS" : "FAIL", criteria[i].first,
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
