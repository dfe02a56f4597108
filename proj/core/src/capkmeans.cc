/*******************************************************************************
 * @file:   capkmeans.cc
 * @brief:  Capacity-constrained k-means.
 ******************************************************************************/
#include "batchcut/capkmeans.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <unordered_set>

#include "batchcut/parallel.h"
#include "batchcut/theory.h"

namespace batchcut {

/*
 * The greedy sweep over all n·k pairs in ascending (distance, sample, center)
 * order is evaluated lazily: each free sample exposes only its closest center
 * not yet known to be full, and a heap yields the globally smallest exposed
 * pair. Pairs of assigned samples and of full centers would be skipped by the
 * full sweep anyway, so both produce the same assignment.
 */
Partition assign_step(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers, const std::span<const SampleID> capacities) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto k = static_cast<std::size_t>(centers.rows());
    if (capacities.size() != k) {
        throw InvalidArgument("one capacity per center required");
    }
    if (centers.cols() != points.cols()) {
        throw InvalidArgument("centers and points differ in dimension");
    }
    if (!centers.allFinite()) {
        throw InvalidArgument("centers must be finite");
    }
    if (std::accumulate(capacities.begin(), capacities.end(), std::size_t{0}) != n) {
        throw InvalidArgument("capacities must sum to the number of points");
    }

    std::vector<double>   distance(n * k);
    std::vector<BatchID>  order(n * k);
    parallel_for(n, 64, [&](const std::size_t begin, const std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double*  dist = distance.data() + i * k;
            BatchID* ord  = order.data() + i * k;
            for (std::size_t j = 0; j < k; ++j) {
                dist[j] = (points.row(static_cast<Eigen::Index>(i)) - centers.row(static_cast<Eigen::Index>(j))).norm();
                ord[j]  = static_cast<BatchID>(j);
            }
            std::sort(ord, ord + k, [dist](const BatchID a, const BatchID b) {
                return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
            });
        }
    });

    struct Candidate {
        double   distance;
        SampleID sample;
        BatchID  center;
        BatchID  rank; // position in the sample's center order

        bool operator>(const Candidate& other) const {
            if (distance != other.distance) {
                return distance > other.distance;
            }
            if (sample != other.sample) {
                return sample > other.sample;
            }
            return center > other.center;
        }
    };
    std::vector<Candidate> initial;
    initial.reserve(n);
    for (SampleID i = 0; i < n; ++i) {
        const BatchID j = order[static_cast<std::size_t>(i) * k];
        initial.push_back({distance[static_cast<std::size_t>(i) * k + j], i, j, 0});
    }
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap(std::greater<>{}, std::move(initial));

    std::vector<BatchID>  assignment(n, 0);
    std::vector<SampleID> load(k, 0);
    while (!heap.empty()) {
        const Candidate top = heap.top();
        heap.pop();
        if (load[top.center] < capacities[top.center]) {
            assignment[top.sample] = top.center;
            ++load[top.center];
            continue;
        }
        // Center full; expose the sample's next center. One always has room.
        const std::size_t base = static_cast<std::size_t>(top.sample) * k;
        const BatchID     rank = top.rank + 1;
        const BatchID     next = order[base + rank];
        heap.push({distance[base + next], top.sample, next, rank});
    }
    return {std::move(assignment), std::vector<SampleID>(capacities.begin(), capacities.end())};
}

Eigen::MatrixXd update_step(const Eigen::MatrixXd& points, const Partition& partition) {
    if (static_cast<std::size_t>(points.rows()) != partition.n()) {
        throw InvalidArgument("partition does not match the points");
    }
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(partition.k(), points.cols());
    for (SampleID i = 0; i < partition.n(); ++i) {
        centers.row(partition.batch_of(i)) += points.row(i);
    }
    for (BatchID b = 0; b < partition.k(); ++b) {
        if (partition.capacities()[b] > 0) {
            centers.row(b) /= static_cast<double>(partition.capacities()[b]);
        }
    }
    return centers;
}

double mean_centroid_distance(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers, const Partition& partition) {
    if (partition.n() == 0) {
        return 0.0;
    }
    double total = 0.0;
    for (SampleID i = 0; i < partition.n(); ++i) {
        total += (points.row(i) - centers.row(partition.batch_of(i))).norm();
    }
    return total / static_cast<double>(partition.n());
}

namespace {
std::uint64_t hash_assignment(const std::span<const BatchID> assignment) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (const BatchID b: assignment) {
        hash ^= b;
        hash *= 1099511628211ULL;
    }
    return hash;
}

Eigen::MatrixXd uniform_init(const Eigen::MatrixXd& points, const BatchID k, std::mt19937_64& rng) {
    const auto            n = static_cast<std::size_t>(points.rows());
    std::vector<SampleID> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: the first k entries are a uniform k-subset.
    for (std::size_t j = 0; j < k; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, n - 1);
        std::swap(pool[j], pool[pick(rng)]);
    }
    Eigen::MatrixXd centers(k, points.cols());
    for (BatchID j = 0; j < k; ++j) {
        centers.row(j) = points.row(pool[j]);
    }
    return centers;
}

Eigen::MatrixXd plusplus_init(const Eigen::MatrixXd& points, const BatchID k, std::mt19937_64& rng) {
    const auto          n = static_cast<std::size_t>(points.rows());
    std::vector<char>   taken(n, 0);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    Eigen::MatrixXd     centers(k, points.cols());

    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::size_t                                chosen = first(rng);
    for (BatchID j = 0; j < k; ++j) {
        if (j > 0) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                total += taken[i] ? 0.0 : nearest[i];
            }
            chosen = n;
            if (total > 0.0) {
                std::uniform_real_distribution<double> u(0.0, total);
                double                                 target = u(rng);
                for (std::size_t i = 0; i < n; ++i) {
                    if (taken[i]) {
                        continue;
                    }
                    target -= nearest[i];
                    chosen = i;
                    if (target <= 0.0) {
                        break;
                    }
                }
            }
            if (chosen == n) {
                // All remaining points coincide with centers: lowest free index.
                chosen = static_cast<std::size_t>(std::find(taken.begin(), taken.end(), 0) - taken.begin());
            }
        }
        taken[chosen]  = 1;
        centers.row(j) = points.row(static_cast<Eigen::Index>(chosen));
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], (points.row(static_cast<Eigen::Index>(i)) - centers.row(j)).squaredNorm());
        }
    }
    return centers;
}
} // namespace

KMeansResult balanced_kmeans(
    const Eigen::MatrixXd& points, const BatchID k, const std::span<const SampleID> capacities, const KMeansOptions& options
) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k == 0 || k > n) {
        throw InvalidArgument("k must satisfy 1 <= k <= n");
    }
    if (capacities.size() != k) {
        throw InvalidArgument("one capacity per batch required");
    }
    if (options.max_iter < 1) {
        throw InvalidArgument("max_iter must be at least 1");
    }

    std::mt19937_64 rng(options.seed);
    Eigen::MatrixXd centers = options.plusplus_init ? plusplus_init(points, k, rng) : uniform_init(points, k, rng);

    KMeansResult result{
        .partition   = Partition(std::vector<BatchID>(n, 0), {static_cast<SampleID>(n)}),
        .centers     = {},
        .iterations  = 0,
        .stop_reason = StopReason::max_iter,
        .trace       = std::nullopt,
    };
    if (options.trace) {
        result.trace.emplace();
    }

    std::unordered_set<std::uint64_t> seen;
    std::optional<Partition>          previous;
    for (std::size_t iteration = 0; iteration < options.max_iter; ++iteration) {
        Partition       current     = assign_step(points, centers, capacities);
        Eigen::MatrixXd new_centers = update_step(points, current);
        result.iterations           = iteration + 1;

        if (previous && *previous == current) {
            // Nothing new to record.
            result.stop_reason = StopReason::converged;
            centers            = std::move(new_centers);
            break;
        }
        if (result.trace) {
            result.trace->push_back({iteration, mean_centroid_distance(points, new_centers, current), current});
        }

        const bool fixed = new_centers == centers;
        const bool cycle = !seen.insert(hash_assignment(current.assignment())).second;
        centers          = std::move(new_centers);
        previous         = std::move(current);

        if (k == 1) {
            result.stop_reason = StopReason::single_batch;
            break;
        }
        if (fixed) {
            result.stop_reason = StopReason::centers_fixed;
            break;
        }
        if (cycle) {
            result.stop_reason = StopReason::cycle;
            break;
        }
    }
    if (previous) {
        result.partition = std::move(*previous);
    }
    result.centers = std::move(centers);
    return result;
}

const char* to_string(const StopReason reason) {
    switch (reason) {
        case StopReason::converged:
            return "converged";
        case StopReason::centers_fixed:
            return "centers_fixed";
        case StopReason::cycle:
            return "cycle";
        case StopReason::max_iter:
            return "max_iter";
        case StopReason::single_batch:
            return "single_batch";
    }
    return "unknown";
}

void write_trace_csv(std::ostream& out, const KMeansTrace& trace, const Dataset& dataset) {
    out << "iteration,mean_centroid_distance,distinct_descriptions_total\n";
    char buffer[32];
    for (const auto& record: trace) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", record.mean_centroid_distance);
        out << record.iteration << ',' << buffer << ',' << objective(dataset, record.partition) << '\n';
    }
}

} // namespace batchcut
