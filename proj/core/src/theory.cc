/*******************************************************************************
 * @file:   theory.cc
 * @brief:  Objective, pairwise bound and cut identity evaluation.
 ******************************************************************************/
#include "batchcut/theory.h"

#include <cmath>

#include "batchcut/dataset.h"
#include "batchcut/partition.h"
#include "batchcut/simgraph.h"

namespace batchcut {

const char* to_string(const BoundCoefficient coefficient) {
    switch (coefficient) {
        case BoundCoefficient::paper_s:
            return "paper_s";
        case BoundCoefficient::corrected_s_minus_1:
            return "corrected_s_minus_1";
    }
    return "unknown";
}

std::vector<std::int64_t> per_batch_distinct(const Dataset& dataset, const Partition& partition) {
    if (partition.n() != dataset.size()) {
        throw InvalidArgument(
            "partition covers " + std::to_string(partition.n()) + " samples, dataset has " + std::to_string(dataset.size())
        );
    }
    // stamp[t] = 1 + last batch that counted t
    std::vector<BatchID>      stamp(dataset.num_descriptions(), 0);
    std::vector<std::int64_t> distinct(partition.k(), 0);
    const auto                batches = partition.batches();
    for (BatchID b = 0; b < partition.k(); ++b) {
        for (const SampleID i: batches[b]) {
            for (const DescriptionID t: dataset.descriptions(i)) {
                if (stamp[t] != b + 1) {
                    stamp[t] = b + 1;
                    ++distinct[b];
                }
            }
        }
    }
    return distinct;
}

std::int64_t objective(const Dataset& dataset, const Partition& partition) {
    std::int64_t total = 0;
    for (const std::int64_t d: per_batch_distinct(dataset, partition)) {
        total += d;
    }
    return total;
}

namespace {
// Mean pairwise intersection inside a batch of `size` with inner weight `inner`.
double mean_pairwise(const EdgeWeight inner, const SampleID size) {
    if (size < 2) {
        return 0.0;
    }
    const double s = size;
    return 2.0 * static_cast<double>(inner) / (s * (s - 1.0));
}
} // namespace

double eq5_value(const SimilarityGraph& graph, const Partition& partition) {
    const auto inner = batch_inner_weights(graph, partition);
    double     total = 0.0;
    for (BatchID b = 0; b < partition.k(); ++b) {
        total += mean_pairwise(inner[b], partition.capacities()[b]);
    }
    return total;
}

double theorem1_bound(
    const Dataset& dataset, const SimilarityGraph& graph, const Partition& partition, const BoundCoefficient coefficient
) {
    if (graph.n() != dataset.size()) {
        throw InvalidArgument("graph and dataset sizes differ");
    }
    const auto                inner = batch_inner_weights(graph, partition);
    std::vector<std::int64_t> set_sizes(partition.k(), 0);
    for (SampleID i = 0; i < dataset.size(); ++i) {
        set_sizes[partition.batch_of(i)] += static_cast<std::int64_t>(dataset.descriptions(i).size());
    }

    double bound = 0.0;
    for (BatchID b = 0; b < partition.k(); ++b) {
        const SampleID size = partition.capacities()[b];
        const double   c    = coefficient == BoundCoefficient::paper_s ? size : size - 1.0;
        bound += static_cast<double>(set_sizes[b]) - c * mean_pairwise(inner[b], size);
    }
    return bound;
}

IdentityCheck theorem2_check(const SimilarityGraph& graph, const Partition& partition) {
    const auto s = partition.uniform_batch_size();
    if (!s) {
        throw InvalidArgument("the cut identity requires equal batch sizes");
    }
    IdentityCheck check{eq5_value(graph, partition), 0.0};
    if (*s >= 2) {
        const double size = *s;
        check.rhs = 2.0 * static_cast<double>(graph.total_pairwise_weight() - cut_weight(graph, partition))
                    / (size * (size - 1.0));
    }
    return check;
}

double pearson(const std::span<const double> x, const std::span<const double> y) {
    if (x.size() != y.size()) {
        throw InvalidArgument("series lengths differ");
    }
    if (x.size() < 3) {
        throw UndefinedCorrelation("correlation needs at least 3 points");
    }
    const double n = static_cast<double>(x.size());
    double       mean_x = 0.0;
    double       mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;

    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        throw UndefinedCorrelation("correlation undefined for a constant series");
    }
    return sxy / std::sqrt(sxx * syy);
}

double correlation(const KMeansTrace& trace, const Dataset& dataset) {
    std::vector<double> distance;
    std::vector<double> objectives;
    distance.reserve(trace.size());
    objectives.reserve(trace.size());
    for (const auto& record: trace) {
        distance.push_back(record.mean_centroid_distance);
        objectives.push_back(static_cast<double>(objective(dataset, record.partition)));
    }
    return pearson(distance, objectives);
}

} // namespace batchcut
