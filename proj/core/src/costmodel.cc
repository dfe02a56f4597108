/*******************************************************************************
 * @file:   costmodel.cc
 ******************************************************************************/
#include "batchcut/costmodel.h"

#include <cstdio>
#include <limits>
#include <ostream>

#include "batchcut/dataset.h"
#include "batchcut/partition.h"
#include "batchcut/theory.h"

namespace batchcut {

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& other) {
    knowledge += other.knowledge;
    target += other.target;
    integration += other.integration;
    return *this;
}

namespace {
void check_params(const CostParams& params) {
    if (params.sentence_length < 1 || params.hidden_dim < 1) {
        throw InvalidArgument("sentence length and hidden dimension must be positive");
    }
}
} // namespace

CostBreakdown batch_cost(
    const std::int64_t distinct_count, const std::int64_t batch_size, const std::span<const std::int64_t> per_sample_counts,
    const CostParams& params
) {
    check_params(params);
    if (distinct_count < 0 || batch_size < 0) {
        throw InvalidArgument("counts must be non-negative");
    }
    const double l2d = static_cast<double>(params.sentence_length) * static_cast<double>(params.sentence_length)
                       * static_cast<double>(params.hidden_dim);

    CostBreakdown cost;
    cost.knowledge = static_cast<double>(distinct_count) * l2d;
    if (params.include_target) {
        cost.target = static_cast<double>(batch_size) * l2d;
    }
    if (params.include_integration) {
        for (const std::int64_t c: per_sample_counts) {
            cost.integration += static_cast<double>(c) * static_cast<double>(c) * static_cast<double>(params.hidden_dim);
        }
    }
    return cost;
}

CostBreakdown partition_cost(const Dataset& dataset, const Partition& partition, const CostParams& params) {
    const auto distinct = per_batch_distinct(dataset, partition);
    const auto batches  = partition.batches();

    CostBreakdown             total;
    std::vector<std::int64_t> counts;
    for (BatchID b = 0; b < partition.k(); ++b) {
        counts.clear();
        for (const SampleID i: batches[b]) {
            counts.push_back(static_cast<std::int64_t>(dataset.descriptions(i).size()));
        }
        total += batch_cost(distinct[b], static_cast<std::int64_t>(batches[b].size()), counts, params);
    }
    return total;
}

double speedup(const Dataset& dataset, const Partition& a, const Partition& b, const CostParams& params) {
    const double cost_a = partition_cost(dataset, a, params).total();
    const double cost_b = partition_cost(dataset, b, params).total();
    if (cost_b == 0.0) {
        return cost_a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return cost_a / cost_b;
}

double SweepRow::speedup() const {
    return spectral_cost > 0.0 ? random_cost_mean / spectral_cost : 1.0;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "axis,value,batch_size,spectral_objective,random_objective_mean,random_objective_std,"
           "spectral_cost,random_cost_mean,speedup\n";
    char buffer[256];
    for (const auto& row: rows) {
        std::snprintf(
            buffer,
            sizeof(buffer),
            "%lld,%lld,%lld,%.6f,%.6f,%.6f,%.6f,%.6f",
            static_cast<long long>(row.value),
            static_cast<long long>(row.batch_size),
            static_cast<long long>(row.spectral_objective),
            row.random_objective_mean,
            row.random_objective_std,
            row.spectral_cost,
            row.random_cost_mean,
            row.speedup()
        );
        out << row.axis << ',' << buffer << '\n';
    }
}

} // namespace batchcut
