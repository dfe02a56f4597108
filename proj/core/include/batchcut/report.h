/*******************************************************************************
 * @file:   report.h
 * @brief:  Quality report for one partition.
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "batchcut/costmodel.h"
#include "batchcut/theory.h"

namespace batchcut {

class Dataset;
class Partition;
class SimilarityGraph;

struct PartitionReport {
    std::int64_t              objective = 0;
    std::vector<std::int64_t> per_batch_distinct;
    std::int64_t              sum_set_sizes = 0;
    BoundCoefficient          coefficient   = BoundCoefficient::corrected_s_minus_1;
    double                    theorem1_bound       = 0.0; // with `coefficient`
    double                    theorem1_bound_paper = 0.0; // with s
    double                    eq5_value            = 0.0;
    EdgeWeight                cut_weight            = 0;
    EdgeWeight                inner_weight          = 0;
    EdgeWeight                total_pairwise_weight = 0;
    CostParams                cost_params;
    CostBreakdown             cost;
};

PartitionReport make_report(
    const Dataset& dataset, const SimilarityGraph& graph, const Partition& partition, const CostParams& cost_params = {},
    BoundCoefficient coefficient = BoundCoefficient::corrected_s_minus_1
);

void write_report_json(std::ostream& out, const PartitionReport& report);

} // namespace batchcut
