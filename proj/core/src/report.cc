/*******************************************************************************
 * @file:   report.cc
 ******************************************************************************/
#include "batchcut/report.h"

#include <ostream>

#include "json.hpp"

#include "batchcut/dataset.h"
#include "batchcut/partition.h"
#include "batchcut/simgraph.h"

namespace batchcut {

PartitionReport make_report(
    const Dataset& dataset, const SimilarityGraph& graph, const Partition& partition, const CostParams& cost_params,
    const BoundCoefficient coefficient
) {
    PartitionReport report;
    report.per_batch_distinct = per_batch_distinct(dataset, partition);
    for (const std::int64_t d: report.per_batch_distinct) {
        report.objective += d;
    }
    report.sum_set_sizes         = dataset.total_set_size();
    report.coefficient           = coefficient;
    report.theorem1_bound        = theorem1_bound(dataset, graph, partition, coefficient);
    report.theorem1_bound_paper  = theorem1_bound(dataset, graph, partition, BoundCoefficient::paper_s);
    report.eq5_value             = eq5_value(graph, partition);
    report.cut_weight            = cut_weight(graph, partition);
    report.total_pairwise_weight = graph.total_pairwise_weight();
    report.inner_weight          = report.total_pairwise_weight - report.cut_weight;
    report.cost_params           = cost_params;
    report.cost                  = partition_cost(dataset, partition, cost_params);
    return report;
}

void write_report_json(std::ostream& out, const PartitionReport& report) {
    nlohmann::ordered_json doc;
    doc["objective"]             = report.objective;
    doc["per_batch_distinct"]    = report.per_batch_distinct;
    doc["sum_set_sizes"]         = report.sum_set_sizes;
    doc["coefficient"]           = to_string(report.coefficient);
    doc["theorem1_bound"]        = report.theorem1_bound;
    doc["theorem1_bound_paper"]  = report.theorem1_bound_paper;
    doc["eq5_value"]             = report.eq5_value;
    doc["cut_weight"]            = report.cut_weight;
    doc["inner_weight"]          = report.inner_weight;
    doc["total_pairwise_weight"] = report.total_pairwise_weight;

    nlohmann::ordered_json cost;
    cost["sentence_length"]     = report.cost_params.sentence_length;
    cost["hidden_dim"]          = report.cost_params.hidden_dim;
    cost["include_target"]      = report.cost_params.include_target;
    cost["include_integration"] = report.cost_params.include_integration;
    cost["knowledge"]           = report.cost.knowledge;
    cost["target"]              = report.cost.target;
    cost["integration"]         = report.cost.integration;
    cost["total"]               = report.cost.total();
    doc["cost"]                 = std::move(cost);

    out << doc.dump(2) << '\n';
}

} // namespace batchcut
