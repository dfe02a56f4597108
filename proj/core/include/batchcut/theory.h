/*******************************************************************************
 * @file:   theory.h
 * @brief:  Batch-partitioning objective, its pairwise-intersection upper bound
 *          and the identity linking it to the k-cut weight.
 *
 * For a batch B of size s:
 *   distinct(B)   = |∪_{x∈B} T(x)|
 *   mean_pair(B)  = 2 / (s (s-1)) · Σ_{a<b ∈ B} |T(a) ∩ T(b)|      (0 if s < 2)
 *   bound(B)      = Σ_{x∈B} |T(x)| - c · mean_pair(B)
 * with c = s - 1 (a valid bound) or c = s (too large; two identical samples
 * already fall below the objective). Summing mean_pair over batches of uniform size s
 * equals 2 (W_total - w_cut) / (s (s-1)).
 ******************************************************************************/
#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "batchcut/capkmeans.h"
#include "batchcut/definitions.h"

namespace batchcut {

class Dataset;
class Partition;
class SimilarityGraph;

enum class BoundCoefficient { paper_s, corrected_s_minus_1 };

const char* to_string(BoundCoefficient coefficient);

// |∪ T(x)| for every batch.
std::vector<std::int64_t> per_batch_distinct(const Dataset& dataset, const Partition& partition);

// Σ_b |∪_{x∈B_b} T(x)|
std::int64_t objective(const Dataset& dataset, const Partition& partition);

// Σ_b mean pairwise intersection inside B_b, each batch using its own size.
double eq5_value(const SimilarityGraph& graph, const Partition& partition);

double theorem1_bound(
    const Dataset& dataset, const SimilarityGraph& graph, const Partition& partition, BoundCoefficient coefficient
);

struct IdentityCheck {
    double lhs; // Σ_b mean_pair(B_b)
    double rhs; // 2 (W_total - w_cut) / (s (s-1))
};

// Requires uniform batch sizes.
IdentityCheck theorem2_check(const SimilarityGraph& graph, const Partition& partition);

// Pearson r; throws UndefinedCorrelation for < 3 points or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson r between per-iteration mean centroid distance and objective.
double correlation(const KMeansTrace& trace, const Dataset& dataset);

} // namespace batchcut
