/*******************************************************************************
 * @file:   oracle.h
 * @brief:  Reference partitioners: exhaustive optimum, random baseline and a
 *          greedy overlap heuristic.
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <utility>

#include "batchcut/definitions.h"
#include "batchcut/partition.h"

namespace batchcut {

class Dataset;

// Number of distinct partitions into batches of make_capacities(n, k) sizes.
double count_balanced_partitions(std::size_t n, BatchID k);

inline constexpr double kBruteForceLimit = 1e7;

struct OptimalPartition {
    Partition    partition;
    std::int64_t objective;
};

/**
 * Exhaustive minimizer of the distinct-description objective. Batches holding
 * ceil(n/k) samples come first, within a size class ordered by smallest member.
 * Ties are broken by the lexicographically smallest assignment vector.
 * Throws InstanceTooLarge above `limit` candidate partitions.
 */
OptimalPartition brute_force_optimal(const Dataset& dataset, BatchID k, double limit = kBruteForceLimit);

// Uniform permutation chunked into make_capacities sizes.
Partition random_partition(std::size_t n, BatchID k, std::uint64_t seed);

// Largest sets first; each goes to the non-full batch with the largest overlap
// with its current union (ties: fewer members, then lower index).
Partition greedy_partition(const Dataset& dataset, BatchID k);

} // namespace batchcut
