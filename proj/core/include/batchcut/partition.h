/*******************************************************************************
 * @file:   partition.h
 * @brief:  Assignment of samples to k batches with exact per-batch capacities.
 ******************************************************************************/
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "batchcut/definitions.h"

namespace batchcut {

class Dataset;

// n mod k batches get ceil(n/k), the others floor(n/k). Requires 1 <= k <= n.
std::vector<SampleID> make_capacities(std::size_t n, BatchID k);

/**
 * A complete partition: every sample has exactly one batch and batch b holds
 * exactly capacities[b] samples. The constructor rejects anything else.
 */
class Partition {
public:
    Partition(std::vector<BatchID> assignment, std::vector<SampleID> capacities);

    // Capacities are taken from the batch sizes.
    static Partition from_batches(const std::vector<std::vector<SampleID>>& batches, std::size_t n);

    [[nodiscard]] std::size_t n() const { return _assignment.size(); }
    [[nodiscard]] BatchID     k() const { return static_cast<BatchID>(_capacities.size()); }

    [[nodiscard]] BatchID batch_of(SampleID i) const { return _assignment[i]; }

    [[nodiscard]] std::span<const BatchID>  assignment() const { return _assignment; }
    [[nodiscard]] std::span<const SampleID> capacities() const { return _capacities; }

    // Members of every batch, ascending.
    [[nodiscard]] std::vector<std::vector<SampleID>> batches() const;

    // s if all batches have the same size s.
    [[nodiscard]] std::optional<SampleID> uniform_batch_size() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<BatchID>  _assignment;
    std::vector<SampleID> _capacities;
};

// {"k": int, "batches": [[sample_id...]...]} with the dataset's external sample IDs.
void      write_partition_json(std::ostream& out, const Partition& partition, const Dataset& dataset);
Partition read_partition_json(std::istream& in, const Dataset& dataset);

} // namespace batchcut
