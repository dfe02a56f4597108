/*******************************************************************************
 * @file:   pipeline.h
 * @brief:  Dataset -> similarity graph -> embedding -> balanced k-means.
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <optional>

#include "batchcut/capkmeans.h"
#include "batchcut/simgraph.h"
#include "batchcut/spectral.h"

namespace batchcut {

class Dataset;

struct SpectralPartitionOptions {
    // 0 selects min(8, k, n).
    std::size_t           k_prime      = 0;
    std::uint64_t         seed         = 0;
    std::size_t           max_iter     = 100;
    std::optional<double> heavy_cutoff = std::nullopt;
    double                eigen_tol    = 1e-8;
    EigenSolverKind       solver       = EigenSolverKind::automatic;
    bool                  trace        = false;
    bool                  plusplus_init = false;
};

struct SpectralPartitionResult {
    SimilarityGraph   graph;
    SpectralEmbedding embedding;
    KMeansResult      kmeans;

    [[nodiscard]] const Partition& partition() const { return kmeans.partition; }
};

SpectralPartitionResult spectral_partition(const Dataset& dataset, BatchID k, const SpectralPartitionOptions& options);

// Same, reusing an already built graph.
SpectralPartitionResult spectral_partition(
    const Dataset& dataset, SimilarityGraph graph, BatchID k, const SpectralPartitionOptions& options
);

// ceil(n / batch_size)
BatchID batches_for_size(std::size_t n, std::size_t batch_size);

} // namespace batchcut
