/*******************************************************************************
 * @file:   pipeline.cc
 ******************************************************************************/
#include "batchcut/pipeline.h"

#include <algorithm>

#include "batchcut/dataset.h"

namespace batchcut {

BatchID batches_for_size(const std::size_t n, const std::size_t batch_size) {
    if (batch_size == 0) {
        throw InvalidArgument("batch size must be positive");
    }
    return static_cast<BatchID>((n + batch_size - 1) / batch_size);
}

SpectralPartitionResult spectral_partition(
    const Dataset& dataset, SimilarityGraph graph, const BatchID k, const SpectralPartitionOptions& options
) {
    const std::size_t n          = dataset.size();
    const auto        capacities = make_capacities(n, k);

    EmbedOptions embed_options;
    embed_options.k_prime = options.k_prime > 0 ? std::min(options.k_prime, n) : default_k_prime(n, k);
    embed_options.seed    = options.seed;
    embed_options.tol     = options.eigen_tol;
    embed_options.solver  = options.solver;

    SpectralEmbedding embedding = embed(graph, embed_options);

    KMeansOptions kmeans_options;
    kmeans_options.seed          = options.seed;
    kmeans_options.max_iter      = options.max_iter;
    kmeans_options.trace         = options.trace;
    kmeans_options.plusplus_init = options.plusplus_init;
    KMeansResult kmeans          = balanced_kmeans(embedding.points, k, capacities, kmeans_options);

    return {std::move(graph), std::move(embedding), std::move(kmeans)};
}

SpectralPartitionResult spectral_partition(const Dataset& dataset, const BatchID k, const SpectralPartitionOptions& options) {
    return spectral_partition(dataset, build_graph(dataset, options.heavy_cutoff), k, options);
}

} // namespace batchcut
