/*******************************************************************************
 * @file:   simgraph.h
 * @brief:  Intersection-weighted similarity graph over samples.
 *
 * Vertices are samples; the edge {i, j} carries |T(x_i) ∩ T(x_j)|. Built from
 * an inverted index in O(Σ_t m_t²) where m_t is the posting length of t.
 ******************************************************************************/
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "batchcut/definitions.h"

namespace batchcut {

class Dataset;
class Partition;

struct InvertedIndex {
    // postings[t]: ascending sample IDs whose set contains t.
    std::vector<std::vector<SampleID>> postings;
};

InvertedIndex build_index(const Dataset& dataset);

/**
 * Symmetric CSR adjacency with positive integer weights and no self-loops.
 * Neighbors of every vertex are sorted ascending.
 */
class SimilarityGraph {
public:
    SimilarityGraph() = default;
    SimilarityGraph(std::vector<std::size_t> offsets, std::vector<SampleID> neighbors, std::vector<EdgeWeight> weights);

    [[nodiscard]] std::size_t n() const { return _offsets.empty() ? 0 : _offsets.size() - 1; }
    // Undirected edge count.
    [[nodiscard]] std::size_t m() const { return _neighbors.size() / 2; }

    [[nodiscard]] std::span<const SampleID> neighbors(SampleID u) const {
        return {_neighbors.data() + _offsets[u], _offsets[u + 1] - _offsets[u]};
    }
    [[nodiscard]] std::span<const EdgeWeight> weights(SampleID u) const {
        return {_weights.data() + _offsets[u], _offsets[u + 1] - _offsets[u]};
    }

    [[nodiscard]] EdgeWeight degree(SampleID u) const { return _degrees[u]; }
    [[nodiscard]] std::span<const EdgeWeight> degrees() const { return _degrees; }

    // 0 if no edge.
    [[nodiscard]] EdgeWeight weight(SampleID u, SampleID v) const;

    // Σ_{i<j} w(i, j)
    [[nodiscard]] EdgeWeight total_pairwise_weight() const { return _total_weight; }

    [[nodiscard]] std::span<const std::size_t> raw_offsets() const { return _offsets; }
    [[nodiscard]] std::span<const SampleID>    raw_neighbors() const { return _neighbors; }
    [[nodiscard]] std::span<const EdgeWeight>  raw_weights() const { return _weights; }

private:
    std::vector<std::size_t> _offsets;
    std::vector<SampleID>    _neighbors;
    std::vector<EdgeWeight>  _weights;
    std::vector<EdgeWeight>  _degrees;
    EdgeWeight               _total_weight = 0;
};

/**
 * Every pair of samples sharing description t gets +1 on its edge. With
 * `heavy_cutoff` set, descriptions held by more than that fraction of all
 * samples are skipped (the graph then under-approximates intersections).
 */
SimilarityGraph build_graph(
    const Dataset& dataset, const InvertedIndex& index, std::optional<double> heavy_cutoff = std::nullopt
);
SimilarityGraph build_graph(const Dataset& dataset, std::optional<double> heavy_cutoff = std::nullopt);

// Σ of weights of edges whose endpoints lie in different batches.
EdgeWeight cut_weight(const SimilarityGraph& graph, const Partition& partition);
// Σ of weights of edges inside a batch.
EdgeWeight inner_weight(const SimilarityGraph& graph, const Partition& partition);
// Inner edge weight per batch.
std::vector<EdgeWeight> batch_inner_weights(const SimilarityGraph& graph, const Partition& partition);

// Header "n m", then one "i j w" line per edge with i < j.
void write_edge_list(std::ostream& out, const SimilarityGraph& graph);

} // namespace batchcut
