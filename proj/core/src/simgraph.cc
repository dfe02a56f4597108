/*******************************************************************************
 * @file:   simgraph.cc
 * @brief:  Inverted index and intersection graph construction.
 ******************************************************************************/
#include "batchcut/simgraph.h"

#include <algorithm>
#include <ostream>

#include "batchcut/dataset.h"
#include "batchcut/parallel.h"
#include "batchcut/partition.h"

namespace batchcut {

InvertedIndex build_index(const Dataset& dataset) {
    InvertedIndex index;
    index.postings.resize(dataset.num_descriptions());
    for (SampleID i = 0; i < dataset.size(); ++i) {
        for (const DescriptionID t: dataset.descriptions(i)) {
            index.postings[t].push_back(i);
        }
    }
    return index;
}

SimilarityGraph::SimilarityGraph(
    std::vector<std::size_t> offsets, std::vector<SampleID> neighbors, std::vector<EdgeWeight> weights
)
    : _offsets(std::move(offsets)),
      _neighbors(std::move(neighbors)),
      _weights(std::move(weights)) {
    if (_offsets.empty()) {
        _offsets.push_back(0);
    }
    if (_neighbors.size() != _weights.size() || _offsets.back() != _neighbors.size()) {
        throw InvalidArgument("inconsistent CSR arrays");
    }
    const std::size_t n = _offsets.size() - 1;
    _degrees.assign(n, 0);
    EdgeWeight twice_total = 0;
    for (SampleID u = 0; u < n; ++u) {
        for (std::size_t e = _offsets[u]; e < _offsets[u + 1]; ++e) {
            if (_neighbors[e] >= n || _neighbors[e] == u || _weights[e] <= 0) {
                throw InvalidArgument("invalid edge at vertex " + std::to_string(u));
            }
            _degrees[u] += _weights[e];
        }
        twice_total += _degrees[u];
    }
    _total_weight = twice_total / 2;
}

EdgeWeight SimilarityGraph::weight(const SampleID u, const SampleID v) const {
    const auto adj = neighbors(u);
    const auto it  = std::lower_bound(adj.begin(), adj.end(), v);
    if (it == adj.end() || *it != v) {
        return 0;
    }
    return weights(u)[static_cast<std::size_t>(it - adj.begin())];
}

SimilarityGraph build_graph(const Dataset& dataset, const InvertedIndex& index, const std::optional<double> heavy_cutoff) {
    const std::size_t n = dataset.size();
    if (index.postings.size() != dataset.num_descriptions()) {
        throw InvalidArgument("inverted index does not match the dataset");
    }

    std::vector<char> skip(index.postings.size(), 0);
    if (heavy_cutoff) {
        for (std::size_t t = 0; t < index.postings.size(); ++t) {
            if (static_cast<double>(index.postings[t].size()) > *heavy_cutoff * static_cast<double>(n)) {
                skip[t] = 1;
            }
        }
    }

    // Per-vertex accumulation: row u collects +1 per shared description.
    std::vector<std::vector<SampleID>>   row_neighbors(n);
    std::vector<std::vector<EdgeWeight>> row_weights(n);
    parallel_for(n, 256, [&](const std::size_t begin, const std::size_t end) {
        std::vector<EdgeWeight> acc(n, 0);
        std::vector<SampleID>   touched;
        for (std::size_t u = begin; u < end; ++u) {
            touched.clear();
            for (const DescriptionID t: dataset.descriptions(static_cast<SampleID>(u))) {
                if (skip[t]) {
                    continue;
                }
                for (const SampleID v: index.postings[t]) {
                    if (v == u) {
                        continue;
                    }
                    if (acc[v]++ == 0) {
                        touched.push_back(v);
                    }
                }
            }
            std::sort(touched.begin(), touched.end());
            auto& nbrs = row_neighbors[u];
            auto& wgts = row_weights[u];
            nbrs.reserve(touched.size());
            wgts.reserve(touched.size());
            for (const SampleID v: touched) {
                nbrs.push_back(v);
                wgts.push_back(acc[v]);
                acc[v] = 0;
            }
        }
    });

    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u) {
        offsets[u + 1] = offsets[u] + row_neighbors[u].size();
    }
    std::vector<SampleID>   neighbors;
    std::vector<EdgeWeight> weights;
    neighbors.reserve(offsets[n]);
    weights.reserve(offsets[n]);
    for (std::size_t u = 0; u < n; ++u) {
        neighbors.insert(neighbors.end(), row_neighbors[u].begin(), row_neighbors[u].end());
        weights.insert(weights.end(), row_weights[u].begin(), row_weights[u].end());
        std::vector<SampleID>().swap(row_neighbors[u]);
        std::vector<EdgeWeight>().swap(row_weights[u]);
    }
    return {std::move(offsets), std::move(neighbors), std::move(weights)};
}

SimilarityGraph build_graph(const Dataset& dataset, const std::optional<double> heavy_cutoff) {
    return build_graph(dataset, build_index(dataset), heavy_cutoff);
}

namespace {
void check_cover(const SimilarityGraph& graph, const Partition& partition) {
    if (partition.n() != graph.n()) {
        throw InvalidArgument(
            "partition covers " + std::to_string(partition.n()) + " samples, graph has " + std::to_string(graph.n())
        );
    }
}
} // namespace

std::vector<EdgeWeight> batch_inner_weights(const SimilarityGraph& graph, const Partition& partition) {
    check_cover(graph, partition);
    std::vector<EdgeWeight> inner(partition.k(), 0);
    for (SampleID u = 0; u < graph.n(); ++u) {
        const auto adj = graph.neighbors(u);
        const auto wgt = graph.weights(u);
        for (std::size_t e = 0; e < adj.size(); ++e) {
            const SampleID v = adj[e];
            if (u < v && partition.batch_of(u) == partition.batch_of(v)) {
                inner[partition.batch_of(u)] += wgt[e];
            }
        }
    }
    return inner;
}

EdgeWeight inner_weight(const SimilarityGraph& graph, const Partition& partition) {
    EdgeWeight total = 0;
    for (const EdgeWeight w: batch_inner_weights(graph, partition)) {
        total += w;
    }
    return total;
}

EdgeWeight cut_weight(const SimilarityGraph& graph, const Partition& partition) {
    check_cover(graph, partition);
    EdgeWeight cut = 0;
    for (SampleID u = 0; u < graph.n(); ++u) {
        const auto adj = graph.neighbors(u);
        const auto wgt = graph.weights(u);
        for (std::size_t e = 0; e < adj.size(); ++e) {
            if (u < adj[e] && partition.batch_of(u) != partition.batch_of(adj[e])) {
                cut += wgt[e];
            }
        }
    }
    return cut;
}

void write_edge_list(std::ostream& out, const SimilarityGraph& graph) {
    out << graph.n() << ' ' << graph.m() << '\n';
    for (SampleID u = 0; u < graph.n(); ++u) {
        const auto adj = graph.neighbors(u);
        const auto wgt = graph.weights(u);
        for (std::size_t e = 0; e < adj.size(); ++e) {
            if (u < adj[e]) {
                out << u << ' ' << adj[e] << ' ' << wgt[e] << '\n';
            }
        }
    }
}

} // namespace batchcut
