/*******************************************************************************
 * @file:   oracle.cc
 * @brief:  Exhaustive, random and greedy partitioners.
 ******************************************************************************/
#include "batchcut/oracle.h"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "batchcut/dataset.h"

namespace batchcut {

double count_balanced_partitions(const std::size_t n, const BatchID k) {
    const auto capacities = make_capacities(n, k);
    // n! / (Π s_b!) / (r! (k-r)!) with r batches of the larger size
    double            log_count = std::lgamma(static_cast<double>(n) + 1.0);
    std::size_t       larger    = 0;
    for (const SampleID s: capacities) {
        log_count -= std::lgamma(static_cast<double>(s) + 1.0);
        larger += s > capacities.back() ? 1 : 0;
    }
    log_count -= std::lgamma(static_cast<double>(larger) + 1.0);
    log_count -= std::lgamma(static_cast<double>(k - larger) + 1.0);
    return std::round(std::exp(log_count));
}

namespace {
constexpr BatchID kUnassigned = std::numeric_limits<BatchID>::max();

/*
 * Enumerates every set partition into the capacity multiset exactly once: the
 * block containing the smallest unassigned sample is chosen in full before
 * recursing, and blocks of one size class receive increasing batch IDs.
 */
class ExhaustiveSearch {
public:
    ExhaustiveSearch(const Dataset& dataset, const BatchID k)
        : _dataset(dataset),
          _n(dataset.size()),
          _capacities(make_capacities(_n, k)),
          _assignment(_n, kUnassigned),
          _stamp(dataset.num_descriptions(), 0) {
        _large_size  = _capacities.front();
        _small_size  = _capacities.back();
        _large_left  = static_cast<BatchID>(std::count(_capacities.begin(), _capacities.end(), _large_size));
        _small_left  = _large_size == _small_size ? 0 : k - _large_left;
        _next_large  = 0;
        _next_small  = _large_left;
    }

    OptimalPartition run() {
        next_block();
        return {Partition(_best_assignment, _capacities), _best};
    }

private:
    void next_block() {
        const auto it = std::find(_assignment.begin(), _assignment.end(), kUnassigned);
        if (it == _assignment.end()) {
            if (_partial < _best || (_partial == _best && _assignment < _best_assignment)) {
                _best            = _partial;
                _best_assignment = _assignment;
            }
            return;
        }
        const auto first = static_cast<SampleID>(it - _assignment.begin());

        if (_large_left > 0) {
            --_large_left;
            const BatchID b = _next_large++;
            open_block(first, b, _large_size);
            --_next_large;
            ++_large_left;
        }
        if (_small_left > 0) {
            --_small_left;
            const BatchID b = _next_small++;
            open_block(first, b, _small_size);
            --_next_small;
            ++_small_left;
        }
    }

    void open_block(const SampleID first, const BatchID b, const SampleID size) {
        _assignment[first] = b;
        _members.assign(1, first);
        choose(first + 1, size - 1, b);
        _assignment[first] = kUnassigned;
    }

    void choose(const SampleID start, const SampleID need, const BatchID b) {
        if (need == 0) {
            const std::int64_t distinct = block_distinct();
            _partial += distinct;
            if (_partial <= _best) {
                auto saved = std::move(_members);
                next_block();
                _members = std::move(saved);
            }
            _partial -= distinct;
            return;
        }
        for (SampleID u = start; u < _n; ++u) {
            if (_assignment[u] != kUnassigned) {
                continue;
            }
            _assignment[u] = b;
            _members.push_back(u);
            choose(u + 1, need - 1, b);
            _members.pop_back();
            _assignment[u] = kUnassigned;
        }
    }

    std::int64_t block_distinct() {
        ++_epoch;
        std::int64_t distinct = 0;
        for (const SampleID i: _members) {
            for (const DescriptionID t: _dataset.descriptions(i)) {
                if (_stamp[t] != _epoch) {
                    _stamp[t] = _epoch;
                    ++distinct;
                }
            }
        }
        return distinct;
    }

    const Dataset&             _dataset;
    SampleID                   _n;
    std::vector<SampleID>      _capacities;
    std::vector<BatchID>       _assignment;
    std::vector<std::uint64_t> _stamp;
    std::uint64_t              _epoch = 0;
    std::vector<SampleID>      _members;

    SampleID _large_size = 0;
    SampleID _small_size = 0;
    BatchID  _large_left = 0;
    BatchID  _small_left = 0;
    BatchID  _next_large = 0;
    BatchID  _next_small = 0;

    std::int64_t         _partial = 0;
    std::int64_t         _best    = std::numeric_limits<std::int64_t>::max();
    std::vector<BatchID> _best_assignment;
};
} // namespace

OptimalPartition brute_force_optimal(const Dataset& dataset, const BatchID k, const double limit) {
    const double count = count_balanced_partitions(dataset.size(), k);
    if (count > limit) {
        char message[128];
        std::snprintf(message, sizeof(message), "exhaustive search over %.3g partitions exceeds the limit of %.3g", count, limit);
        throw InstanceTooLarge(message);
    }
    return ExhaustiveSearch(dataset, k).run();
}

Partition random_partition(const std::size_t n, const BatchID k, const std::uint64_t seed) {
    auto                  capacities = make_capacities(n, k);
    std::vector<SampleID> permutation(n);
    std::iota(permutation.begin(), permutation.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(permutation.begin(), permutation.end(), rng);

    std::vector<BatchID> assignment(n);
    std::size_t          pos = 0;
    for (BatchID b = 0; b < k; ++b) {
        for (SampleID c = 0; c < capacities[b]; ++c) {
            assignment[permutation[pos++]] = b;
        }
    }
    return {std::move(assignment), std::move(capacities)};
}

Partition greedy_partition(const Dataset& dataset, const BatchID k) {
    const std::size_t n          = dataset.size();
    auto              capacities = make_capacities(n, k);

    std::vector<SampleID> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](const SampleID a, const SampleID b) {
        return dataset.descriptions(a).size() > dataset.descriptions(b).size();
    });

    // Batches whose union already contains t.
    std::vector<std::vector<BatchID>> holders(dataset.num_descriptions());
    std::vector<BatchID>              assignment(n);
    std::vector<SampleID>             load(k, 0);
    std::vector<std::int64_t>         overlap(k, 0);

    for (const SampleID i: order) {
        for (const DescriptionID t: dataset.descriptions(i)) {
            for (const BatchID b: holders[t]) {
                ++overlap[b];
            }
        }
        BatchID best = kUnassigned;
        for (BatchID b = 0; b < k; ++b) {
            if (load[b] >= capacities[b]) {
                continue;
            }
            if (best == kUnassigned || overlap[b] > overlap[best]
                || (overlap[b] == overlap[best] && load[b] < load[best])) {
                best = b;
            }
        }
        assignment[i] = best;
        ++load[best];
        for (const DescriptionID t: dataset.descriptions(i)) {
            for (const BatchID b: holders[t]) {
                overlap[b] = 0;
            }
            if (std::find(holders[t].begin(), holders[t].end(), best) == holders[t].end()) {
                holders[t].push_back(best);
            }
        }
    }
    return {std::move(assignment), std::move(capacities)};
}

} // namespace batchcut
