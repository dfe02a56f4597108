/*******************************************************************************
 * @file:   partition.cc
 * @brief:  Partition validation, capacities and JSON I/O.
 ******************************************************************************/
#include "batchcut/partition.h"

#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "batchcut/dataset.h"

namespace batchcut {

std::vector<SampleID> make_capacities(const std::size_t n, const BatchID k) {
    if (k == 0 || k > n) {
        throw InvalidArgument(
            "batch count must satisfy 1 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")"
        );
    }
    const std::size_t     base      = n / k;
    const std::size_t     remainder = n % k;
    std::vector<SampleID> capacities(k, static_cast<SampleID>(base));
    for (std::size_t b = 0; b < remainder; ++b) {
        ++capacities[b];
    }
    return capacities;
}

Partition::Partition(std::vector<BatchID> assignment, std::vector<SampleID> capacities)
    : _assignment(std::move(assignment)),
      _capacities(std::move(capacities)) {
    if (_capacities.empty()) {
        throw InvalidArgument("partition needs at least one batch");
    }
    std::vector<SampleID> sizes(_capacities.size(), 0);
    for (const BatchID b: _assignment) {
        if (b >= _capacities.size()) {
            throw InvalidArgument("batch index " + std::to_string(b) + " out of range");
        }
        ++sizes[b];
    }
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        if (sizes[b] != _capacities[b]) {
            throw InvalidArgument(
                "batch " + std::to_string(b) + " has " + std::to_string(sizes[b]) + " samples, capacity "
                + std::to_string(_capacities[b])
            );
        }
    }
}

Partition Partition::from_batches(const std::vector<std::vector<SampleID>>& batches, const std::size_t n) {
    constexpr BatchID     kUnassigned = static_cast<BatchID>(-1);
    std::vector<BatchID>  assignment(n, kUnassigned);
    std::vector<SampleID> capacities;
    capacities.reserve(batches.size());
    for (BatchID b = 0; b < batches.size(); ++b) {
        for (const SampleID i: batches[b]) {
            if (i >= n) {
                throw InvalidArgument("sample " + std::to_string(i) + " out of range");
            }
            if (assignment[i] != kUnassigned) {
                throw InvalidArgument("sample " + std::to_string(i) + " appears in two batches");
            }
            assignment[i] = b;
        }
        capacities.push_back(static_cast<SampleID>(batches[b].size()));
    }
    for (SampleID i = 0; i < n; ++i) {
        if (assignment[i] == kUnassigned) {
            throw InvalidArgument("sample " + std::to_string(i) + " is not assigned");
        }
    }
    return {std::move(assignment), std::move(capacities)};
}

std::vector<std::vector<SampleID>> Partition::batches() const {
    std::vector<std::vector<SampleID>> result(k());
    for (BatchID b = 0; b < k(); ++b) {
        result[b].reserve(_capacities[b]);
    }
    for (SampleID i = 0; i < n(); ++i) {
        result[_assignment[i]].push_back(i);
    }
    return result;
}

std::optional<SampleID> Partition::uniform_batch_size() const {
    for (const SampleID c: _capacities) {
        if (c != _capacities.front()) {
            return std::nullopt;
        }
    }
    return _capacities.front();
}

void write_partition_json(std::ostream& out, const Partition& partition, const Dataset& dataset) {
    if (partition.n() != dataset.size()) {
        throw InvalidArgument("partition does not cover the dataset");
    }
    nlohmann::json batches = nlohmann::json::array();
    for (const auto& members: partition.batches()) {
        nlohmann::json batch = nlohmann::json::array();
        for (const SampleID i: members) {
            batch.push_back(dataset.external_sample_id(i));
        }
        batches.push_back(std::move(batch));
    }
    nlohmann::ordered_json doc;
    doc["k"]       = partition.k();
    doc["batches"] = std::move(batches);
    out << doc.dump() << '\n';
}

Partition read_partition_json(std::istream& in, const Dataset& dataset) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid partition JSON: ") + e.what(), 0);
    }
    if (!doc.is_object() || !doc.contains("batches") || !doc["batches"].is_array()) {
        throw ParseError("partition JSON needs a \"batches\" array", 0);
    }

    std::unordered_map<std::int64_t, SampleID> dense;
    for (SampleID i = 0; i < dataset.size(); ++i) {
        dense.emplace(dataset.external_sample_id(i), i);
    }

    std::vector<std::vector<SampleID>> batches;
    for (const auto& batch: doc["batches"]) {
        auto& members = batches.emplace_back();
        for (const auto& id: batch) {
            const auto it = dense.find(id.get<std::int64_t>());
            if (it == dense.end()) {
                throw ParseError("unknown sample id " + id.dump(), 0);
            }
            members.push_back(it->second);
        }
    }
    if (doc.contains("k") && doc["k"].get<std::size_t>() != batches.size()) {
        throw ParseError("\"k\" does not match the number of batches", 0);
    }
    return Partition::from_batches(batches, dataset.size());
}

} // namespace batchcut
