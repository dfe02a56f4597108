/*******************************************************************************
 * @file:   capkmeans.h
 * @brief:  Capacity-constrained k-means on embedding points.
 *
 * Assignment walks all (sample, center) pairs in ascending (distance, sample,
 * center) order and takes a pair whenever the sample is still free and the
 * center is below capacity. The update step moves each center to the mean of
 * its batch.
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "batchcut/definitions.h"
#include "batchcut/partition.h"

namespace batchcut {

class Dataset;

Partition assign_step(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers, std::span<const SampleID> capacities);

Eigen::MatrixXd update_step(const Eigen::MatrixXd& points, const Partition& partition);

// Mean Euclidean distance from each point to the center of its batch.
double mean_centroid_distance(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers, const Partition& partition);

struct TraceRecord {
    std::size_t iteration;
    double      mean_centroid_distance; // after the update step
    Partition   partition;
};

using KMeansTrace = std::vector<TraceRecord>;

enum class StopReason { converged, centers_fixed, cycle, max_iter, single_batch };

struct KMeansOptions {
    std::uint64_t seed     = 0;
    std::size_t   max_iter = 100;
    bool          trace    = false;
    // k-means++ style seeding instead of uniform sampling of k points.
    bool plusplus_init = false;
};

struct KMeansResult {
    Partition                  partition;
    Eigen::MatrixXd            centers;
    std::size_t                iterations = 0;
    StopReason                 stop_reason = StopReason::max_iter;
    std::optional<KMeansTrace> trace;
};

KMeansResult balanced_kmeans(
    const Eigen::MatrixXd& points, BatchID k, std::span<const SampleID> capacities, const KMeansOptions& options
);

const char* to_string(StopReason reason);

// "iteration,mean_centroid_distance,distinct_descriptions_total"
void write_trace_csv(std::ostream& out, const KMeansTrace& trace, const Dataset& dataset);

} // namespace batchcut
