/*******************************************************************************
 * @file:   costmodel.h
 * @brief:  Encoding-cost estimates for a knowledge-augmented encoder.
 *
 * Per batch with C distinct descriptions and s samples, in cost units:
 *   knowledge   = C · L² · D
 *   target      = s · L² · D          (optional)
 *   integration = Σ_x C_x² · D        (optional, C_x = |T(x)| before dedup)
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace batchcut {

class Dataset;
class Partition;

struct CostParams {
    std::int64_t sentence_length     = 32;  // L
    std::int64_t hidden_dim          = 768; // D
    bool         include_target      = false;
    bool         include_integration = false;
};

struct CostBreakdown {
    double knowledge   = 0.0;
    double target      = 0.0;
    double integration = 0.0;

    [[nodiscard]] double total() const { return knowledge + target + integration; }

    CostBreakdown& operator+=(const CostBreakdown& other);
};

CostBreakdown batch_cost(
    std::int64_t distinct_count, std::int64_t batch_size, std::span<const std::int64_t> per_sample_counts,
    const CostParams& params
);

CostBreakdown partition_cost(const Dataset& dataset, const Partition& partition, const CostParams& params);

// cost(a) / cost(b)
double speedup(const Dataset& dataset, const Partition& a, const Partition& b, const CostParams& params);

struct SweepRow {
    std::string  axis;  // "batch_size" or "description_cap"
    std::int64_t value;
    std::int64_t batch_size;
    std::int64_t spectral_objective;
    double       random_objective_mean;
    double       random_objective_std;
    double       spectral_cost;
    double       random_cost_mean;

    // random_cost_mean / spectral_cost
    [[nodiscard]] double speedup() const;
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace batchcut
