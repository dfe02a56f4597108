/*******************************************************************************
 * @file:   dataset.h
 * @brief:  Samples annotated with knowledge-description sets: loading, writing,
 *          trigger-phrase matching and a planted-cluster generator.
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "batchcut/definitions.h"

namespace batchcut {

class Partition;

struct Sample {
    // Sorted ascending, no duplicates. May be empty.
    std::vector<DescriptionID> descriptions;
    std::string                label;
    std::optional<std::string> text;
};

/**
 * Immutable collection of samples. Sample i is the i-th entry; description IDs
 * are dense in [0, num_descriptions()). External (file) IDs for both samples
 * and descriptions are kept so outputs can be written in the caller's ID space.
 */
class Dataset {
public:
    Dataset() = default;

    // Validates and canonicalizes (sorts, dedups) every description set.
    // Empty `external_*` vectors mean identity mappings.
    Dataset(
        std::vector<Sample>        samples,
        DescriptionID              num_descriptions,
        std::vector<std::int64_t>  external_sample_ids      = {},
        std::vector<std::int64_t>  external_description_ids = {}
    );

    // Convenience constructor for literal fixtures: sets of dense IDs, M inferred.
    static Dataset from_sets(const std::vector<std::vector<DescriptionID>>& sets);

    [[nodiscard]] std::size_t   size() const { return _samples.size(); }
    [[nodiscard]] bool          empty() const { return _samples.empty(); }
    [[nodiscard]] DescriptionID num_descriptions() const { return _num_descriptions; }

    [[nodiscard]] const std::vector<Sample>& samples() const { return _samples; }
    [[nodiscard]] const Sample&              sample(SampleID i) const { return _samples[i]; }

    [[nodiscard]] std::span<const DescriptionID> descriptions(SampleID i) const {
        return _samples[i].descriptions;
    }

    [[nodiscard]] std::int64_t external_sample_id(SampleID i) const;
    [[nodiscard]] std::int64_t external_description_id(DescriptionID d) const;

    // Σ_x |T(x)|
    [[nodiscard]] std::int64_t total_set_size() const;

private:
    std::vector<Sample>       _samples;
    DescriptionID             _num_descriptions = 0;
    std::vector<std::int64_t> _external_sample_ids;
    std::vector<std::int64_t> _external_description_ids;
};

struct TriggerLexicon {
    struct Entry {
        std::string   phrase; // lowercase, non-empty
        DescriptionID description;
    };
    std::vector<Entry> entries;
};

// JSONL, one {"id", "descriptions", "label"?, "text"?} object per line.
Dataset load_dataset(const std::string& path);
Dataset read_dataset(std::istream& in);
void    write_dataset(std::ostream& out, const Dataset& dataset);
void    write_dataset(const std::string& path, const Dataset& dataset);

// TSV lines "trigger_phrase<TAB>description_id".
TriggerLexicon load_lexicon(const std::string& path);
TriggerLexicon read_lexicon(std::istream& in);

// Lowercased tokens; tokens are maximal runs of characters that are neither
// whitespace nor ASCII punctuation.
std::vector<std::string> tokenize(std::string_view text);

/**
 * Builds a dataset whose i-th sample holds every description with a trigger
 * phrase occurring in texts[i] as a contiguous token sequence (case-insensitive).
 * Description IDs are those of the lexicon; M = 1 + max lexicon ID.
 */
Dataset match_triggers(const std::vector<std::string>& texts, const TriggerLexicon& lexicon);

struct PlantedConfig {
    std::size_t   n                  = 0;
    std::uint32_t k_clusters         = 1;
    std::uint32_t shared_per_cluster = 0;
    std::uint32_t private_per_sample = 0;
    double        noise_overlap      = 0.0;
    std::uint64_t seed               = 0;
};

/**
 * Planted-cluster instance. Samples are distributed over `k_clusters` equally
 * sized clusters (membership shuffled by seed). Every member of a cluster holds
 * the cluster's `shared_per_cluster` descriptions plus `private_per_sample`
 * descriptions of its own. With probability `noise_overlap` a sample also gets
 * one shared description of a uniformly chosen other cluster.
 *
 * Returns the dataset and the planted partition (batch b = cluster b).
 */
std::pair<Dataset, Partition> generate_planted(const PlantedConfig& config);

// Keeps the first `cap` descriptions (ascending dense ID) of every sample.
Dataset cap_descriptions(const Dataset& dataset, std::size_t cap);

} // namespace batchcut
