/*******************************************************************************
 * @file:   dataset.cc
 * @brief:  Dataset construction, JSONL/TSV I/O, trigger matching, planted
 *          instances.
 ******************************************************************************/
#include "batchcut/dataset.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "batchcut/partition.h"

namespace batchcut {

Dataset::Dataset(
    std::vector<Sample>       samples,
    const DescriptionID       num_descriptions,
    std::vector<std::int64_t> external_sample_ids,
    std::vector<std::int64_t> external_description_ids
)
    : _samples(std::move(samples)),
      _num_descriptions(num_descriptions),
      _external_sample_ids(std::move(external_sample_ids)),
      _external_description_ids(std::move(external_description_ids)) {
    if (!_external_sample_ids.empty() && _external_sample_ids.size() != _samples.size()) {
        throw InvalidArgument("external sample id table has the wrong size");
    }
    if (!_external_description_ids.empty() && _external_description_ids.size() != _num_descriptions) {
        throw InvalidArgument("external description id table has the wrong size");
    }
    for (auto& sample: _samples) {
        auto& set = sample.descriptions;
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        if (!set.empty() && set.back() >= _num_descriptions) {
            throw InvalidArgument(
                "description id " + std::to_string(set.back()) + " >= M=" + std::to_string(_num_descriptions)
            );
        }
    }
}

Dataset Dataset::from_sets(const std::vector<std::vector<DescriptionID>>& sets) {
    std::vector<Sample> samples;
    samples.reserve(sets.size());
    DescriptionID m = 0;
    for (const auto& set: sets) {
        for (const DescriptionID d: set) {
            m = std::max(m, d + 1);
        }
        samples.push_back({set, {}, std::nullopt});
    }
    return {std::move(samples), m};
}

std::int64_t Dataset::external_sample_id(const SampleID i) const {
    return _external_sample_ids.empty() ? static_cast<std::int64_t>(i) : _external_sample_ids[i];
}

std::int64_t Dataset::external_description_id(const DescriptionID d) const {
    return _external_description_ids.empty() ? static_cast<std::int64_t>(d) : _external_description_ids[d];
}

std::int64_t Dataset::total_set_size() const {
    std::int64_t total = 0;
    for (const auto& sample: _samples) {
        total += static_cast<std::int64_t>(sample.descriptions.size());
    }
    return total;
}

namespace {
std::int64_t read_non_negative(const nlohmann::json& value, const char* what, const std::size_t line) {
    if (!value.is_number_integer()) {
        throw ParseError(std::string(what) + " must be an integer", line);
    }
    const auto id = value.get<std::int64_t>();
    if (id < 0) {
        throw ParseError(std::string("negative ") + what + " " + std::to_string(id), line);
    }
    return id;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](const unsigned char c) { return std::isspace(c) != 0; });
}
} // namespace

Dataset read_dataset(std::istream& in) {
    struct RawSample {
        std::int64_t              id;
        std::vector<std::int64_t> descriptions;
        std::string               label;
        std::optional<std::string> text;
    };
    std::vector<RawSample>           raw;
    std::unordered_set<std::int64_t> seen_ids;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) {
            throw ParseError("expected a JSON object", line_no);
        }
        if (!obj.contains("id")) {
            throw ParseError("missing \"id\"", line_no);
        }
        if (!obj.contains("descriptions") || !obj["descriptions"].is_array()) {
            throw ParseError("missing \"descriptions\" array", line_no);
        }

        RawSample sample;
        sample.id = read_non_negative(obj["id"], "sample id", line_no);
        if (!seen_ids.insert(sample.id).second) {
            throw ParseError("duplicate sample id " + std::to_string(sample.id), line_no);
        }
        for (const auto& d: obj["descriptions"]) {
            sample.descriptions.push_back(read_non_negative(d, "description id", line_no));
        }
        if (obj.contains("label") && !obj["label"].is_null()) {
            if (!obj["label"].is_string()) {
                throw ParseError("\"label\" must be a string", line_no);
            }
            sample.label = obj["label"].get<std::string>();
        }
        if (obj.contains("text") && !obj["text"].is_null()) {
            if (!obj["text"].is_string()) {
                throw ParseError("\"text\" must be a string", line_no);
            }
            sample.text = obj["text"].get<std::string>();
        }
        raw.push_back(std::move(sample));
    }
    if (raw.empty()) {
        throw ParseError("empty dataset", 0);
    }

    // Dense description IDs in ascending order of the external ID.
    std::vector<std::int64_t> external_descriptions;
    for (const auto& sample: raw) {
        external_descriptions.insert(external_descriptions.end(), sample.descriptions.begin(), sample.descriptions.end());
    }
    std::sort(external_descriptions.begin(), external_descriptions.end());
    external_descriptions.erase(
        std::unique(external_descriptions.begin(), external_descriptions.end()), external_descriptions.end()
    );
    std::unordered_map<std::int64_t, DescriptionID> dense;
    dense.reserve(external_descriptions.size());
    for (DescriptionID d = 0; d < external_descriptions.size(); ++d) {
        dense.emplace(external_descriptions[d], d);
    }

    std::vector<Sample>       samples;
    std::vector<std::int64_t> external_samples;
    samples.reserve(raw.size());
    external_samples.reserve(raw.size());
    for (auto& r: raw) {
        Sample sample;
        sample.descriptions.reserve(r.descriptions.size());
        for (const std::int64_t d: r.descriptions) {
            sample.descriptions.push_back(dense.at(d));
        }
        sample.label = std::move(r.label);
        sample.text  = std::move(r.text);
        samples.push_back(std::move(sample));
        external_samples.push_back(r.id);
    }
    const auto m = static_cast<DescriptionID>(external_descriptions.size());
    return {std::move(samples), m, std::move(external_samples), std::move(external_descriptions)};
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return read_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
    for (SampleID i = 0; i < dataset.size(); ++i) {
        const Sample&          sample = dataset.sample(i);
        nlohmann::ordered_json obj;
        obj["id"] = dataset.external_sample_id(i);

        nlohmann::json descriptions = nlohmann::json::array();
        for (const DescriptionID d: sample.descriptions) {
            descriptions.push_back(dataset.external_description_id(d));
        }
        obj["descriptions"] = std::move(descriptions);
        if (!sample.label.empty()) {
            obj["label"] = sample.label;
        }
        if (sample.text) {
            obj["text"] = *sample.text;
        }
        out << obj.dump() << '\n';
    }
}

void write_dataset(const std::string& path, const Dataset& dataset) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path);
    }
    write_dataset(out, dataset);
}

std::vector<std::string> tokenize(const std::string_view text) {
    std::vector<std::string> tokens;
    std::string              current;
    for (const char raw: text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isspace(c) || std::ispunct(c)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

TriggerLexicon read_lexicon(std::istream& in) {
    TriggerLexicon lexicon;
    std::string    line;
    std::size_t    line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (is_blank(line)) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError("expected \"phrase<TAB>description_id\"", line_no);
        }
        std::string phrase = line.substr(0, tab);
        std::transform(phrase.begin(), phrase.end(), phrase.begin(), [](const unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        if (tokenize(phrase).empty()) {
            throw ParseError("empty trigger phrase", line_no);
        }
        long long id = 0;
        try {
            std::size_t consumed = 0;
            const std::string field = line.substr(tab + 1);
            id                      = std::stoll(field, &consumed);
            if (consumed != field.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw ParseError("invalid description id", line_no);
        }
        if (id < 0) {
            throw ParseError("negative description id", line_no);
        }
        lexicon.entries.push_back({std::move(phrase), static_cast<DescriptionID>(id)});
    }
    return lexicon;
}

TriggerLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return read_lexicon(in);
}

Dataset match_triggers(const std::vector<std::string>& texts, const TriggerLexicon& lexicon) {
    if (lexicon.entries.empty()) {
        throw InvalidArgument("trigger lexicon is empty");
    }

    struct Trigger {
        std::vector<std::string> tokens;
        DescriptionID            description;
    };
    // First token -> triggers starting with it.
    std::map<std::string, std::vector<Trigger>, std::less<>> by_head;
    DescriptionID                                            m = 0;
    for (const auto& entry: lexicon.entries) {
        auto tokens = tokenize(entry.phrase);
        if (tokens.empty()) {
            throw InvalidArgument("empty trigger phrase");
        }
        m = std::max(m, entry.description + 1);
        by_head[tokens.front()].push_back({std::move(tokens), entry.description});
    }

    std::vector<Sample> samples;
    samples.reserve(texts.size());
    for (const auto& text: texts) {
        const auto tokens = tokenize(text);
        Sample     sample;
        sample.text = text;
        for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
            const auto it = by_head.find(tokens[pos]);
            if (it == by_head.end()) {
                continue;
            }
            for (const auto& trigger: it->second) {
                if (pos + trigger.tokens.size() <= tokens.size()
                    && std::equal(trigger.tokens.begin(), trigger.tokens.end(), tokens.begin() + pos)) {
                    sample.descriptions.push_back(trigger.description);
                }
            }
        }
        samples.push_back(std::move(sample));
    }
    return {std::move(samples), m};
}

std::pair<Dataset, Partition> generate_planted(const PlantedConfig& config) {
    const std::size_t n = config.n;
    const std::size_t k = config.k_clusters;
    if (n == 0 || k == 0 || n % k != 0) {
        throw InvalidArgument(
            "planted instance needs n divisible by k_clusters (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")"
        );
    }
    if (!(config.noise_overlap >= 0.0 && config.noise_overlap <= 1.0)) {
        throw InvalidArgument("noise_overlap must lie in [0, 1]");
    }

    // Tagged seed sequence keeps this stream apart from plain mt19937_64(seed)
    // users such as random_partition.
    std::seed_seq seq{
        static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32), 0x706c616eU
    };
    std::mt19937_64       rng(seq);
    const std::size_t     cluster_size = n / k;
    std::vector<SampleID> order(n);
    for (SampleID i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<BatchID> cluster_of(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        cluster_of[order[pos]] = static_cast<BatchID>(pos / cluster_size);
    }

    // Layout: cluster c owns [c·shared, (c+1)·shared); sample i owns
    // [k·shared + i·private, k·shared + (i+1)·private).
    const std::size_t shared      = config.shared_per_cluster;
    const std::size_t priv        = config.private_per_sample;
    const std::size_t shared_base = k * shared;
    const auto        m           = static_cast<DescriptionID>(shared_base + n * priv);

    const bool                                   can_add_noise = k >= 2 && shared >= 1 && config.noise_overlap > 0.0;
    std::bernoulli_distribution                  coin(config.noise_overlap);
    std::uniform_int_distribution<std::size_t>   other_cluster(0, k >= 2 ? k - 2 : 0);
    std::uniform_int_distribution<std::size_t>   shared_pick(0, shared >= 1 ? shared - 1 : 0);

    std::vector<Sample> samples(n);
    for (SampleID i = 0; i < n; ++i) {
        auto&             set = samples[i].descriptions;
        const std::size_t c   = cluster_of[i];
        for (std::size_t t = 0; t < shared; ++t) {
            set.push_back(static_cast<DescriptionID>(c * shared + t));
        }
        for (std::size_t t = 0; t < priv; ++t) {
            set.push_back(static_cast<DescriptionID>(shared_base + i * priv + t));
        }
        if (can_add_noise && coin(rng)) {
            std::size_t other = other_cluster(rng);
            if (other >= c) {
                ++other;
            }
            set.push_back(static_cast<DescriptionID>(other * shared + shared_pick(rng)));
        }
    }

    Partition planted(std::move(cluster_of), make_capacities(n, static_cast<BatchID>(k)));
    return {Dataset(std::move(samples), m), std::move(planted)};
}

Dataset cap_descriptions(const Dataset& dataset, const std::size_t cap) {
    std::vector<Sample> samples = dataset.samples();
    for (auto& sample: samples) {
        if (sample.descriptions.size() > cap) {
            sample.descriptions.resize(cap);
        }
    }
    std::vector<std::int64_t> sample_ids(dataset.size());
    for (SampleID i = 0; i < dataset.size(); ++i) {
        sample_ids[i] = dataset.external_sample_id(i);
    }
    std::vector<std::int64_t> description_ids(dataset.num_descriptions());
    for (DescriptionID d = 0; d < dataset.num_descriptions(); ++d) {
        description_ids[d] = dataset.external_description_id(d);
    }
    return {std::move(samples), dataset.num_descriptions(), std::move(sample_ids), std::move(description_ids)};
}

} // namespace batchcut
