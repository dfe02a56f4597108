#include <cmath>

#include "doctest.h"

#include "batchcut/oracle.h"
#include "batchcut/pipeline.h"
#include "batchcut/theory.h"
#include "support.h"

using namespace batchcut;
using batchcut::testing::counting_fixture;

TEST_CASE("count_balanced_partitions") {
    CHECK(count_balanced_partitions(4, 2) == doctest::Approx(3.0));
    CHECK(count_balanced_partitions(6, 3) == doctest::Approx(15.0));
    CHECK(count_balanced_partitions(7, 3) == doctest::Approx(105.0));
    CHECK(count_balanced_partitions(5, 1) == doctest::Approx(1.0));
    CHECK(count_balanced_partitions(5, 5) == doctest::Approx(1.0));
}

TEST_CASE("brute_force_optimal") {
    SUBCASE("fixture") {
        const auto best = brute_force_optimal(counting_fixture(), 2);
        CHECK(best.objective == 4);
        CHECK(best.partition == testing::batches({{0, 1}, {2, 3}}, 4));
    }
    SUBCASE("disjoint sets") {
        const auto dataset = Dataset::from_sets({{0}, {1, 2}, {3}, {4, 5, 6}, {7}, {8}});
        CHECK(brute_force_optimal(dataset, 3).objective == 9);
    }
    SUBCASE("n = k") {
        std::mt19937_64 rng(3);
        const auto      dataset = testing::random_dataset(6, 8, 0.4, rng);
        CHECK(brute_force_optimal(dataset, 6).objective == static_cast<std::int64_t>(dataset.total_set_size()));
    }
    SUBCASE("too large") {
        std::mt19937_64 rng(4);
        CHECK_THROWS_AS(brute_force_optimal(testing::random_dataset(30, 5, 0.5, rng), 15), InstanceTooLarge);
    }
}

TEST_CASE("brute force matches an independent enumeration") {
    // Enumerate all assignment vectors with the right batch sizes and take the minimum.
    std::mt19937_64 rng(5);
    for (int round = 0; round < 20; ++round) {
        const std::size_t n       = 2 + rng() % 7;
        const auto        k       = static_cast<BatchID>(1 + rng() % n);
        const auto        dataset = testing::random_dataset(n, 8, 0.35, rng);
        const auto        caps    = make_capacities(n, k);

        std::int64_t         best = std::numeric_limits<std::int64_t>::max();
        std::vector<BatchID> assignment(n, 0);
        const auto total = static_cast<std::size_t>(std::pow(k, n));
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t           c = code;
            std::vector<SampleID> load(k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                assignment[i] = static_cast<BatchID>(c % k);
                ++load[assignment[i]];
                c /= k;
            }
            if (load == caps) {
                best = std::min(best, testing::union_objective(dataset, Partition(assignment, caps)));
            }
        }
        CHECK(brute_force_optimal(dataset, k).objective == best);
    }
}

TEST_CASE("random_partition") {
    SUBCASE("deterministic") {
        CHECK(random_partition(10, 3, 7) == random_partition(10, 3, 7));
    }
    SUBCASE("k = 1") {
        const auto p = random_partition(5, 1, 123);
        for (SampleID i = 0; i < 5; ++i) {
            CHECK(p.batch_of(i) == 0);
        }
    }
    SUBCASE("mean objective on the fixture") {
        const auto dataset = counting_fixture();
        double     sum     = 0.0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            sum += static_cast<double>(objective(dataset, random_partition(4, 2, seed)));
        }
        CHECK(std::abs(sum / 1000.0 - 6.0) <= 0.2);
    }
    SUBCASE("each sample lands in each batch about 1/k of the time") {
        const std::size_t n = 12;
        const BatchID     k = 4;
        const int         trials = 4000;
        std::vector<std::vector<int>> hits(n, std::vector<int>(k, 0));
        for (int seed = 0; seed < trials; ++seed) {
            const auto p = random_partition(n, k, static_cast<std::uint64_t>(seed));
            for (SampleID i = 0; i < n; ++i) {
                ++hits[i][p.batch_of(i)];
            }
        }
        const double expected = trials / static_cast<double>(k);
        const double sigma    = std::sqrt(trials * (1.0 / k) * (1.0 - 1.0 / k));
        for (const auto& row: hits) {
            for (const int h: row) {
                CHECK(std::abs(h - expected) <= 4.0 * sigma);
            }
        }
    }
}

TEST_CASE("greedy_partition") {
    CHECK(objective(counting_fixture(), greedy_partition(counting_fixture(), 2)) == 4);
    const auto disjoint = Dataset::from_sets({{0}, {1, 2}, {3}, {4, 5, 6}});
    CHECK(objective(disjoint, greedy_partition(disjoint, 2)) == 7);
    const auto same = Dataset::from_sets(std::vector<std::vector<DescriptionID>>(9, {0, 1, 2}));
    CHECK(objective(same, greedy_partition(same, 3)) == 9);
}

TEST_CASE("brute force is a floor for every method") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 30; ++round) {
        const std::size_t n       = 2 + rng() % 9;
        const auto        k       = static_cast<BatchID>(1 + rng() % n);
        const auto        dataset = testing::random_dataset(n, 10, 0.3, rng);
        const auto        best    = brute_force_optimal(dataset, k).objective;
        CHECK(best <= objective(dataset, random_partition(n, k, rng())));
        CHECK(best <= objective(dataset, greedy_partition(dataset, k)));
        CHECK(best <= objective(dataset, spectral_partition(dataset, k, {.seed = rng()}).partition()));
    }
}
