/*******************************************************************************
 * @file:   support.h
 * @brief:  Fixtures, random instance generators and independent reference
 *          implementations used by the unit and acceptance suites.
 *
 * Nothing here calls into the code paths it is used to check.
 ******************************************************************************/
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "batchcut/dataset.h"
#include "batchcut/partition.h"

namespace batchcut::testing {

// Four samples: {t1,t2}, {t1,t2}, {t3,t4}, {t3}. Pairing (0,1)(2,3) needs 4
// encodings, (0,2)(1,3) needs 7.
inline Dataset counting_fixture() {
    return Dataset::from_sets({{0, 1}, {0, 1}, {2, 3}, {2}});
}

inline Partition batches(const std::vector<std::vector<SampleID>>& members, const std::size_t n) {
    return Partition::from_batches(members, n);
}

// n samples, each holding every description of [0, m) with probability p.
inline Dataset random_dataset(const std::size_t n, const DescriptionID m, const double p, std::mt19937_64& rng) {
    std::bernoulli_distribution             coin(p);
    std::vector<std::vector<DescriptionID>> sets(n);
    for (auto& set: sets) {
        for (DescriptionID t = 0; t < m; ++t) {
            if (coin(rng)) {
                set.push_back(t);
            }
        }
    }
    std::vector<Sample> samples;
    for (auto& set: sets) {
        samples.push_back({std::move(set), {}, std::nullopt});
    }
    return {std::move(samples), m};
}

inline std::int64_t pairwise_intersection(const Dataset& dataset, const SampleID a, const SampleID b) {
    const auto         x = dataset.descriptions(a);
    const auto         y = dataset.descriptions(b);
    std::vector<DescriptionID> common;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
    return static_cast<std::int64_t>(common.size());
}

// Direct set-union objective.
inline std::int64_t union_objective(const Dataset& dataset, const Partition& partition) {
    std::int64_t total = 0;
    for (const auto& members: partition.batches()) {
        std::set<DescriptionID> uni;
        for (const SampleID i: members) {
            uni.insert(dataset.descriptions(i).begin(), dataset.descriptions(i).end());
        }
        total += static_cast<std::int64_t>(uni.size());
    }
    return total;
}

// Cyclic Jacobi rotations; returns eigenvalues in descending order.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, const double tol = 1e-14) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                off += a(p, q) * a(p, q);
            }
        }
        if (std::sqrt(off) < tol) {
            break;
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t     = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c     = 1.0 / std::sqrt(t * t + 1.0);
                const double s     = t * c;
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p)          = c * arp - s * arq;
                    a(r, q)          = s * arp + c * arq;
                }
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r)          = c * apr - s * aqr;
                    a(q, r)          = s * apr + c * aqr;
                }
            }
        }
    }
    std::vector<double> values(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        values[static_cast<std::size_t>(i)] = a(i, i);
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    return Eigen::Map<Eigen::VectorXd>(values.data(), n);
}

// Dense D^{-1/2} W D^{-1/2} straight from pairwise intersections.
inline Eigen::MatrixXd reference_affinity(const Dataset& dataset) {
    const auto      n = static_cast<Eigen::Index>(dataset.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j) {
                w(i, j) = static_cast<double>(
                    pairwise_intersection(dataset, static_cast<SampleID>(i), static_cast<SampleID>(j))
                );
            }
        }
    }
    const Eigen::VectorXd d = w.rowwise().sum();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            w(i, j) = d[i] > 0 && d[j] > 0 ? w(i, j) / std::sqrt(d[i] * d[j]) : 0.0;
        }
    }
    return w;
}

// The assignment step written exactly as described: materialize all n·k
// pairs, sort by (distance, sample, center), sweep.
inline std::vector<BatchID> full_sort_assignment(
    const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers, const std::vector<SampleID>& capacities
) {
    std::vector<std::tuple<double, SampleID, BatchID>> pairs;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < centers.rows(); ++j) {
            pairs.emplace_back((points.row(i) - centers.row(j)).norm(), i, j);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    constexpr BatchID     kNone = static_cast<BatchID>(-1);
    std::vector<BatchID>  assignment(static_cast<std::size_t>(points.rows()), kNone);
    std::vector<SampleID> load(capacities.size(), 0);
    for (const auto& [d, i, j]: pairs) {
        if (assignment[i] == kNone && load[j] < capacities[j]) {
            assignment[i] = j;
            ++load[j];
        }
    }
    return assignment;
}

// Unconstrained nearest center (ties to lower index).
inline std::vector<BatchID> nearest_center(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centers) {
    std::vector<BatchID> assignment(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < centers.rows(); ++j) {
            const double d = (points.row(i) - centers.row(j)).norm();
            if (d < best) {
                best                                   = d;
                assignment[static_cast<std::size_t>(i)] = static_cast<BatchID>(j);
            }
        }
    }
    return assignment;
}

inline Eigen::MatrixXd random_points(const Eigen::Index n, const Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd                  points(n, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            points(i, j) = normal(rng);
        }
    }
    return points;
}

} // namespace batchcut::testing
