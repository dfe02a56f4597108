/*******************************************************************************
 * @file:   spectral.h
 * @brief:  Normalized-affinity spectral embedding.
 *
 * The embedding stacks the k' algebraically largest eigenvectors of
 * D^{-1/2} W D^{-1/2} as columns and scales every nonzero row to unit length.
 * Small operators use a dense symmetric eigensolver; larger ones a block
 * Lanczos iteration with full reorthogonalization and thick restarts.
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "batchcut/definitions.h"

namespace batchcut {

class SimilarityGraph;

// Symmetric sparse operator in CSR form.
class AffinityOperator {
public:
    AffinityOperator() = default;
    AffinityOperator(std::size_t n, std::vector<std::size_t> offsets, std::vector<SampleID> columns, std::vector<double> values);

    // Keeps the nonzero entries of a dense symmetric matrix.
    static AffinityOperator from_dense(const Eigen::MatrixXd& matrix);

    [[nodiscard]] std::size_t n() const { return _n; }
    [[nodiscard]] std::size_t nnz() const { return _values.size(); }

    // y = A x for a block of column vectors.
    void apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const;
    [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;

    [[nodiscard]] Eigen::MatrixXd to_dense() const;

private:
    std::size_t              _n = 0;
    std::vector<std::size_t> _offsets;
    std::vector<SampleID>    _columns;
    std::vector<double>      _values;
};

// D^{-1/2} W D^{-1/2} with d^{-1/2} := 0 for isolated vertices.
AffinityOperator normalized_affinity(const SimilarityGraph& graph);

enum class EigenSolverKind { automatic, dense, lanczos };

struct EigenOptions {
    std::size_t     k_prime = 8;
    double          tol     = 1e-8; // on ||A v - λ v||_2
    std::uint64_t   seed    = 0;
    EigenSolverKind solver  = EigenSolverKind::automatic;
    // automatic picks dense up to this size
    std::size_t dense_threshold = 512;
    // Lanczos search-space size; 0 means 10 k' + 100.
    std::size_t basis_size   = 0;
    std::size_t max_restarts = 40;
    // Otherwise return the best Ritz pairs with converged = false.
    bool throw_on_nonconvergence = true;
};

struct EigenResult {
    Eigen::VectorXd     values;    // descending
    Eigen::MatrixXd     vectors;   // n × k', orthonormal columns
    std::vector<double> residuals; // per pair
    bool                converged    = true;
    std::size_t         restarts     = 0;
    std::size_t         matvecs      = 0;
    EigenSolverKind     solver_used  = EigenSolverKind::dense;

    [[nodiscard]] double max_residual() const;
};

/**
 * The k' algebraically largest eigenpairs. Within (numerically) repeated
 * eigenvalues the basis is canonicalized by vertex order; each vector is signed
 * so that its largest-magnitude entry is positive.
 */
EigenResult top_eigenpairs(const AffinityOperator& op, const EigenOptions& options);

struct SpectralEmbedding {
    Eigen::MatrixXd points;      // n × k'
    Eigen::VectorXd eigenvalues; // descending
    std::size_t     k_prime = 0;
    bool            converged    = true;
    double          max_residual = 0.0;
};

struct EmbedOptions {
    std::size_t     k_prime = 8;
    std::uint64_t   seed    = 0;
    double          tol     = 1e-8;
    EigenSolverKind solver  = EigenSolverKind::automatic;
    // Fail instead of using unconverged Ritz vectors.
    bool strict = false;
};

inline constexpr std::size_t kDefaultKPrime = 8;

// min(8, k, n), at least 1.
std::size_t default_k_prime(std::size_t n, std::size_t k);

SpectralEmbedding embed(const SimilarityGraph& graph, const EmbedOptions& options);

// n rows, k' comma-separated columns, no header.
void write_embedding_csv(std::ostream& out, const SpectralEmbedding& embedding);

} // namespace batchcut
