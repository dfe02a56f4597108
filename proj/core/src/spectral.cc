/*******************************************************************************
 * @file:   spectral.cc
 * @brief:  Normalized affinity operator, top eigenpairs and the row-normalized
 *          spectral embedding.
 ******************************************************************************/
#include "batchcut/spectral.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>

#include "batchcut/parallel.h"
#include "batchcut/simgraph.h"

namespace batchcut {

AffinityOperator::AffinityOperator(
    const std::size_t n, std::vector<std::size_t> offsets, std::vector<SampleID> columns, std::vector<double> values
)
    : _n(n),
      _offsets(std::move(offsets)),
      _columns(std::move(columns)),
      _values(std::move(values)) {
    if (_offsets.size() != _n + 1 || _columns.size() != _values.size() || _offsets.back() != _values.size()) {
        throw InvalidArgument("inconsistent CSR arrays");
    }
    for (const SampleID c: _columns) {
        if (c >= _n) {
            throw InvalidArgument("column index out of range");
        }
    }
}

AffinityOperator AffinityOperator::from_dense(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw InvalidArgument("operator must be square");
    }
    const auto               n = static_cast<std::size_t>(matrix.rows());
    std::vector<std::size_t> offsets{0};
    std::vector<SampleID>    columns;
    std::vector<double>      values;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (matrix(i, j) != 0.0) {
                columns.push_back(static_cast<SampleID>(j));
                values.push_back(matrix(i, j));
            }
        }
        offsets.push_back(values.size());
    }
    return {n, std::move(offsets), std::move(columns), std::move(values)};
}

void AffinityOperator::apply(const Eigen::MatrixXd& x, Eigen::MatrixXd& y) const {
    if (static_cast<std::size_t>(x.rows()) != _n) {
        throw InvalidArgument("operand has the wrong number of rows");
    }
    const Eigen::Index cols = x.cols();
    y.setZero(static_cast<Eigen::Index>(_n), cols);
    parallel_for(_n, 1024, [&](const std::size_t begin, const std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t e = _offsets[i]; e < _offsets[i + 1]; ++e) {
                const double       v = _values[e];
                const Eigen::Index c = _columns[e];
                for (Eigen::Index j = 0; j < cols; ++j) {
                    y(static_cast<Eigen::Index>(i), j) += v * x(c, j);
                }
            }
        }
    });
}

Eigen::MatrixXd AffinityOperator::apply(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd y;
    apply(x, y);
    return y;
}

Eigen::MatrixXd AffinityOperator::to_dense() const {
    const auto      n = static_cast<Eigen::Index>(_n);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < _n; ++i) {
        for (std::size_t e = _offsets[i]; e < _offsets[i + 1]; ++e) {
            dense(static_cast<Eigen::Index>(i), _columns[e]) += _values[e];
        }
    }
    return dense;
}

AffinityOperator normalized_affinity(const SimilarityGraph& graph) {
    const std::size_t   n = graph.n();
    std::vector<double> inv_sqrt_degree(n, 0.0);
    for (SampleID u = 0; u < n; ++u) {
        if (graph.degree(u) > 0) {
            inv_sqrt_degree[u] = 1.0 / std::sqrt(static_cast<double>(graph.degree(u)));
        }
    }

    const auto offsets = graph.raw_offsets();
    const auto columns = graph.raw_neighbors();
    const auto weights = graph.raw_weights();

    std::vector<double> values(weights.size());
    for (SampleID u = 0; u < n; ++u) {
        for (std::size_t e = offsets[u]; e < offsets[u + 1]; ++e) {
            values[e] = static_cast<double>(weights[e]) * inv_sqrt_degree[u] * inv_sqrt_degree[columns[e]];
        }
    }
    return {
        n,
        std::vector<std::size_t>(offsets.begin(), offsets.end()),
        std::vector<SampleID>(columns.begin(), columns.end()),
        std::move(values),
    };
}

double EigenResult::max_residual() const {
    return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

namespace {
// Consecutive eigenvalues closer than this are treated as one eigenspace.
constexpr double kDegenerateGap = 1e-9;
// Squared norm below which a projected unit vector is considered to vanish.
constexpr double kProjectionFloor = 1e-8;

/**
 * Replaces the columns of `q` (an orthonormal basis of one eigenspace) by the
 * basis obtained from projecting e_0, e_1, ... onto the space in vertex order
 * and orthonormalizing. The result depends only on the subspace.
 */
void canonicalize_basis(Eigen::Ref<Eigen::MatrixXd> q) {
    const Eigen::Index n = q.rows();
    const Eigen::Index m = q.cols();
    if (m <= 1) {
        return;
    }

    Eigen::MatrixXd basis(n, m);
    Eigen::VectorXd covered = Eigen::VectorXd::Zero(n); // Σ_b basis(i, b)²
    Eigen::Index    count   = 0;

    for (Eigen::Index i = 0; i < n && count < m; ++i) {
        if (q.row(i).squaredNorm() - covered[i] <= kProjectionFloor) {
            continue;
        }
        Eigen::VectorXd v = q * q.row(i).transpose();
        for (int pass = 0; pass < 2; ++pass) {
            v -= basis.leftCols(count) * (basis.leftCols(count).transpose() * v);
        }
        const double norm = v.norm();
        if (norm * norm <= kProjectionFloor) {
            continue;
        }
        basis.col(count) = v / norm;
        covered += basis.col(count).array().square().matrix();
        ++count;
    }
    if (count == m) {
        q = basis;
    }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    if (v.size() == 0) {
        return;
    }
    const double largest = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= largest - 1e-12) {
            if (v[i] < 0.0) {
                v = -v;
            }
            return;
        }
    }
}

// Canonicalizes every eigenvalue cluster that starts among the first `wanted`
// columns; clusters may extend past `wanted` if the columns exist.
void canonicalize_clusters(const Eigen::VectorXd& values, Eigen::MatrixXd& vectors, const Eigen::Index wanted) {
    Eigen::Index start = 0;
    while (start < wanted) {
        Eigen::Index end = start + 1;
        while (end < values.size() && values[end - 1] - values[end] <= kDegenerateGap) {
            ++end;
        }
        if (end - start > 1) {
            canonicalize_basis(vectors.middleCols(start, end - start));
        }
        start = end;
    }
    for (Eigen::Index j = 0; j < wanted; ++j) {
        fix_sign(vectors.col(j));
    }
}

std::vector<double> residual_norms(const AffinityOperator& op, const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors) {
    const Eigen::MatrixXd r = op.apply(vectors) - vectors * values.asDiagonal();
    std::vector<double>   norms(static_cast<std::size_t>(r.cols()));
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        norms[static_cast<std::size_t>(j)] = r.col(j).norm();
    }
    return norms;
}

EigenResult dense_eigenpairs(const AffinityOperator& op, const std::size_t k_prime) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.to_dense());
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("dense symmetric eigensolver failed", std::numeric_limits<double>::infinity());
    }
    // Eigen returns ascending order.
    Eigen::VectorXd values  = solver.eigenvalues().reverse();
    Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

    const auto kp = static_cast<Eigen::Index>(k_prime);
    canonicalize_clusters(values, vectors, kp);

    EigenResult result;
    result.values      = values.head(kp);
    result.vectors     = vectors.leftCols(kp);
    result.residuals   = residual_norms(op, result.values, result.vectors);
    result.solver_used = EigenSolverKind::dense;
    return result;
}

/**
 * Block Lanczos with full reorthogonalization and thick restart.
 *
 * V holds an orthonormal basis of the search space and W = A V. The space is
 * grown block by block from A times the newest block (Krylov expansion); a
 * column that vanishes after orthogonalization (breakdown) is replaced by a
 * random direction. When the basis is full, Rayleigh-Ritz on H = Vᵀ W gives
 * Ritz pairs; unless converged, the leading Ritz vectors are kept and the
 * space is regrown from their residuals.
 */
class BlockLanczos {
public:
    BlockLanczos(const AffinityOperator& op, const EigenOptions& options)
        : _op(op),
          _n(static_cast<Eigen::Index>(op.n())),
          _wanted(static_cast<Eigen::Index>(options.k_prime)),
          _block(_wanted),
          _rng(options.seed),
          _options(options) {
        const std::size_t requested = options.basis_size > 0 ? options.basis_size : 10 * options.k_prime + 100;
        _capacity = std::min<Eigen::Index>(_n, static_cast<Eigen::Index>(requested));
        _capacity = std::max(_capacity, std::min<Eigen::Index>(_n, 2 * _wanted + 1));
        _basis.resize(_n, _capacity);
        _image.resize(_n, _capacity);
    }

    EigenResult run() {
        EigenResult result;
        result.solver_used = EigenSolverKind::lanczos;

        Eigen::Index newest_begin = 0;
        Eigen::Index newest_count = append(random_block(_block), true);

        for (std::size_t restart = 0;; ++restart) {
            while (_size < _capacity && newest_count > 0) {
                const Eigen::Index    take = std::min(_block, _capacity - _size);
                const Eigen::MatrixXd next = _image.middleCols(newest_begin, std::min(newest_count, take));
                newest_begin               = _size;
                newest_count               = append(next, true);
            }

            // Rayleigh-Ritz on the current space.
            Eigen::MatrixXd projected = _basis.leftCols(_size).transpose() * _image.leftCols(_size);
            projected                 = 0.5 * (projected + projected.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(projected);
            const Eigen::VectorXd theta = rr.eigenvalues().reverse();
            const Eigen::MatrixXd y     = rr.eigenvectors().rowwise().reverse();

            const Eigen::MatrixXd ritz       = _basis.leftCols(_size) * y.leftCols(_wanted);
            const Eigen::MatrixXd ritz_image = _image.leftCols(_size) * y.leftCols(_wanted);
            const Eigen::MatrixXd residual   = ritz_image - ritz * theta.head(_wanted).asDiagonal();

            double worst = 0.0;
            for (Eigen::Index j = 0; j < _wanted; ++j) {
                worst = std::max(worst, residual.col(j).norm());
            }

            result.restarts = restart;
            if (worst <= _options.tol || _size == _n || restart >= _options.max_restarts) {
                result.values    = theta.head(_wanted);
                result.vectors   = ritz;
                result.converged = worst <= _options.tol || _size == _n;
                result.matvecs   = _matvecs;
                if (!result.converged && _options.throw_on_nonconvergence) {
                    throw ConvergenceError(
                        "Lanczos did not reach tolerance " + std::to_string(_options.tol) + " after "
                            + std::to_string(restart) + " restarts (residual " + std::to_string(worst) + ")",
                        worst
                    );
                }
                return result;
            }

            // Thick restart: keep the leading Ritz vectors.
            const Eigen::Index keep = std::min(_size - 1, _wanted + _block);
            _basis.leftCols(keep)   = (_basis.leftCols(_size) * y.leftCols(keep)).eval();
            _image.leftCols(keep)   = (_image.leftCols(_size) * y.leftCols(keep)).eval();
            _size                   = keep;

            newest_begin = _size;
            newest_count = append(residual, false);
            if (newest_count == 0) {
                newest_count = append(random_block(_block), true);
            }
        }
    }

private:
    Eigen::MatrixXd random_block(const Eigen::Index cols) {
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd                  block(_n, cols);
        for (Eigen::Index j = 0; j < cols; ++j) {
            for (Eigen::Index i = 0; i < _n; ++i) {
                block(i, j) = normal(_rng);
            }
        }
        return block;
    }

    // Orthogonalizes v against the basis (twice) and normalizes it. Returns
    // false if nothing remains of v.
    bool orthonormalize(Eigen::VectorXd& v) const {
        const double original = v.norm();
        if (original == 0.0) {
            return false;
        }
        for (int pass = 0; pass < 2; ++pass) {
            v -= _basis.leftCols(_size) * (_basis.leftCols(_size).transpose() * v);
        }
        const double norm = v.norm();
        if (norm <= 1e-10 * original) {
            return false;
        }
        v /= norm;
        return true;
    }

    // Appends the orthonormalized columns of `candidates` and their images.
    // Vanishing columns are replaced by random directions if `fill`.
    Eigen::Index append(const Eigen::MatrixXd& candidates, const bool fill) {
        const Eigen::Index first = _size;
        for (Eigen::Index j = 0; j < candidates.cols() && _size < _capacity && _size < _n; ++j) {
            Eigen::VectorXd v  = candidates.col(j);
            bool            ok = orthonormalize(v);
            for (int attempt = 0; !ok && fill && attempt < 4; ++attempt) {
                v  = random_block(1).col(0);
                ok = orthonormalize(v);
            }
            if (ok) {
                _basis.col(_size++) = v;
            }
        }
        const Eigen::Index added = _size - first;
        if (added > 0) {
            Eigen::MatrixXd image;
            _op.apply(_basis.middleCols(first, added), image);
            _image.middleCols(first, added) = image;
            _matvecs += static_cast<std::size_t>(added);
        }
        return added;
    }

    const AffinityOperator& _op;
    Eigen::Index            _n;
    Eigen::Index            _wanted;
    Eigen::Index            _block;
    Eigen::Index            _capacity = 0;
    Eigen::Index            _size     = 0;
    Eigen::MatrixXd         _basis;
    Eigen::MatrixXd         _image;
    std::mt19937_64         _rng;
    std::size_t             _matvecs = 0;
    const EigenOptions&     _options;
};
} // namespace

EigenResult top_eigenpairs(const AffinityOperator& op, const EigenOptions& options) {
    const std::size_t n = op.n();
    if (options.k_prime < 1 || options.k_prime > n) {
        throw InvalidArgument(
            "k' must satisfy 1 <= k' <= n (k'=" + std::to_string(options.k_prime) + ", n=" + std::to_string(n) + ")"
        );
    }

    EigenSolverKind kind = options.solver;
    if (kind == EigenSolverKind::automatic) {
        kind = n <= options.dense_threshold ? EigenSolverKind::dense : EigenSolverKind::lanczos;
    }
    if (kind == EigenSolverKind::dense) {
        return dense_eigenpairs(op, options.k_prime);
    }

    EigenResult result = BlockLanczos(op, options).run();
    canonicalize_clusters(result.values, result.vectors, result.vectors.cols());
    result.residuals = residual_norms(op, result.values, result.vectors);
    ++result.matvecs;
    return result;
}

std::size_t default_k_prime(const std::size_t n, const std::size_t k) {
    return std::max<std::size_t>(1, std::min({kDefaultKPrime, k, n}));
}

SpectralEmbedding embed(const SimilarityGraph& graph, const EmbedOptions& options) {
    const std::size_t n = graph.n();
    if (n == 0) {
        throw InvalidArgument("cannot embed an empty graph");
    }
    if (options.k_prime < 1) {
        throw InvalidArgument("k' must be at least 1");
    }

    EigenOptions eigen;
    eigen.k_prime                 = std::min(options.k_prime, n);
    eigen.tol                     = options.tol;
    eigen.seed                    = options.seed;
    eigen.solver                  = options.solver;
    eigen.throw_on_nonconvergence = options.strict;
    const EigenResult eig         = top_eigenpairs(normalized_affinity(graph), eigen);

    SpectralEmbedding embedding;
    embedding.points       = eig.vectors;
    embedding.eigenvalues  = eig.values;
    embedding.k_prime      = eigen.k_prime;
    embedding.converged    = eig.converged;
    embedding.max_residual = eig.max_residual();

    for (SampleID i = 0; i < n; ++i) {
        auto         row  = embedding.points.row(i);
        const double norm = row.norm();
        if (graph.degree(i) == 0 || norm <= 1e-12) {
            row.setZero();
        } else {
            row /= norm;
        }
    }
    return embedding;
}

void write_embedding_csv(std::ostream& out, const SpectralEmbedding& embedding) {
    char buffer[32];
    for (Eigen::Index i = 0; i < embedding.points.rows(); ++i) {
        for (Eigen::Index j = 0; j < embedding.points.cols(); ++j) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", embedding.points(i, j));
            if (j > 0) {
                out << ',';
            }
            out << buffer;
        }
        out << '\n';
    }
}

} // namespace batchcut
