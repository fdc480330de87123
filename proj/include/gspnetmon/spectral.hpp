#pragma once

#include <cstddef>
#include <iosfwd>

#include "gspnetmon/graph.hpp"

namespace gspnetmon {

/// Largest graph the dense eigensolver accepts by default.
inline constexpr std::size_t kDenseSolverCap = 4096;

enum class LaplacianKind { Combinatorial, Normalized };

/// L = D - A (or I - D^-1/2 A D^-1/2 for the normalized variant) plus an
/// upper estimate of its spectral radius.
struct Laplacian {
    SparseMatrix matrix;
    /// Power-method Rayleigh quotient after 50 iterations, inflated by 1%.
    double lambda_max_estimate = 0.0;
    LaplacianKind kind = LaplacianKind::Combinatorial;

    std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

Laplacian laplacian(const LayerGraph& g, LaplacianKind kind = LaplacianKind::Combinatorial);

/// Wraps an existing symmetric Laplacian matrix (e.g. a Kron reduction).
Laplacian laplacian_from_matrix(SparseMatrix matrix);

/// Rayleigh-quotient power iteration from a fixed start vector, times 1.01.
double estimate_lambda_max(const SparseMatrix& matrix, int iterations = 50);

/// Ascending eigenvalues with orthonormal eigenvectors in the columns.
struct EigenBasis {
    Vector eigenvalues;
    Eigen::MatrixXd eigenvectors;

    std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
    double lambda_max() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0; }
};

/// Full eigensystem of a Laplacian. Each eigenvector is oriented so its first
/// component with magnitude above 1e-10 is positive. Throws CapacityError
/// above `cap` vertices.
EigenBasis eigendecompose(const Laplacian& l, std::size_t cap = kDenseSolverCap);

/// Graph Fourier coefficients, aligned with the eigenvalue order.
struct Spectrum {
    Vector coefficients;

    std::size_t size() const { return static_cast<std::size_t>(coefficients.size()); }
};

Spectrum gft(const Vector& x, const EigenBasis& basis);
Spectrum gft(const GraphSignal& x, const EigenBasis& basis);
Vector igft(const Spectrum& s, const EigenBasis& basis);

/// Share of non-DC energy carried by eigenvalues above
/// cutoff_fraction * lambda_max. The DC term (index 0) is excluded from both
/// sums. Returns 0 when the non-DC energy vanishes (relative to total energy
/// below 1e-20). Requires 0 < cutoff_fraction < 1.
double high_frequency_ratio(const Spectrum& s, const EigenBasis& basis,
                            double cutoff_fraction = 0.5);

/// CSV with header `j,lambda,coefficient`, 17 significant digits.
void write_spectrum_csv(std::ostream& out, const Spectrum& s, const EigenBasis& basis);

}  // namespace gspnetmon
