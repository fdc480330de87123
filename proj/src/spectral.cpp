#include "gspnetmon/spectral.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "gspnetmon/error.hpp"
#include "gspnetmon/io_util.hpp"

namespace gspnetmon {

Laplacian laplacian(const LayerGraph& g, LaplacianKind kind) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Vector degree(n);
    for (Eigen::Index v = 0; v < n; ++v) degree(v) = g.weighted_degree(static_cast<std::size_t>(v));

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(g.adjacency().nonZeros() + n));
    if (kind == LaplacianKind::Combinatorial) {
        for (Eigen::Index v = 0; v < n; ++v) {
            if (degree(v) != 0.0) triplets.emplace_back(v, v, degree(v));
        }
        for (const auto& e : g.edges()) {
            triplets.emplace_back(e.u, e.v, -e.weight);
            triplets.emplace_back(e.v, e.u, -e.weight);
        }
    } else {
        // Isolated vertices get a zero row.
        for (Eigen::Index v = 0; v < n; ++v) {
            if (degree(v) > 0.0) triplets.emplace_back(v, v, 1.0);
        }
        for (const auto& e : g.edges()) {
            const double w = -e.weight / std::sqrt(degree(e.u) * degree(e.v));
            triplets.emplace_back(e.u, e.v, w);
            triplets.emplace_back(e.v, e.u, w);
        }
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    Laplacian l = laplacian_from_matrix(std::move(m));
    l.kind = kind;
    return l;
}

Laplacian laplacian_from_matrix(SparseMatrix matrix) {
    if (matrix.rows() != matrix.cols()) throw DimensionError("Laplacian must be square");
    Laplacian l;
    l.lambda_max_estimate = estimate_lambda_max(matrix);
    l.matrix = std::move(matrix);
    return l;
}

double estimate_lambda_max(const SparseMatrix& matrix, int iterations) {
    const auto n = matrix.rows();
    if (n == 0) return 0.0;
    std::mt19937_64 engine(0x5eed);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
    }
    double rayleigh = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double norm = v.norm();
        if (norm == 0.0) return 0.0;
        v /= norm;
        Vector w = matrix * v;
        rayleigh = v.dot(w);
        v = std::move(w);
    }
    return 1.01 * std::max(rayleigh, 0.0);
}

EigenBasis eigendecompose(const Laplacian& l, std::size_t cap) {
    const auto n = l.size();
    if (n > cap) {
        throw CapacityError("graph has " + std::to_string(n) +
                            " vertices, above the dense eigensolver cap of " + std::to_string(cap) +
                            "; use the Chebyshev path instead");
    }
    EigenBasis basis;
    if (n == 0) return basis;
    const Eigen::MatrixXd dense = Eigen::MatrixXd(l.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
    basis.eigenvalues = solver.eigenvalues();
    basis.eigenvectors = solver.eigenvectors();
    for (Eigen::Index j = 0; j < basis.eigenvectors.cols(); ++j) {
        auto col = basis.eigenvectors.col(j);
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::abs(col(i)) > 1e-10) {
                if (col(i) < 0.0) col = -col;
                break;
            }
        }
    }
    return basis;
}

Spectrum gft(const Vector& x, const EigenBasis& basis) {
    if (static_cast<std::size_t>(x.size()) != basis.size()) {
        throw DimensionError("signal has " + std::to_string(x.size()) + " values, basis has " +
                             std::to_string(basis.size()));
    }
    return {basis.eigenvectors.transpose() * x};
}

Spectrum gft(const GraphSignal& x, const EigenBasis& basis) { return gft(x.to_vector(), basis); }

Vector igft(const Spectrum& s, const EigenBasis& basis) {
    if (s.size() != basis.size()) {
        throw DimensionError("spectrum has " + std::to_string(s.size()) + " coefficients, basis has " +
                             std::to_string(basis.size()));
    }
    return basis.eigenvectors * s.coefficients;
}

double high_frequency_ratio(const Spectrum& s, const EigenBasis& basis, double cutoff_fraction) {
    if (!(cutoff_fraction > 0.0 && cutoff_fraction < 1.0)) {
        throw ParameterError("cutoff_fraction must lie in (0, 1)");
    }
    if (s.size() != basis.size()) throw DimensionError("spectrum and basis sizes differ");
    if (s.size() < 2) return 0.0;
    const double cutoff = cutoff_fraction * basis.lambda_max();
    double total = s.coefficients(0) * s.coefficients(0);
    double non_dc = 0.0;
    double high = 0.0;
    for (Eigen::Index j = 1; j < s.coefficients.size(); ++j) {
        const double e = s.coefficients(j) * s.coefficients(j);
        non_dc += e;
        if (basis.eigenvalues(j) > cutoff) high += e;
    }
    total += non_dc;
    if (non_dc == 0.0 || non_dc <= 1e-20 * total) return 0.0;
    return high / non_dc;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s, const EigenBasis& basis) {
    if (s.size() != basis.size()) throw DimensionError("spectrum and basis sizes differ");
    out << "j,lambda,coefficient\n";
    for (std::size_t j = 0; j < s.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        out << j << ',' << format_real(basis.eigenvalues(i)) << ','
            << format_real(s.coefficients(i)) << '\n';
    }
}

}  // namespace gspnetmon
