#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gspnetmon/graph.hpp"
#include "gspnetmon/spectral.hpp"

namespace gspnetmon {

enum class KernelKind { ScalingLowpass, WaveletBandpass, PyramidLowpass, PyramidHighpass };

/// Real kernel on the Laplacian spectrum. Finite and nonnegative on
/// [0, lambda_max]; band-pass kinds vanish at 0.
class SpectralKernel {
public:
    /// gamma * exp(-(x / (0.6 * lambda_min))^4).
    static SpectralKernel scaling_lowpass(double gamma, double lambda_min);
    /// Cubic-spline band-pass: x^2 below 1, -5 + 11x - 6x^2 + x^3 on [1, 2],
    /// 4 / x^2 above 2. Scales are applied by the caller as g(s * lambda).
    static SpectralKernel wavelet_bandpass();
    /// exp(-(2x / lambda_max)^4).
    static SpectralKernel pyramid_lowpass(double lambda_max);
    /// sqrt(1 - pyramid_lowpass(x)^2), so the pair splits energy exactly.
    static SpectralKernel pyramid_highpass(double lambda_max);

    KernelKind kind() const { return kind_; }
    double operator()(double x) const;

    /// Peak value of the band-pass spline, attained at x = 2 - 1/sqrt(3).
    static double wavelet_peak();

private:
    SpectralKernel(KernelKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    KernelKind kind_;
    double a_;  // gamma (scaling) or lambda_max (pyramid)
    double b_;  // lambda_min (scaling)
};

/// Scaling kernel h, wavelet kernel g and the descending scales s_1 > ... > s_J.
struct WaveletFilterBank {
    SpectralKernel scaling;
    SpectralKernel wavelet;
    std::vector<double> scales;
    double lambda_max = 0.0;

    std::size_t band_count() const { return scales.size(); }
    /// g(s_j * lambda) for the j-th scale (0-based).
    double wavelet_at(std::size_t j, double lambda) const { return wavelet(scales[j] * lambda); }
};

/// Bank over [0, lambda_max] with lambda_min = lambda_max / K, K = 20. Scales
/// are log-spaced from 2 / lambda_min down to 2 / lambda_max (J points), and
/// gamma makes h(0) equal to the peak of g. Throws ParameterError if J == 0 or
/// lambda_max <= 0.
WaveletFilterBank design_filter_bank(double lambda_max, std::size_t J);

/// Complementary low/high pair used by the pyramid, as a one-scale bank (s = 1).
WaveletFilterBank pyramid_filter_bank(double lambda_max);

/// W(n, s_j) for every scale plus the scaling band.
struct WaveletCoefficients {
    Vector scaling_band;
    std::vector<Vector> wavelet_bands;

    std::size_t vertex_count() const { return static_cast<std::size_t>(scaling_band.size()); }
    std::size_t band_count() const { return wavelet_bands.size(); }
    /// Band 0 is the scaling band, bands 1..J the wavelet scales.
    const Vector& band(std::size_t index) const {
        return index == 0 ? scaling_band : wavelet_bands.at(index - 1);
    }
    /// W(vertex, s_scale) with scale in 0..J-1.
    double at(std::size_t scale, std::size_t vertex) const {
        return wavelet_bands.at(scale)(static_cast<Eigen::Index>(vertex));
    }
};

WaveletCoefficients sgwt_exact(const Vector& x, const EigenBasis& basis,
                               const WaveletFilterBank& bank);
WaveletCoefficients sgwt_exact(const GraphSignal& x, const EigenBasis& basis,
                               const WaveletFilterBank& bank);

/// Truncated shifted-Chebyshev expansion of a kernel on [0, lambda_max]:
/// f(x) ~ c_0 / 2 + sum_k c_k T_k(2x / lambda_max - 1).
struct ChebyshevApprox {
    std::size_t degree = 0;
    std::vector<double> coefficients;
    double lambda_max = 0.0;
    /// Largest |f - approx| over 1000 evenly spaced points of the interval.
    double max_error = 0.0;

    double operator()(double x) const;
};

/// Coefficients by Chebyshev-Gauss quadrature on M + 1 nodes.
ChebyshevApprox chebyshev_fit(const std::function<double(double)>& kernel, std::size_t degree,
                              double lambda_max);

struct ChebyshevFilterResult {
    std::vector<Vector> outputs;
    std::size_t matvec_count = 0;
};

/// Applies several same-degree approximations to x with one shared
/// three-term recurrence: exactly `degree` sparse products with L in total.
ChebyshevFilterResult chebyshev_filter(const SparseMatrix& l,
                                       std::span<const ChebyshevApprox> approximations,
                                       const Vector& x);

struct ChebyshevSgwt {
    WaveletCoefficients coefficients;
    std::size_t matvec_count = 0;
};

/// SGWT via degree-M Chebyshev approximations of every band on
/// [0, l.lambda_max_estimate]. Never forms a dense operator.
ChebyshevSgwt sgwt_chebyshev(const Vector& x, const Laplacian& l, const WaveletFilterBank& bank,
                             std::size_t degree);
ChebyshevSgwt sgwt_chebyshev(const GraphSignal& x, const Laplacian& l,
                             const WaveletFilterBank& bank, std::size_t degree);

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Min and max of h(lambda)^2 + sum_j g(s_j lambda)^2 over the given points.
FrameBounds frame_bounds(const WaveletFilterBank& bank, std::span<const double> points);

/// CSV with header `scale_index,vertex,value`; scale_index 0 is the scaling
/// band and 1..J the wavelet scales.
void write_coefficients_csv(std::ostream& out, const WaveletCoefficients& w);

}  // namespace gspnetmon
