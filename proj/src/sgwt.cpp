#include "gspnetmon/sgwt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "gspnetmon/error.hpp"
#include "gspnetmon/io_util.hpp"

namespace gspnetmon {

namespace {

constexpr double kLowpassFactor = 20.0;  // lambda_min = lambda_max / K

double spline_bandpass(double x) {
    if (x < 1.0) return x * x;
    if (x <= 2.0) return -5.0 + x * (11.0 + x * (-6.0 + x));
    return 4.0 / (x * x);
}

}  // namespace

SpectralKernel SpectralKernel::scaling_lowpass(double gamma, double lambda_min) {
    if (!(lambda_min > 0.0)) throw ParameterError("scaling kernel needs lambda_min > 0");
    return {KernelKind::ScalingLowpass, gamma, lambda_min};
}

SpectralKernel SpectralKernel::wavelet_bandpass() { return {KernelKind::WaveletBandpass, 0.0, 0.0}; }

SpectralKernel SpectralKernel::pyramid_lowpass(double lambda_max) {
    if (!(lambda_max > 0.0)) throw ParameterError("pyramid kernel needs lambda_max > 0");
    return {KernelKind::PyramidLowpass, lambda_max, 0.0};
}

SpectralKernel SpectralKernel::pyramid_highpass(double lambda_max) {
    if (!(lambda_max > 0.0)) throw ParameterError("pyramid kernel needs lambda_max > 0");
    return {KernelKind::PyramidHighpass, lambda_max, 0.0};
}

double SpectralKernel::wavelet_peak() { return spline_bandpass(2.0 - 1.0 / std::numbers::sqrt3); }

double SpectralKernel::operator()(double x) const {
    switch (kind_) {
        case KernelKind::ScalingLowpass: {
            const double t = x / (0.6 * b_);
            return a_ * std::exp(-(t * t) * (t * t));
        }
        case KernelKind::WaveletBandpass:
            return spline_bandpass(x);
        case KernelKind::PyramidLowpass: {
            const double t = 2.0 * x / a_;
            return std::exp(-(t * t) * (t * t));
        }
        case KernelKind::PyramidHighpass: {
            const double t = 2.0 * x / a_;
            const double h = std::exp(-(t * t) * (t * t));
            return std::sqrt(std::max(0.0, 1.0 - h * h));
        }
    }
    return 0.0;
}

WaveletFilterBank design_filter_bank(double lambda_max, std::size_t J) {
    if (J == 0) throw ParameterError("filter bank needs at least one scale");
    if (!(lambda_max > 0.0)) throw ParameterError("filter bank needs lambda_max > 0");
    const double lambda_min = lambda_max / kLowpassFactor;
    const double s_max = 2.0 / lambda_min;
    const double s_min = 2.0 / lambda_max;

    std::vector<double> scales(J);
    if (J == 1) {
        scales[0] = s_max;
    } else {
        const double lo = std::log(s_max);
        const double hi = std::log(s_min);
        for (std::size_t j = 0; j < J; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(J - 1);
            scales[j] = std::exp(lo + t * (hi - lo));
        }
        scales.front() = s_max;
        scales.back() = s_min;
    }
    return {SpectralKernel::scaling_lowpass(SpectralKernel::wavelet_peak(), lambda_min),
            SpectralKernel::wavelet_bandpass(), std::move(scales), lambda_max};
}

WaveletFilterBank pyramid_filter_bank(double lambda_max) {
    return {SpectralKernel::pyramid_lowpass(lambda_max), SpectralKernel::pyramid_highpass(lambda_max),
            {1.0}, lambda_max};
}

WaveletCoefficients sgwt_exact(const Vector& x, const EigenBasis& basis,
                               const WaveletFilterBank& bank) {
    if (static_cast<std::size_t>(x.size()) != basis.size()) {
        throw DimensionError("signal has " + std::to_string(x.size()) + " values, basis has " +
                             std::to_string(basis.size()));
    }
    const Spectrum s = gft(x, basis);
    const auto n = static_cast<Eigen::Index>(basis.size());
    auto filtered = [&](auto&& kernel) {
        Vector scaled(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            scaled(k) = kernel(basis.eigenvalues(k)) * s.coefficients(k);
        }
        return Vector(basis.eigenvectors * scaled);
    };
    WaveletCoefficients w;
    w.scaling_band = filtered(bank.scaling);
    for (std::size_t j = 0; j < bank.band_count(); ++j) {
        w.wavelet_bands.push_back(filtered([&](double lambda) { return bank.wavelet_at(j, lambda); }));
    }
    return w;
}

WaveletCoefficients sgwt_exact(const GraphSignal& x, const EigenBasis& basis,
                               const WaveletFilterBank& bank) {
    return sgwt_exact(x.to_vector(), basis, bank);
}

double ChebyshevApprox::operator()(double x) const {
    // Clenshaw on the shifted argument.
    const double a = lambda_max / 2.0;
    const double y = (x - a) / a;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = degree; k >= 1; --k) {
        const double b0 = 2.0 * y * b1 - b2 + coefficients[k];
        b2 = b1;
        b1 = b0;
    }
    return y * b1 - b2 + 0.5 * coefficients[0];
}

ChebyshevApprox chebyshev_fit(const std::function<double(double)>& kernel, std::size_t degree,
                              double lambda_max) {
    if (degree == 0) throw ParameterError("Chebyshev degree must be at least 1");
    if (!(lambda_max > 0.0)) throw ParameterError("Chebyshev interval needs lambda_max > 0");
    const std::size_t nodes = degree + 1;
    const double a = lambda_max / 2.0;

    std::vector<double> samples(nodes);
    std::vector<double> theta(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        theta[i] = std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(nodes);
        samples[i] = kernel(a * std::cos(theta[i]) + a);
    }
    ChebyshevApprox approx;
    approx.degree = degree;
    approx.lambda_max = lambda_max;
    approx.coefficients.resize(degree + 1);
    for (std::size_t k = 0; k <= degree; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            sum += samples[i] * std::cos(static_cast<double>(k) * theta[i]);
        }
        approx.coefficients[k] = 2.0 * sum / static_cast<double>(nodes);
    }
    constexpr int kGrid = 1000;
    for (int i = 0; i < kGrid; ++i) {
        const double x = lambda_max * static_cast<double>(i) / (kGrid - 1);
        approx.max_error = std::max(approx.max_error, std::abs(kernel(x) - approx(x)));
    }
    return approx;
}

ChebyshevFilterResult chebyshev_filter(const SparseMatrix& l,
                                       std::span<const ChebyshevApprox> approximations,
                                       const Vector& x) {
    if (approximations.empty()) return {};
    if (l.rows() != x.size() || l.cols() != x.size()) {
        throw DimensionError("signal has " + std::to_string(x.size()) + " values, operator is " +
                             std::to_string(l.rows()) + "x" + std::to_string(l.cols()));
    }
    const auto degree = approximations.front().degree;
    const double lambda_max = approximations.front().lambda_max;
    for (const auto& ap : approximations) {
        if (ap.degree != degree || ap.lambda_max != lambda_max) {
            throw ParameterError("approximations must share degree and interval");
        }
    }
    const double a = lambda_max / 2.0;

    ChebyshevFilterResult result;
    result.outputs.reserve(approximations.size());
    for (const auto& ap : approximations) result.outputs.push_back(0.5 * ap.coefficients[0] * x);

    // T_0 = x, T_1 = (L - a) x / a, T_k = 2 (L - a) T_{k-1} / a - T_{k-2}.
    Vector previous = x;
    Vector current = (l * x - a * x) / a;
    ++result.matvec_count;
    for (std::size_t i = 0; i < approximations.size(); ++i) {
        result.outputs[i] += approximations[i].coefficients[1] * current;
    }
    for (std::size_t k = 2; k <= degree; ++k) {
        Vector next = (2.0 / a) * (l * current - a * current) - previous;
        ++result.matvec_count;
        for (std::size_t i = 0; i < approximations.size(); ++i) {
            result.outputs[i] += approximations[i].coefficients[k] * next;
        }
        previous = std::move(current);
        current = std::move(next);
    }
    return result;
}

ChebyshevSgwt sgwt_chebyshev(const Vector& x, const Laplacian& l, const WaveletFilterBank& bank,
                             std::size_t degree) {
    if (static_cast<std::size_t>(x.size()) != l.size()) {
        throw DimensionError("signal has " + std::to_string(x.size()) + " values, Laplacian has " +
                             std::to_string(l.size()) + " vertices");
    }
    ChebyshevSgwt out;
    if (!(l.lambda_max_estimate > 0.0)) {
        // Edgeless graph: L = 0, so every band is the kernel at 0 times x.
        out.coefficients.scaling_band = bank.scaling(0.0) * x;
        for (std::size_t j = 0; j < bank.band_count(); ++j) {
            out.coefficients.wavelet_bands.push_back(bank.wavelet_at(j, 0.0) * x);
        }
        return out;
    }
    std::vector<ChebyshevApprox> approximations;
    approximations.reserve(bank.band_count() + 1);
    approximations.push_back(chebyshev_fit(bank.scaling, degree, l.lambda_max_estimate));
    for (std::size_t j = 0; j < bank.band_count(); ++j) {
        approximations.push_back(chebyshev_fit(
            [&bank, j](double lambda) { return bank.wavelet_at(j, lambda); }, degree,
            l.lambda_max_estimate));
    }
    auto filtered = chebyshev_filter(l.matrix, approximations, x);
    out.matvec_count = filtered.matvec_count;
    out.coefficients.scaling_band = std::move(filtered.outputs.front());
    for (std::size_t j = 1; j < filtered.outputs.size(); ++j) {
        out.coefficients.wavelet_bands.push_back(std::move(filtered.outputs[j]));
    }
    return out;
}

ChebyshevSgwt sgwt_chebyshev(const GraphSignal& x, const Laplacian& l,
                             const WaveletFilterBank& bank, std::size_t degree) {
    return sgwt_chebyshev(x.to_vector(), l, bank, degree);
}

FrameBounds frame_bounds(const WaveletFilterBank& bank, std::span<const double> points) {
    if (points.empty()) throw ParameterError("frame bounds need at least one evaluation point");
    FrameBounds fb{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double lambda : points) {
        const double h = bank.scaling(lambda);
        double g_total = h * h;
        for (std::size_t j = 0; j < bank.band_count(); ++j) {
            const double g = bank.wavelet_at(j, lambda);
            g_total += g * g;
        }
        fb.lower = std::min(fb.lower, g_total);
        fb.upper = std::max(fb.upper, g_total);
    }
    return fb;
}

void write_coefficients_csv(std::ostream& out, const WaveletCoefficients& w) {
    out << "scale_index,vertex,value\n";
    for (std::size_t band = 0; band <= w.band_count(); ++band) {
        const Vector& values = w.band(band);
        for (Eigen::Index v = 0; v < values.size(); ++v) {
            out << band << ',' << v << ',' << format_real(values(v)) << '\n';
        }
    }
}

}  // namespace gspnetmon
