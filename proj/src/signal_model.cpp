#include "chordv/signal_model.hpp"

#include "chordv/errors.hpp"
#include "chordv/hankel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace chordv {

Fid::Fid(ComplexVector samples, double dt) : samples_(std::move(samples)), dt_(dt)
{
    if (samples_.size() < 2)
        throw ValidationError("Fid needs at least 2 samples, got " + std::to_string(samples_.size()));
    if (!(dt_ > 0.0) || !std::isfinite(dt_))
        throw ValidationError("Fid sampling interval must be positive and finite");
    if (!samples_.allFinite())
        throw ValidationError("Fid contains non-finite samples");
}

Complex pole_of(const ExponentialComponent& component, double dt)
{
    return std::exp(Complex(-component.decay, 2.0 * std::numbers::pi * component.frequency) * dt);
}

void ModelSpec::validate() const
{
    if (components.empty())
        throw ValidationError("model needs at least one component");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ValidationError("model sampling interval must be positive");
    if (n_samples < 2)
        throw ValidationError("model needs at least 2 samples");

    const double nyquist = 0.5 / dt;
    for (const auto& c : components) {
        if (!(c.amplitude >= 0.0) || !std::isfinite(c.amplitude))
            throw ValidationError("component amplitude must be finite and >= 0");
        if (!(c.decay >= 0.0) || !std::isfinite(c.decay))
            throw ValidationError("component decay must be finite and >= 0");
        if (!(std::abs(c.frequency) < nyquist))
            throw ValidationError("component frequency " + std::to_string(c.frequency) +
                                  " Hz is aliased (Nyquist " + std::to_string(nyquist) + " Hz)");
    }

    const auto shape = HankelShape::for_length(static_cast<Eigen::Index>(n_samples));
    if (static_cast<Eigen::Index>(components.size()) >= std::min(shape.p, shape.q))
        throw ValidationError("model has " + std::to_string(components.size()) +
                              " components; must be fewer than min(P, Q) = " +
                              std::to_string(std::min(shape.p, shape.q)));

    for (std::size_t i = 0; i < components.size(); ++i) {
        const Complex zi = pole_of(components[i], dt);
        for (std::size_t j = i + 1; j < components.size(); ++j) {
            if (std::abs(zi - pole_of(components[j], dt)) <= 1e-12)
                throw ValidationError("components " + std::to_string(i) + " and " +
                                      std::to_string(j) + " share a pole");
        }
    }
}

ModelSpec reference_5peak()
{
    ModelSpec spec;
    spec.dt = 1e-3;
    spec.n_samples = 256;
    spec.components = {
        {0.1, -300.0, 30.0},
        {0.3, -150.0, 30.0},
        {1.0, 0.0, 30.0},
        {1.0, 130.0, 30.0},
        {1.0, 280.0, 30.0},
    };
    return spec;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(seed ^ splitmix64(stream)))
{
}

double GaussianStream::next()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    constexpr double scale = 0x1.0p-53;
    // u1 in (0, 1] keeps the logarithm finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * scale;
    const double u2 = static_cast<double>(engine_() >> 11) * scale;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Fid synthesize_fid(const ModelSpec& spec)
{
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.n_samples);
    ComplexVector samples = ComplexVector::Zero(n);
    for (const auto& c : spec.components) {
        const Complex rate(-c.decay, 2.0 * std::numbers::pi * c.frequency);
        for (Eigen::Index k = 0; k < n; ++k)
            samples[k] += c.amplitude * std::exp(rate * (static_cast<double>(k) * spec.dt));
    }
    return Fid(std::move(samples), spec.dt);
}

Fid add_noise(const Fid& x, const NoiseSpec& noise)
{
    if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
        throw ValidationError("noise sigma must be finite and >= 0");
    if (noise.sigma == 0.0)
        return x;

    GaussianStream stream(noise.seed, 0);
    ComplexVector samples = x.samples();
    for (Eigen::Index n = 0; n < samples.size(); ++n) {
        const double re = stream.next();
        const double im = stream.next();
        samples[n] += noise.sigma * Complex(re, im);
    }
    return Fid(std::move(samples), x.dt());
}

Spectrum dft_spectrum(const Fid& x)
{
    const Eigen::Index n = x.size();
    // twiddle[m] = exp(-2 pi i m / N); k*j is reduced mod N so every factor
    // is taken from the table exactly.
    ComplexVector twiddle(n);
    for (Eigen::Index m = 0; m < n; ++m)
        twiddle[m] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));

    Spectrum out;
    out.bins = ComplexVector::Zero(n);
    out.frequency_axis.resize(static_cast<std::size_t>(n));
    const auto& s = x.samples();
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        Eigen::Index idx = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            acc += s[j] * twiddle[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        out.bins[k] = acc;
        const Eigen::Index signed_k = (k < (n + 1) / 2) ? k : k - n;
        out.frequency_axis[static_cast<std::size_t>(k)] =
            static_cast<double>(signed_k) / (static_cast<double>(n) * x.dt());
    }
    return out;
}

double nrmse(const Fid& denoised, const Fid& truth)
{
    if (denoised.size() != truth.size())
        throw ValidationError("nrmse: length mismatch (" + std::to_string(denoised.size()) + " vs " +
                              std::to_string(truth.size()) + ")");
    const double ref = truth.samples().norm();
    if (ref == 0.0)
        throw ValidationError("nrmse: reference signal has zero norm");
    return (denoised.samples() - truth.samples()).norm() / ref;
}

} // namespace chordv
