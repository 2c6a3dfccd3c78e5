#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace chordv {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// A sampled free induction decay: N >= 2 finite complex samples taken
/// every dt seconds.
class Fid {
public:
    Fid(ComplexVector samples, double dt);

    const ComplexVector& samples() const noexcept { return samples_; }
    double dt() const noexcept { return dt_; }
    Eigen::Index size() const noexcept { return samples_.size(); }

    Complex operator[](Eigen::Index n) const { return samples_[n]; }

private:
    ComplexVector samples_;
    double dt_;
};

/// One damped exponential c * exp((i 2 pi f - tau) t).
struct ExponentialComponent {
    double amplitude = 0.0; // c
    double frequency = 0.0; // Hz
    double decay = 0.0;     // 1/s
};

/// exp((i 2 pi f - tau) dt)
Complex pole_of(const ExponentialComponent& component, double dt);

struct ModelSpec {
    std::vector<ExponentialComponent> components;
    double dt = 1e-3;
    std::size_t n_samples = 256;

    /// Throws ValidationError on a negative amplitude/decay, an aliased
    /// frequency, duplicate poles, or too many components for the Hankel
    /// embedding of n_samples.
    void validate() const;
};

/// The canonical five-peak test signal: one low, one medium and three
/// high intensity peaks, N = 256, dt = 1 ms. Components are listed in
/// ascending frequency, so index 0 is the leftmost (and weakest) peak.
ModelSpec reference_5peak();

struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Unnormalized DFT, X_k = sum_n x_n exp(-2 pi i k n / N). Bin k maps to
/// k / (N dt) for k < ceil(N/2) and (k - N) / (N dt) above that.
struct Spectrum {
    ComplexVector bins;
    std::vector<double> frequency_axis;
};

/// Deterministic standard normal stream keyed by (seed, stream).
///
/// The engine is std::mt19937_64 seeded with
/// splitmix64(seed ^ splitmix64(stream)). Each Box-Muller pair consumes two
/// engine outputs k1, k2: u1 = ((k1 >> 11) + 1) / 2^53, u2 = (k2 >> 11) / 2^53,
/// r = sqrt(-2 ln u1), and the stream yields r cos(2 pi u2) then
/// r sin(2 pi u2). This mapping is part of the public contract:
/// changing it changes every stored experiment.
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream);
    double next();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

Fid synthesize_fid(const ModelSpec& spec);

/// y_n = x_n + a_n + i b_n with a_n, b_n ~ N(0, sigma^2) drawn from
/// GaussianStream(noise.seed, 0) in the order a_0, b_0, a_1, b_1, ...
Fid add_noise(const Fid& x, const NoiseSpec& noise);

Spectrum dft_spectrum(const Fid& x);

/// ||denoised - truth||_2 / ||truth||_2 over the complex time samples.
double nrmse(const Fid& denoised, const Fid& truth);

} // namespace chordv
