#include "dplqg/mechanism.hpp"

#include <cmath>

namespace dplqg {

double GaussianSampler::uniform_01_open_closed() {
    const std::uint64_t bits = engine_() >> 11;  // top 53 bits
    return static_cast<double>(bits + 1) * 0x1.0p-53;
}

double GaussianSampler::uniform_01_closed_open() {
    const std::uint64_t bits = engine_() >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

double GaussianSampler::sample() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_01_open_closed();
    const double u2 = uniform_01_closed_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Vector GaussianSampler::sample_vector(std::size_t n, double sigma) {
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = sigma * sample();
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_agent_seed(std::uint64_t master, std::size_t agent_index, StreamRole role) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (0xA5A5A5A5A5A5A5A5ULL + agent_index));
    s = splitmix64(s ^ static_cast<std::uint64_t>(role));
    return s;
}

std::uint64_t derive_run_seed(std::uint64_t master, std::size_t run_index, std::size_t agent_index,
                              StreamRole role) {
    std::uint64_t s = splitmix64(master ^ (0xC3C3C3C3C3C3C3C3ULL + run_index));
    s = splitmix64(s ^ (0xA5A5A5A5A5A5A5A5ULL + agent_index));
    s = splitmix64(s ^ static_cast<std::uint64_t>(role));
    return s;
}

Vector privatize_static(const Vector& r, const NoiseScale& scale, GaussianSampler& rng) {
    Vector out = r;
    if (scale.sigma == 0.0) return out;
    for (double& v : out) v += scale.sigma * rng.sample();
    return out;
}

Vector privatize_output(const Vector& y, const NoiseScale& scale, GaussianSampler& rng) {
    return privatize_static(y, scale, rng);
}

}  // namespace dplqg
