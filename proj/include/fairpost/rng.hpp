#pragma once

#include <cmath>
#include <cstdint>

namespace fairpost {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator keyed by (seed, index). Every individual owns an
/// independent stream, so draws are reproducible regardless of iteration
/// order or parallel scheduling.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t index) {
        state_ = seed ^ (0x9e3779b97f4a7c15ULL * (index + 0x632be59bd9b4e019ULL));
        // burn one output so nearby (seed, index) keys decorrelate
        splitmix64_next(state_);
    }

    /// Uniform draw in [0, 1).
    double uniform() {
        return static_cast<double>(splitmix64_next(state_) >> 11) * 0x1.0p-53;
    }

    /// Standard normal draw (Box-Muller).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace fairpost
