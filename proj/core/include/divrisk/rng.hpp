#pragma once

#include "divrisk/distribution.hpp"

#include <cstdint>
#include <random>

namespace divrisk {

/// Deterministic random source for seeded searches; identical seeds give
/// identical streams on every platform we build for.
class RandomSource {
public:
    explicit RandomSource(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    /// Uniform integer in [lo, hi] by rejection; avoids distribution objects
    /// whose sequences vary across standard libraries.
    long long uniform(long long lo, long long hi) {
        if (lo > hi) throw std::invalid_argument("uniform: empty range");
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % span;
        uint64_t r;
        do { r = eng_(); } while (r >= limit);
        return lo + static_cast<long long>(r % span);
    }

    bool coin() { return uniform(0, 1) == 1; }

    double uniform_real() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

/// Parameters of the random distribution family used by audits and property
/// suites: support size, value numerators/denominators, probability weights.
struct MarginalFamily {
    int support_min = 1;
    int support_max = 6;
    long long value_num_range = 16;  // numerators in [-range, range]
    std::vector<long long> value_dens = {1, 2, 3, 4, 6, 8};
    long long weight_max = 9;
};

inline ExactDist random_exact_dist(RandomSource& rng, const MarginalFamily& fam) {
    int k = static_cast<int>(rng.uniform(fam.support_min, fam.support_max));
    std::vector<ExactDist::Atom> atoms;
    for (int i = 0; i < k; ++i) {
        long long num = rng.uniform(-fam.value_num_range, fam.value_num_range);
        long long den = fam.value_dens[static_cast<size_t>(
            rng.uniform(0, static_cast<long long>(fam.value_dens.size()) - 1))];
        long long w = rng.uniform(1, fam.weight_max);
        atoms.push_back({Rat(num, den), Rat(w)});
    }
    return ExactDist::from_atoms(std::move(atoms));
}

inline FloatDist random_float_dist(RandomSource& rng, const MarginalFamily& fam) {
    int k = static_cast<int>(rng.uniform(fam.support_min, fam.support_max));
    std::vector<FloatDist::Atom> atoms;
    for (int i = 0; i < k; ++i) {
        double v = (rng.uniform_real() * 2 - 1) * static_cast<double>(fam.value_num_range);
        double w = 1.0 + rng.uniform_real() * static_cast<double>(fam.weight_max - 1);
        atoms.push_back({v, w});
    }
    double total = 0;
    for (auto& a : atoms) total += a.prob;
    for (auto& a : atoms) a.prob /= total;
    return FloatDist::from_atoms(std::move(atoms));
}

template <class S>
Distribution<S> random_dist(RandomSource& rng, const MarginalFamily& fam) {
    if constexpr (scalar_traits<S>::exact)
        return random_exact_dist(rng, fam);
    else
        return random_float_dist(rng, fam);
}

}  // namespace divrisk
