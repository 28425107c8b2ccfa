#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "zenoplan/rational.hpp"

namespace zenoplan {

/// Seed derivation for campaign substreams. Every run, evaluation and
/// variation stream gets its seed as mix_seed(root, {kind, index, ...}),
/// so campaigns are resumable and parallel evaluation order cannot change
/// results. splitmix64 finalizer; stable across platforms.
std::uint64_t mix_seed(std::uint64_t root, std::initializer_list<std::uint64_t> words);

/// Stream tags for mix_seed. Values are part of the on-disk reproducibility
/// contract (a manifest's seed_root fixes every derived seed).
enum SeedKind : std::uint64_t {
    kSeedInit = 1,
    kSeedVariation = 2,
    kSeedEvaluation = 3,
    kSeedRun = 4,
    kSeedTune = 5,
};

/// mt19937_64 core (the engine is specified by the standard, so the raw
/// stream is portable) with hand-rolled distributions: the std distribution
/// classes are implementation defined and would break byte-identical reruns
/// across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n), unbiased (rejection sampling).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Exact Bernoulli draw for a rational probability in [0, 1]:
    /// a uniform draw below the denominator is compared with the numerator,
    /// so grid probabilities like 0.1 are sampled without rounding.
    bool bernoulli(const Rat& p) {
        if (p.num() <= 0) return false;
        if (p >= Rat(1)) return true;
        return below(static_cast<std::uint64_t>(p.den())) < static_cast<std::uint64_t>(p.num());
    }

    /// Index draw proportional to nonnegative integer weights.
    std::size_t weighted_pick(std::span<const int> weights) {
        std::int64_t total = 0;
        for (int w : weights) {
            if (w < 0) throw std::invalid_argument("Rng::weighted_pick: negative weight");
            total += w;
        }
        if (total == 0) throw std::invalid_argument("Rng::weighted_pick: all weights zero");
        std::int64_t ticket = static_cast<std::int64_t>(below(static_cast<std::uint64_t>(total)));
        for (std::size_t i = 0; i < weights.size(); ++i) {
            ticket -= weights[i];
            if (ticket < 0) return i;
        }
        return weights.size() - 1;
    }

    template <class T>
    const T& pick(const std::vector<T>& items) {
        return items[below(items.size())];
    }

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i)
            std::swap(items[i - 1], items[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace zenoplan
