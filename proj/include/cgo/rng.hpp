#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace cgo {

/// Source of uniform reals in [0, 1). Every random decision in a run is
/// derived from next_uniform(), so a scripted source reproduces any path.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    virtual double next_uniform() = 0;

    double uniform() { return next_uniform(); }

    double uniform(double lo, double hi) { return lo + next_uniform() * (hi - lo); }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        if (n == 0) {
            throw std::invalid_argument("RandomSource::index: empty range");
        }
        auto i = static_cast<std::size_t>(next_uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }
};

/// The per-run stream: 64-bit Mersenne twister, 53-bit mantissa draws.
class RngStream final : public RandomSource {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    double next_uniform() override {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

/// Replays a fixed list of draws; throws when exhausted. Used for
/// injected-draw tests of the generating rules.
class ScriptedRandom final : public RandomSource {
public:
    explicit ScriptedRandom(std::vector<double> draws) : draws_(std::move(draws)) {}

    double next_uniform() override {
        if (pos_ >= draws_.size()) {
            throw std::out_of_range("ScriptedRandom: draw sequence exhausted");
        }
        return draws_[pos_++];
    }

    std::size_t consumed() const { return pos_; }

private:
    std::vector<double> draws_;
    std::size_t pos_ = 0;
};

}  // namespace cgo
