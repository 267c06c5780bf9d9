#pragma once

#include <random>
#include <string>

#include "dqw/core.hpp"

namespace dqw {

// Seeded generator with a fixed, named algorithm so every report can record
// exactly how its random draws were produced.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    static std::string algorithm() { return "mt19937_64/v1"; }

    std::uint64_t seed() const { return seed_; }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

    cplx complex_normal() { return cplx(normal(), normal()); }

    // uniform angle in the open interval (-b, b)
    double angle(double b) { return uniform(std::nextafter(-b, 0.0), b); }

    std::uint64_t integer() { return gen_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace dqw
