#pragma once

// Shared helpers for the test suite: a seeded generator from the same family
// the runner documents in its manifests, small vector builders, and scratch
// directories for runner artifacts.

#include "cocycle/types.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testsupport {

inline cocycle::Vec vec1(double a) {
    cocycle::Vec v(1);
    v << a;
    return v;
}

inline cocycle::Vec vec2(double a, double b) {
    cocycle::Vec v(2);
    v << a, b;
    return v;
}

inline double max_diff(const cocycle::Vec& a, const cocycle::Vec& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
}

inline double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

/// Deterministic test randomness.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
    long integer(long lo, long hi) {  // inclusive bounds
        return lo + static_cast<long>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    cocycle::Vec vec(int dim, double lo, double hi) {
        cocycle::Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = range(lo, hi);
        return v;
    }
};

/// Fresh scratch directory under the system temp root.
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("cocycle-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace testsupport
