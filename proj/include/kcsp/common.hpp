#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kcsp {

// Thrown when an input violates a documented precondition or file schema.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an exact computation would exceed its enumeration budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultBudget = 10'000'000;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Child seed for trial/worker `index` under a master seed. All randomness in
// the library flows through this derivation, so results do not depend on how
// work is split across threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index ^ 0x632be59bd9b4e019ULL));
}

// Minimal deterministic generator (splitmix64 stream). We avoid
// <random> distributions because their output is not pinned by the standard
// and frozen test fixtures must survive toolchain changes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, n), unbiased via rejection.
    int uniform_int(int n) {
        if (n <= 0) throw ValidationError("Rng::uniform_int: n must be positive");
        auto range = static_cast<std::uint64_t>(n);
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return static_cast<int>(x % range);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform_real() < p; }

private:
    std::uint64_t state_;
};

// Neumaier compensated accumulator; keeps exact sums independent of
// evaluation order to ~1e-16 relative error.
class Accumulator {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Runs fn(i) for i in [0, count). Workers own contiguous index ranges and may
// only write to per-index slots; any reduction must happen afterwards in
// index order, so the result is identical for every thread count.
template <typename F>
void parallel_for_index(std::int64_t count, int threads, F&& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || count < 2) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    auto nworkers = static_cast<std::int64_t>(threads);
    if (nworkers > count) nworkers = count;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nworkers));
    for (std::int64_t wkr = 0; wkr < nworkers; ++wkr) {
        std::int64_t begin = count * wkr / nworkers;
        std::int64_t end = count * (wkr + 1) / nworkers;
        pool.emplace_back([begin, end, &fn] {
            for (std::int64_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// Checked R^n for table sizes.
inline std::size_t checked_pow(int base, int exp, std::uint64_t budget = kDefaultBudget) {
    if (base < 1 || exp < 0) throw ValidationError("checked_pow: bad arguments");
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= static_cast<std::uint64_t>(base);
        if (r > budget)
            throw BudgetError("table of size " + std::to_string(base) + "^" + std::to_string(exp) +
                              " exceeds budget " + std::to_string(budget));
    }
    return static_cast<std::size_t>(r);
}

}  // namespace kcsp
