#pragma once

// Seeding and accumulation helpers for the Monte Carlo paths.
//
// Streams are std::mt19937_64 generators whose seeds are derived from a user
// seed and a stream index through splitmix64, so replication workers get
// decorrelated, reproducible substreams.  Results are bit-identical for a
// fixed (seed, replications) pair within this codebase.

#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace snm {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ (stream * 0x9e3779b97f4a7c15ULL + 1)));
}

// Associative (count, sum, sum-of-squares) accumulator.
struct MeanAccumulator {
    std::int64_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        ++count;
        sum += x;
        sum_sq += x * x;
    }
    void merge(const MeanAccumulator& o) {
        count += o.count;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    double mean() const { return count > 0 ? sum / count : 0.0; }
    double variance() const {
        if (count < 2) return 0.0;
        const double m = mean();
        double v = (sum_sq - count * m * m) / (count - 1);
        return v > 0.0 ? v : 0.0;
    }
    double std_error() const { return count > 0 ? std::sqrt(variance() / count) : 0.0; }
};

// Runs body(chunk_index, begin, end) over [0, total) split into a fixed
// number of chunks that does not depend on the machine, so per-chunk-derived
// seeds (and thus merged results) are reproducible across thread counts.
inline constexpr int kFixedChunks = 64;

template <class Body>
void parallel_chunks(std::int64_t total, Body&& body, unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const int nchunks = total < 1024 ? 1 : kFixedChunks;
    const std::int64_t chunk = (total + nchunks - 1) / nchunks;
    if (nchunks == 1 || workers == 1) {
        for (int c = 0; c < nchunks; ++c) {
            const std::int64_t b = c * chunk;
            const std::int64_t e = std::min<std::int64_t>(b + chunk, total);
            if (b < e) body(c, b, e);
        }
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&body, w, workers, chunk, total, nchunks] {
            for (int c = int(w); c < nchunks; c += int(workers)) {
                const std::int64_t b = c * chunk;
                const std::int64_t e = std::min<std::int64_t>(b + chunk, total);
                if (b < e) body(c, b, e);
            }
        });
    }
    for (auto& t : pool) t.join();
}

// Halton low-discrepancy point, radical inverse in the given prime base.
inline double halton(std::uint64_t index, unsigned base) {
    double f = 1.0, r = 0.0;
    for (std::uint64_t i = index + 1; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

} // namespace snm
