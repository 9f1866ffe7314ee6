#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stickperc {

enum class ErrorCode : int {
    Ok = 0,
    InvalidArgument = 1,
    DomainError = 2,
    PreconditionViolated = 3,
    ParallelLines = 4,
    InsufficientTrials = 5,
    RejectionStall = 6,
    CapacityExceeded = 7,
    BracketFailure = 8,
    DegenerateDesign = 9,
    IoError = 10,
    Internal = 11,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

// splitmix64 finalizer; the mixing function behind every derived seed.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a over the tag bytes.
constexpr std::uint64_t tag_hash(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed of the named substream `tag`/`index` under `master`:
/// mix64(master ^ mix64(fnv1a(tag) + mix64(index))).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0) {
    return mix64(master ^ mix64(tag_hash(tag) + mix64(index)));
}

/// Two-level substream, e.g. (probe, replicate).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t i, std::uint64_t j) {
    return mix64(derive_seed(master, tag, i) ^ mix64(j + 0x632be59bd9b4e019ULL));
}

/// Counter-based uniform in [0, 1) from a key; used where several runs must share driving noise.
constexpr double hash_uniform(std::uint64_t key) {
    return static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1), never exactly 0 or 1.
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uint64_t seed_;
};

}  // namespace stickperc
