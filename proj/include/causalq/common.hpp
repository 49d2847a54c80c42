#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace causalq {

/// Invalid configuration supplied by the caller (bad grid, unknown node, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A call violated an operation precondition (e.g. stepping a finished episode).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Optimizer failed to reach its tolerance; carries the final constraint value.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double final_h)
        : std::runtime_error(what), final_h(final_h) {}
    double final_h;
};

/// Shortest-roundtrip-safe decimal formatting for doubles (17 significant digits).
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Compact formatting for human-facing labels; not used in reproducible artifacts.
inline std::string fmt_g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// FNV-1a 64-bit content hash, used for manifest input fingerprints.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace causalq
