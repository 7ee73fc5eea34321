#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace polyform {

using Triple = std::array<double, 3>;

constexpr double kPi = 3.14159265358979323846;

// Error taxonomy. Every failure mode carries the violated constraint in
// the message so callers (and the CLI) can report it verbatim.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ScaleIndeterminate : Error {
    using Error::Error;
};
struct InverseOutOfRange : Error {
    using Error::Error;
};
struct PathExitsDomain : Error {
    using Error::Error;
};
struct NotStrictlyConvex : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct InvalidCombinatorics : Error {
    using Error::Error;
};
struct InvalidMetric : Error {
    using Error::Error;
};
struct IndexMismatch : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct TooLargeForExhaustiveCheck : Error {
    using Error::Error;
};

enum class LogLevel : int { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("POLYFORM_LOG");
        if (!env) return LogLevel::Warn;
        std::string s(env);
        if (s == "error") return LogLevel::Error;
        if (s == "warn") return LogLevel::Warn;
        if (s == "info") return LogLevel::Info;
        if (s == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

inline void log(LogLevel level, const std::string& msg) {
    static const char* names[] = {"error", "warn", "info", "debug"};
    if (static_cast<int>(level) <= static_cast<int>(log_level()))
        std::fprintf(stderr, "[polyform:%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

// Inverse trig with a tight clamp: arguments within 1e-12 of the closed
// domain boundary are treated as rounding; anything farther is a genuine
// domain violation and must not be silently absorbed.
inline double checked_acos(double x, const char* what) {
    if (x > 1.0) {
        if (x - 1.0 > 1e-12) throw DomainError(std::string(what) + ": acos argument " + std::to_string(x) + " > 1");
        x = 1.0;
    } else if (x < -1.0) {
        if (-1.0 - x > 1e-12) throw DomainError(std::string(what) + ": acos argument " + std::to_string(x) + " < -1");
        x = -1.0;
    }
    return std::acos(x);
}

inline double checked_acosh(double x, const char* what) {
    if (x < 1.0) {
        if (1.0 - x > 1e-12) throw DomainError(std::string(what) + ": acosh argument " + std::to_string(x) + " < 1");
        x = 1.0;
    }
    return std::acosh(x);
}

inline int other_index(int i, int j) { return 3 - i - j; }

// Deterministic 64-bit mix, used to derive per-suite RNG streams from
// (seed, name) so running suites in any order gives identical results.
inline std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag) {
    std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ull;
        h ^= h >> 29;
    }
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 32;
    return h;
}

}  // namespace polyform
