#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace levytrim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Thrown when a numeric routine (quadrature, inversion) cannot reach its
// target accuracy.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::domain_error(msg);
}

inline void require_positive(double x, const char* name) {
    if (!(x > 0.0)) {
        throw std::domain_error(std::string(name) + " must be positive, got " +
                                std::to_string(x));
    }
}

inline void require_nonnegative(double x, const char* name) {
    if (!(x >= 0.0)) {
        throw std::domain_error(std::string(name) + " must be nonnegative, got " +
                                std::to_string(x));
    }
}

// 64-bit FNV-1a, used to derive deterministic stream ids from labels.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    return fnv1a64(s.data(), s.size());
}

}  // namespace levytrim
