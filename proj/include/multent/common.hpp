#pragma once

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace multent {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Thrown when an exhaustive oracle would exceed its instance-size guard.
class oversize_error : public std::runtime_error {
public:
    explicit oversize_error(const std::string& what) : std::runtime_error(what) {}
};

enum class Convention { inclusive, strict };

inline const char* to_string(Convention c) {
    return c == Convention::inclusive ? "inclusive" : "strict";
}

/// Natural log of a positive big integer, accurate to ~1e-16 relative.
inline double log_big(const BigInt& v) {
    if (v == 0) return -std::numeric_limits<double>::infinity();
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

inline double to_double(const BigRat& r) { return mpq_get_d(r.get_mpq_t()); }

// gmpxx has no long long overloads; long is 64-bit on every platform this
// library targets
inline BigInt big(long long v) { return BigInt(static_cast<long>(v)); }

inline BigRat big_ratio(long long num, long long den) {
    BigRat r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

inline std::string rat_str(const BigRat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline BigInt big_pow(const BigInt& base, unsigned long exp) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
    return out;
}

}  // namespace multent
