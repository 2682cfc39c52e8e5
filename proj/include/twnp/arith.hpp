/*
   Copyright 2026 The twnp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef TWNP_ARITH_HPP
#define TWNP_ARITH_HPP

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/// Root namespace: twisted Newton polygons of binomial exponential sums.
namespace twnp
{

using ExactInt = mpz_class;
using ExactRat = mpq_class;

/// Natural number or +infinity (nullopt).
using ExtNat = std::optional<std::int64_t>;

/// Thrown for violated preconditions on integer arguments.
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Thrown when a computed quantity contradicts an invariant that must hold
/// by construction (for example a non-integral Hasse constant).
class internal_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

inline std::int64_t min_residue(std::int64_t x, std::int64_t d)
{
    if (d <= 0) {
        throw domain_error("min_residue: modulus must be positive");
    }
    const std::int64_t r = x % d;
    return r < 0 ? r + d : r;
}

inline std::int64_t mod_inverse(std::int64_t e, std::int64_t d)
{
    if (d <= 0) {
        throw domain_error("mod_inverse: modulus must be positive");
    }
    if (d == 1) {
        return 0;
    }
    std::int64_t old_r = min_residue(e, d), r = d;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        old_r -= quot * r;
        std::swap(old_r, r);
        old_s -= quot * s;
        std::swap(old_s, s);
    }
    if (old_r != 1) {
        throw domain_error("mod_inverse: arguments are not coprime");
    }
    return min_residue(old_s, d);
}

inline std::int64_t ipow(std::int64_t base, std::int64_t exp)
{
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

inline std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t m)
{
    if (m == 1) {
        return 0;
    }
    unsigned __int128 r = 1, b = static_cast<unsigned __int128>(min_residue(base, m));
    auto e = static_cast<std::uint64_t>(exp);
    while (e != 0) {
        if (e & 1U) {
            r = r * b % static_cast<unsigned __int128>(m);
        }
        b = b * b % static_cast<unsigned __int128>(m);
        e >>= 1U;
    }
    return static_cast<std::int64_t>(r);
}

inline bool is_prime(std::int64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::int64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            return false;
        }
    }
    return true;
}

/// Distinct prime factors in increasing order.
inline std::vector<std::int64_t> prime_factors(std::int64_t n)
{
    std::vector<std::int64_t> out;
    for (std::int64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) {
                n /= f;
            }
        }
    }
    if (n > 1) {
        out.push_back(n);
    }
    return out;
}

/// Least b >= 1 with x^b = 1 mod m (m >= 1, gcd(x, m) = 1).
inline std::int64_t multiplicative_order(std::int64_t x, std::int64_t m)
{
    if (m == 1) {
        return 1;
    }
    if (std::gcd(min_residue(x, m), m) != 1) {
        throw domain_error("multiplicative_order: not a unit");
    }
    std::int64_t b = 1;
    std::int64_t y = min_residue(x, m);
    while (y != 1) {
        y = y * min_residue(x, m) % m;
        ++b;
    }
    return b;
}

inline ExactRat falling_factorial(const ExactRat& x, std::int64_t n)
{
    ExactRat r = 1;
    for (std::int64_t i = 0; i < n; ++i) {
        r *= x - i;
    }
    return r;
}

inline ExactInt factorial(std::int64_t k)
{
    ExactInt r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

/// 1/k! for k >= 0 and 0 for negative k.
inline ExactRat factorial_inv_or_zero(std::int64_t k)
{
    if (k < 0) {
        return 0;
    }
    ExactRat r(ExactInt(1), factorial(k));
    r.canonicalize();
    return r;
}

/// Coefficients of E(X) = exp(sum_i X^{p^i} / p^i) up to X^{n_max}, from
/// n * lambda_n = sum_{p^i <= n} lambda_{n - p^i}.
inline std::vector<ExactRat> artin_hasse_coeffs(std::int64_t p, std::int64_t n_max)
{
    if (!is_prime(p)) {
        throw domain_error("artin_hasse_coeffs: p must be prime");
    }
    std::vector<ExactRat> lambda(static_cast<std::size_t>(n_max + 1));
    if (n_max < 0) {
        return {};
    }
    lambda[0] = 1;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        ExactRat acc = 0;
        for (std::int64_t pk = 1; pk <= n; pk *= p) {
            acc += lambda[static_cast<std::size_t>(n - pk)];
        }
        acc /= n;
        lambda[static_cast<std::size_t>(n)] = acc;
    }
    return lambda;
}

/// Least x + y over x, y >= 0 with d x + e y = n; nullopt when n is not
/// in dN + eN.  Requires d > e >= 1 coprime.
inline ExtNat min_phi(std::int64_t n, std::int64_t d, std::int64_t e)
{
    if (!(d > e && e >= 1) || std::gcd(d, e) != 1) {
        throw domain_error("min_phi: need d > e >= 1 coprime");
    }
    if (n < 0) {
        return std::nullopt;
    }
    const std::int64_t y = min_residue(mod_inverse(e, d) * min_residue(n, d), d);
    const std::int64_t rest = n - e * y;
    if (rest < 0) {
        return std::nullopt;
    }
    return rest / d + y;
}

/// p-adic valuation of a rational; nullopt for zero.
inline std::optional<std::int64_t> p_valuation(const ExactRat& x, std::int64_t p)
{
    if (x == 0) {
        return std::nullopt;
    }
    const ExactInt pz(static_cast<long>(p));
    auto count = [&](ExactInt v) {
        std::int64_t k = 0;
        while (v % pz == 0) {
            v /= pz;
            ++k;
        }
        return k;
    };
    return count(abs(x.get_num())) - count(x.get_den());
}

inline std::optional<std::int64_t> p_valuation(const ExactInt& x, std::int64_t p)
{
    return p_valuation(ExactRat(x), p);
}

/// Canonical "num/den" rendering, denominator always present.
inline std::string rational_string(const ExactRat& x)
{
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline ExactRat make_rat(std::int64_t num, std::int64_t den = 1)
{
    ExactRat r(ExactInt(static_cast<long>(num)), ExactInt(static_cast<long>(den)));
    r.canonicalize();
    return r;
}

/// Exact ceiling of a rational.
inline ExactInt ceil_rat(const ExactRat& x)
{
    ExactInt r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

} // namespace twnp

#endif
