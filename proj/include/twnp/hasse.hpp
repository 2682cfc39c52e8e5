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

#ifndef TWNP_HASSE_HPP
#define TWNP_HASSE_HPP

#include <twnp/arith.hpp>
#include <twnp/combinatorics.hpp>
#include <twnp/polygon.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace twnp
{

/// Residue data of the twist: t_k = (p^{-k} mu mod c), the reduced prime
/// bp = p mod cd (in [1, cd]) and the digits u_k, bu_k for k = 0 .. b.
struct TwistData {
    std::int64_t c = 1;
    std::int64_t mu = 0;
    std::int64_t b = 1;
    std::int64_t p = 0;
    std::int64_t bp = 0;
    std::int64_t ell = 0;
    std::vector<std::int64_t> t;  // t_0 .. t_b
    std::vector<std::int64_t> bu; // bu_0 .. bu_{b-1}
    std::vector<std::int64_t> u;  // u_0 .. u_{b-1}

    std::int64_t t_at(std::int64_t k) const { return t[static_cast<std::size_t>(min_residue(k, b))]; }
    std::int64_t u_at(std::int64_t k) const { return u[static_cast<std::size_t>(min_residue(k, b))]; }
    std::int64_t bu_at(std::int64_t k) const { return bu[static_cast<std::size_t>(min_residue(k, b))]; }
};

inline std::int64_t reduced_prime(std::int64_t p, std::int64_t c, std::int64_t d)
{
    const std::int64_t r = min_residue(p, c * d);
    return r == 0 ? c * d : r;
}

/// Residue data from (p, c, mu, d) only.
inline TwistData twist_data(std::int64_t p, std::int64_t c, std::int64_t mu, std::int64_t d)
{
    TwistData td;
    td.c = c;
    td.mu = mu;
    td.p = p;
    td.b = multiplicative_order(min_residue(p, c), c);
    td.bp = reduced_prime(p, c, d);
    td.ell = (p - td.bp) / (c * d);
    const std::int64_t p_inv = c == 1 ? 0 : mod_inverse(min_residue(p, c), c);
    std::int64_t cur = min_residue(mu, c);
    for (std::int64_t k = 0; k <= td.b; ++k) {
        td.t.push_back(cur);
        cur = min_residue(cur * p_inv, c);
    }
    for (std::int64_t k = 0; k < td.b; ++k) {
        const std::int64_t num_u = td.t[k + 1] * p - td.t[k];
        const std::int64_t num_bu = td.t[k + 1] * td.bp - td.t[k];
        if (num_u % c != 0 || num_bu % c != 0) {
            throw internal_error("twist_data: non-integral digit");
        }
        td.u.push_back(num_u / c);
        td.bu.push_back(num_bu / c);
    }
    return td;
}

/// Residue data of a parameter tuple, checked against the base-p digits of u.
inline TwistData twist_data(const Params& prm)
{
    TwistData td = twist_data(prm.p, prm.c, prm.mu, prm.d);
    for (std::int64_t k = 0; k < prm.b; ++k) {
        if (td.u[k] != prm.digit(k) || td.u[k] != td.t[k + 1] * prm.d * td.ell + td.bu[k]) {
            throw internal_error("twist_data: digit reconstruction failed");
        }
    }
    return td;
}

/// Sum over perms of sgn(tau) prod_i 1/(x_i! y_i!), with 1/k! = 0 for k < 0.
inline ExactRat hasse_sum(const CombInstance& inst, int n, const std::vector<Permutation>& perms)
{
    ExactRat total = 0;
    for (const auto& tau : perms) {
        ExactRat term = permutation_sign(tau);
        for (int i = 0; i <= n && term != 0; ++i) {
            const auto [x, y] = xy_decomposition(inst, i, tau[i]);
            term *= factorial_inv_or_zero(x) * factorial_inv_or_zero(y);
        }
        total += term;
    }
    return total;
}

/// h_{n,k}, summed over S_bullet of (p, d, e, u_k).
inline ExactRat hasse_number(const Params& prm, int n, std::int64_t k)
{
    if (n < 0 || n > prm.d - 2 || k < 1 || k > prm.b) {
        throw domain_error("hasse_number: need 0 <= n <= d - 2 and 1 <= k <= b");
    }
    const CombInstance inst(prm.p, prm.d, prm.e, prm.digit(k));
    return hasse_sum(inst, n, optimal_perm_sets(inst, n).bullet);
}

/// Same value summed over S_circle only.
inline ExactRat hasse_number_circle(const Params& prm, int n, std::int64_t k)
{
    if (n < 0 || n > prm.d - 2 || k < 1 || k > prm.b) {
        throw domain_error("hasse_number_circle: need 0 <= n <= d - 2 and 1 <= k <= b");
    }
    const CombInstance inst(prm.p, prm.d, prm.e, prm.digit(k));
    return hasse_sum(inst, n, optimal_perm_sets(inst, n).circle);
}

/// v_{t,n} = sum_i y_i for tau in S_circle, checked to be tau-independent.
/// Returns nullopt when S_circle is empty.
inline std::optional<std::int64_t> v_exponent(const Params& prm, int n, std::int64_t k)
{
    const CombInstance inst(prm.p, prm.d, prm.e, prm.digit(k));
    const auto sets = optimal_perm_sets(inst, n);
    std::optional<std::int64_t> v;
    for (const auto& tau : sets.circle) {
        std::int64_t s = 0;
        for (int i = 0; i <= n; ++i) {
            s += xy_decomposition(inst, i, tau[i]).y;
        }
        if (v && *v != s) {
            throw internal_error("v_exponent: value depends on the permutation");
        }
        v = s;
    }
    return v;
}

/// Integral Hasse constant H(mu, c, bp, e, d).  bp is a residue mod cd
/// coprime to cd; the product over i runs over 0 .. n.
inline ExactInt hasse_constant(std::int64_t c, std::int64_t mu, std::int64_t bp, std::int64_t e, std::int64_t d)
{
    if (c < 1 || std::gcd(min_residue(mu, c), c) != 1) {
        throw domain_error("hasse_constant: need c >= 1 and gcd(mu, c) = 1");
    }
    if (!(d > e && e >= 1) || std::gcd(d, e) != 1) {
        throw domain_error("hasse_constant: need d > e >= 1 with gcd(d, e) = 1");
    }
    if (bp < 1 || bp > c * d || std::gcd(bp, c * d) != 1) {
        throw domain_error("hasse_constant: bp must be a unit residue in [1, cd]");
    }
    const TwistData td = twist_data(bp, c, mu, d);
    const std::int64_t cd = c * d;
    ExactRat total = 1;
    for (std::int64_t k = 1; k <= td.b; ++k) {
        const std::int64_t t_next = td.t_at(k + 1);
        const CombInstance inst(bp, d, e, td.bu_at(k));
        for (int n = 0; n <= d - 2; ++n) {
            ExactRat sum = 0;
            for (const auto& tau : optimal_perm_sets(inst, n).bullet) {
                ExactRat term = permutation_sign(tau);
                for (int i = 0; i <= n; ++i) {
                    const auto [x, y] = xy_decomposition(inst, i, tau[i]);
                    if (x >= bp) {
                        throw internal_error("hasse_constant: x exceeds the reduced prime");
                    }
                    ExactInt cd_pow;
                    mpz_pow_ui(cd_pow.get_mpz_t(), ExactInt(cd).get_mpz_t(),
                               static_cast<unsigned long>(bp - 1 - x));
                    const ExactRat arg = make_rat(-bp * (c * i + t_next), cd) + (bp - 1);
                    term *= falling_factorial(ExactRat(d - 1), d - 1 - y) * ExactRat(cd_pow) *
                            falling_factorial(arg, bp - 1 - x);
                }
                sum += term;
            }
            total *= sum;
        }
    }
    total.canonicalize();
    if (total.get_den() != 1) {
        throw internal_error("hasse_constant: result is not an integer");
    }
    return total.get_num();
}

struct HasseEntry {
    int n = 0;
    std::int64_t k = 0;
    ExactRat h;
    std::optional<std::int64_t> valuation; // nullopt when h = 0
};

struct HasseCertificate {
    std::vector<HasseEntry> entries;
    std::optional<std::int64_t> product_valuation; // nullopt means +infinity
    ExactInt H;
    std::int64_t H_mod_p = 0;
    bool h_unit = false;
    bool p_divides_H = false;
};

/// Sum of v_p(h_{n,k}); nullopt (infinity) when some h_{n,k} vanishes.
inline std::optional<std::int64_t> hasse_product_valuation(const Params& prm)
{
    std::int64_t total = 0;
    for (std::int64_t k = 1; k <= prm.b; ++k) {
        for (int n = 0; n <= prm.d - 2; ++n) {
            const auto v = p_valuation(hasse_number(prm, n, k), prm.p);
            if (!v) {
                return std::nullopt;
            }
            total += *v;
        }
    }
    return total;
}

inline HasseCertificate hasse_certificate(const Params& prm)
{
    HasseCertificate cert;
    std::optional<std::int64_t> total = 0;
    for (int n = 0; n <= prm.d - 2; ++n) {
        for (std::int64_t k = 1; k <= prm.b; ++k) {
            HasseEntry ent;
            ent.n = n;
            ent.k = k;
            ent.h = hasse_number(prm, n, k);
            ent.valuation = p_valuation(ent.h, prm.p);
            if (!ent.valuation) {
                total.reset();
            } else if (total) {
                *total += *ent.valuation;
            }
            cert.entries.push_back(std::move(ent));
        }
    }
    cert.product_valuation = total;
    cert.h_unit = total && *total == 0;
    cert.H = hasse_constant(prm.c, prm.mu, reduced_prime(prm.p, prm.c, prm.d), prm.e, prm.d);
    ExactInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), cert.H.get_mpz_t(), static_cast<unsigned long>(prm.p));
    cert.H_mod_p = r.get_si();
    cert.p_divides_H = cert.H_mod_p == 0;
    return cert;
}

} // namespace twnp

#endif
