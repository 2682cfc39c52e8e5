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

#ifndef TWNP_FFIELD_HPP
#define TWNP_FFIELD_HPP

#include <twnp/arith.hpp>

#include <array>
#include <cstdint>
#include <vector>

namespace twnp
{

/// Largest extension degree supported by the fixed-size element types.
inline constexpr int kMaxDegree = 16;

/// Dense polynomials over F_p, low degree first, used for field setup.
namespace fp_poly
{

using Poly = std::vector<std::int64_t>;

inline void trim(Poly& f)
{
    while (!f.empty() && f.back() == 0) {
        f.pop_back();
    }
}

inline Poly mulmod(const Poly& f, const Poly& g, const Poly& m, std::int64_t p)
{
    if (f.empty() || g.empty()) {
        return {};
    }
    Poly r(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            r[i + j] = (r[i + j] + f[i] * g[j]) % p;
        }
    }
    const std::size_t n = m.size() - 1; // m monic
    for (std::size_t k = r.size(); k-- > n;) {
        const std::int64_t t = r[k];
        if (t == 0) {
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            r[k - n + i] = min_residue(r[k - n + i] - t * m[i], p);
        }
    }
    trim(r);
    return r;
}

inline Poly powmod(Poly base, std::int64_t e, const Poly& m, std::int64_t p)
{
    Poly r{1};
    while (e > 0) {
        if (e & 1) {
            r = mulmod(r, base, m, p);
        }
        base = mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

inline Poly sub(Poly f, const Poly& g, std::int64_t p)
{
    if (f.size() < g.size()) {
        f.resize(g.size(), 0);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        f[i] = min_residue(f[i] - g[i], p);
    }
    trim(f);
    return f;
}

inline Poly rem(Poly f, const Poly& g, std::int64_t p)
{
    const std::int64_t inv = mod_inverse(g.back(), p);
    while (f.size() >= g.size()) {
        const std::int64_t t = f.back() * inv % p;
        const std::size_t shift = f.size() - g.size();
        for (std::size_t i = 0; i < g.size(); ++i) {
            f[shift + i] = min_residue(f[shift + i] - t * g[i], p);
        }
        trim(f);
    }
    return f;
}

inline Poly gcd(Poly f, Poly g, std::int64_t p)
{
    trim(f);
    trim(g);
    while (!g.empty()) {
        Poly r = rem(f, g, p);
        f = std::move(g);
        g = std::move(r);
    }
    return f;
}

/// Rabin's test for a monic polynomial of degree n.
inline bool is_irreducible(const Poly& m, std::int64_t p)
{
    const std::int64_t n = static_cast<std::int64_t>(m.size()) - 1;
    if (n == 1) {
        return true;
    }
    const Poly x{0, 1};
    // x^{p^k} mod m for k = 1 .. n.
    std::vector<Poly> frob{x};
    for (std::int64_t k = 1; k <= n; ++k) {
        frob.push_back(powmod(frob.back(), p, m, p));
    }
    if (sub(frob[n], x, p).size() != 0) {
        return false;
    }
    for (std::int64_t r : prime_factors(n)) {
        const Poly g = gcd(m, sub(frob[n / r], x, p), p);
        if (g.size() != 1) {
            return false;
        }
    }
    return true;
}

} // namespace fp_poly

/// Element of F_{p^n} in the power basis of the context's modulus.
struct FFElem {
    std::array<std::uint32_t, kMaxDegree> c{};

    friend bool operator==(const FFElem& x, const FFElem& y) { return x.c == y.c; }
};

/// F_{p^n} = F_p[Y]/(m) with m the least monic irreducible of degree n
/// (ordered by the integer sum_i m_i p^i over the non-leading coefficients)
/// and the generator of least encoding.
class FFContext
{
public:
    FFContext() = default;

    FFContext(std::int64_t p, int n) : p_(p), n_(n)
    {
        if (!is_prime(p)) {
            throw domain_error("FFContext: p must be prime");
        }
        if (p >= (std::int64_t{1} << 16)) {
            throw domain_error("FFContext: p must be below 2^16");
        }
        if (n < 1 || n > kMaxDegree) {
            throw domain_error("FFContext: degree out of range");
        }
        size_ = 1;
        for (int i = 0; i < n; ++i) {
            if (size_ > (std::int64_t{1} << 50) / p) {
                throw domain_error("FFContext: field too large");
            }
            size_ *= p;
        }
        find_modulus();
        compute_traces();
        find_generator();
    }

    std::int64_t p() const { return p_; }
    int degree() const { return n_; }
    std::int64_t size() const { return size_; }
    const std::vector<std::int64_t>& modulus() const { return modulus_; }
    const FFElem& generator() const { return gen_; }

    FFElem zero() const { return FFElem{}; }
    FFElem one() const
    {
        FFElem r;
        r.c[0] = 1;
        return r;
    }

    FFElem from_int(std::int64_t v) const
    {
        FFElem r;
        r.c[0] = static_cast<std::uint32_t>(min_residue(v, p_));
        return r;
    }

    /// Y^i.
    FFElem basis(int i) const
    {
        FFElem r;
        if (n_ == 1) {
            // Y is the root of X - m_0 in the prime field.
            r.c[0] = static_cast<std::uint32_t>(powmod(min_residue(-modulus_[0], p_), i, p_));
            return r;
        }
        r.c[static_cast<std::size_t>(i)] = 1;
        return r;
    }

    bool is_zero(const FFElem& x) const
    {
        for (int i = 0; i < n_; ++i) {
            if (x.c[i] != 0) {
                return false;
            }
        }
        return true;
    }

    FFElem add(const FFElem& x, const FFElem& y) const
    {
        FFElem r;
        for (int i = 0; i < n_; ++i) {
            const std::uint32_t s = x.c[i] + y.c[i];
            r.c[i] = s >= p_ ? s - static_cast<std::uint32_t>(p_) : s;
        }
        return r;
    }

    FFElem sub(const FFElem& x, const FFElem& y) const
    {
        FFElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = x.c[i] >= y.c[i] ? x.c[i] - y.c[i] : x.c[i] + static_cast<std::uint32_t>(p_) - y.c[i];
        }
        return r;
    }

    FFElem scale(const FFElem& x, std::int64_t s) const
    {
        const std::uint64_t sm = static_cast<std::uint64_t>(min_residue(s, p_));
        FFElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = static_cast<std::uint32_t>(x.c[i] * sm % static_cast<std::uint64_t>(p_));
        }
        return r;
    }

    FFElem mul(const FFElem& x, const FFElem& y) const
    {
        const std::uint64_t p = static_cast<std::uint64_t>(p_);
        std::array<std::uint64_t, 2 * kMaxDegree> r{};
        for (int i = 0; i < n_; ++i) {
            if (x.c[i] == 0) {
                continue;
            }
            for (int j = 0; j < n_; ++j) {
                r[i + j] += static_cast<std::uint64_t>(x.c[i]) * y.c[j];
            }
        }
        for (int k = 2 * n_ - 2; k >= n_; --k) {
            const std::uint64_t t = r[k] % p;
            if (t == 0) {
                continue;
            }
            for (int i = 0; i < n_; ++i) {
                r[k - n_ + i] += t * neg_mod_[i];
            }
        }
        FFElem out;
        for (int i = 0; i < n_; ++i) {
            out.c[i] = static_cast<std::uint32_t>(r[i] % p);
        }
        return out;
    }

    /// x * Y.
    FFElem mul_by_y(const FFElem& x) const
    {
        if (n_ == 1) {
            return mul(x, basis(1));
        }
        const std::uint64_t p = static_cast<std::uint64_t>(p_);
        const std::uint64_t top = x.c[n_ - 1];
        FFElem r;
        r.c[0] = static_cast<std::uint32_t>(top * neg_mod_[0] % p);
        for (int i = 1; i < n_; ++i) {
            r.c[i] = static_cast<std::uint32_t>((x.c[i - 1] + top * neg_mod_[i]) % p);
        }
        return r;
    }

    /// x * generator, using only the generator's nonzero coefficients.
    FFElem mul_by_generator(const FFElem& x) const
    {
        if (gen_is_y_) {
            return mul_by_y(x);
        }
        return mul(x, gen_);
    }

    FFElem pow(FFElem base, std::int64_t e) const
    {
        if (e < 0) {
            throw domain_error("FFContext::pow: negative exponent");
        }
        FFElem r = one();
        while (e > 0) {
            if (e & 1) {
                r = mul(r, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    FFElem inverse(const FFElem& x) const
    {
        if (is_zero(x)) {
            throw domain_error("FFContext::inverse: zero");
        }
        return pow(x, size_ - 2);
    }

    FFElem frobenius(const FFElem& x) const { return pow(x, p_); }

    /// Absolute trace to F_p.
    std::int64_t trace(const FFElem& x) const
    {
        std::uint64_t s = 0;
        for (int i = 0; i < n_; ++i) {
            s += static_cast<std::uint64_t>(x.c[i]) * trace_basis_[i];
        }
        return static_cast<std::int64_t>(s % static_cast<std::uint64_t>(p_));
    }

    /// Tr(Y^i) in F_p.
    std::int64_t trace_of_basis(int i) const { return static_cast<std::int64_t>(trace_basis_[i]); }

    std::int64_t encode(const FFElem& x) const
    {
        std::int64_t v = 0;
        for (int i = n_; i-- > 0;) {
            v = v * p_ + x.c[i];
        }
        return v;
    }

    FFElem decode(std::int64_t v) const
    {
        FFElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = static_cast<std::uint32_t>(v % p_);
            v /= p_;
        }
        return r;
    }

    /// Evaluate a polynomial with F_p coefficients (low degree first) at x.
    FFElem eval(const std::vector<std::int64_t>& poly, const FFElem& x) const
    {
        FFElem r = zero();
        for (std::size_t i = poly.size(); i-- > 0;) {
            r = add(mul(r, x), from_int(poly[i]));
        }
        return r;
    }

    bool has_full_order(const FFElem& g) const
    {
        if (is_zero(g)) {
            return false;
        }
        for (std::int64_t r : prime_factors(size_ - 1)) {
            if (pow(g, (size_ - 1) / r) == one()) {
                return false;
            }
        }
        return true;
    }

private:
    void find_modulus()
    {
        if (n_ == 1) {
            modulus_ = {0, 1}; // X - 0
        } else {
            // Candidates ordered by the integer sum_i m_i p^i, i.e. comparing
            // (m_{n-1}, ..., m_0) lexicographically.
            for (std::int64_t code = 1; code < size_; ++code) {
                std::vector<std::int64_t> cand(n_ + 1, 0);
                std::int64_t v = code;
                for (int i = 0; i < n_; ++i) {
                    cand[i] = v % p_;
                    v /= p_;
                }
                cand[n_] = 1;
                if (cand[0] != 0 && fp_poly::is_irreducible(cand, p_)) {
                    modulus_ = cand;
                    break;
                }
            }
        }
        neg_mod_.fill(0);
        for (int i = 0; i < n_; ++i) {
            neg_mod_[i] = static_cast<std::uint64_t>(min_residue(-modulus_[i], p_));
        }
    }

    void compute_traces()
    {
        // Power sums of the roots of the modulus via Newton's identities.
        const std::vector<std::int64_t> pw = power_sums(modulus_, n_, p_);
        trace_basis_.fill(0);
        for (int i = 0; i < n_; ++i) {
            trace_basis_[i] = static_cast<std::uint64_t>(min_residue(pw[i], p_));
        }
    }

    void find_generator()
    {
        for (std::int64_t code = 1; code < size_; ++code) {
            const FFElem g = decode(code);
            if (has_full_order(g)) {
                gen_ = g;
                gen_is_y_ = n_ > 1 && g == basis(1);
                return;
            }
        }
        throw internal_error("FFContext: no generator found");
    }

public:
    /// Power sums s_0 .. s_{n-1} of the roots of a monic polynomial, reduced
    /// mod `modulus` (pass 0 for exact integers that fit in int64).
    static std::vector<std::int64_t> power_sums(const std::vector<std::int64_t>& m, int n, std::int64_t modulus)
    {
        // m = X^n + c_{n-1} X^{n-1} + ... ; e-coefficients a_k = m_{n-k}.
        auto red = [&](std::int64_t v) { return modulus > 0 ? min_residue(v, modulus) : v; };
        std::vector<std::int64_t> s(static_cast<std::size_t>(n), 0);
        s[0] = red(n);
        for (int k = 1; k < n; ++k) {
            std::int64_t acc = red(-k * m[n - k]);
            for (int i = 1; i < k; ++i) {
                acc = red(acc - m[n - i] * s[k - i]);
            }
            s[k] = acc;
        }
        return s;
    }

private:
    std::int64_t p_ = 0;
    int n_ = 0;
    std::int64_t size_ = 0;
    std::vector<std::int64_t> modulus_;
    std::array<std::uint64_t, kMaxDegree> neg_mod_{};
    std::array<std::uint64_t, kMaxDegree> trace_basis_{};
    FFElem gen_;
    bool gen_is_y_ = false;
};

} // namespace twnp

#endif
