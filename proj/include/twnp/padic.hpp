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

#ifndef TWNP_PADIC_HPP
#define TWNP_PADIC_HPP

#include <twnp/arith.hpp>
#include <twnp/ffield.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twnp
{

class precision_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Largest M with p^M < 2^62.
inline int max_precision(std::int64_t p)
{
    int M = 0;
    unsigned __int128 v = 1;
    while (v * static_cast<unsigned __int128>(p) < (static_cast<unsigned __int128>(1) << 62)) {
        v *= static_cast<unsigned __int128>(p);
        ++M;
    }
    return M;
}

/// Default working precision for a tuple with extension degree a and
/// exponent d: a*d + 8 digits, capped by the machine-word limit.
inline int default_precision(std::int64_t p, std::int64_t a, std::int64_t d)
{
    return static_cast<int>(std::min<std::int64_t>(a * d + 8, max_precision(p)));
}

/// Element of Z_q / p^M in the power basis of the lifted modulus.
struct ZqElem {
    std::array<std::uint64_t, kMaxDegree> c{};

    friend bool operator==(const ZqElem& x, const ZqElem& y) { return x.c == y.c; }
};

/// Z_q = Z_p[Y]/(m~) modulo p^M, where m~ lifts the residue field modulus
/// with coefficients in [0, p).
class ZqContext
{
public:
    ZqContext(std::int64_t p, int degree, int M) : ff_(p, degree), p_(p), n_(degree), M_(M)
    {
        if (M < 1 || M > max_precision(p)) {
            throw domain_error("ZqContext: precision out of range");
        }
        P_ = 1;
        for (int i = 0; i < M; ++i) {
            P_ *= static_cast<std::uint64_t>(p);
        }
        for (int i = 0; i <= n_; ++i) {
            mod_[i] = ff_.modulus()[i];
        }
        compute_traces();
        sigma_y_ = n_ == 1 ? one() : hensel_root(lifted_modulus(), lift(ff_.frobenius(ff_.basis(1))));
    }

    std::int64_t p() const { return p_; }
    int degree() const { return n_; }
    int precision() const { return M_; }
    std::uint64_t modulus_pm() const { return P_; }
    const FFContext& residue_field() const { return ff_; }

    ZqElem zero() const { return ZqElem{}; }
    ZqElem one() const { return from_int(1); }

    ZqElem from_int(std::int64_t v) const
    {
        ZqElem r;
        r.c[0] = reduce_signed(v);
        return r;
    }

    ZqElem from_mpz(const ExactInt& v) const
    {
        ExactInt r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), ExactInt(std::to_string(P_)).get_mpz_t());
        ZqElem out;
        out.c[0] = std::stoull(r.get_str());
        return out;
    }

    /// A rational with denominator prime to p.
    ZqElem from_rat(const ExactRat& v) const
    {
        const ExactInt Pz(std::to_string(P_));
        ExactInt inv;
        if (mpz_invert(inv.get_mpz_t(), v.get_den_mpz_t(), Pz.get_mpz_t()) == 0) {
            throw domain_error("ZqContext::from_rat: denominator divisible by p");
        }
        return from_mpz(ExactInt(v.get_num() * inv));
    }

    /// Y^i.
    ZqElem basis(int i) const
    {
        ZqElem y;
        if (n_ == 1) {
            return from_int(i == 0 ? 1 : 0);
        }
        y.c[1] = 1;
        return pow(y, i);
    }

    /// Coordinate-wise lift of a residue-field element.
    ZqElem lift(const FFElem& x) const
    {
        ZqElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = x.c[i];
        }
        return r;
    }

    FFElem reduce(const ZqElem& x) const
    {
        FFElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = static_cast<std::uint32_t>(x.c[i] % static_cast<std::uint64_t>(p_));
        }
        return r;
    }

    bool is_zero(const ZqElem& x) const
    {
        for (int i = 0; i < n_; ++i) {
            if (x.c[i] != 0) {
                return false;
            }
        }
        return true;
    }

    ZqElem add(const ZqElem& x, const ZqElem& y) const
    {
        ZqElem r;
        for (int i = 0; i < n_; ++i) {
            const std::uint64_t s = x.c[i] + y.c[i];
            r.c[i] = s >= P_ ? s - P_ : s;
        }
        return r;
    }

    ZqElem sub(const ZqElem& x, const ZqElem& y) const
    {
        ZqElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = x.c[i] >= y.c[i] ? x.c[i] - y.c[i] : x.c[i] + P_ - y.c[i];
        }
        return r;
    }

    ZqElem neg(const ZqElem& x) const { return sub(zero(), x); }

    ZqElem scale(const ZqElem& x, std::int64_t s) const { return scale_u(x, reduce_signed(s)); }

    /// x * s with s already reduced mod p^M.
    ZqElem scale_u(const ZqElem& x, std::uint64_t s) const
    {
        ZqElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = mulmod(x.c[i], s);
        }
        return r;
    }

    ZqElem mul(const ZqElem& x, const ZqElem& y) const
    {
        if (n_ == 1) {
            ZqElem r;
            r.c[0] = mulmod(x.c[0], y.c[0]);
            return r;
        }
        std::array<__int128, 2 * kMaxDegree> acc{};
        for (int i = 0; i < n_; ++i) {
            if (x.c[i] == 0) {
                continue;
            }
            for (int j = 0; j < n_; ++j) {
                acc[i + j] += static_cast<__int128>(mulmod(x.c[i], y.c[j]));
            }
        }
        for (int k = 2 * n_ - 2; k >= n_; --k) {
            const __int128 t = norm(acc[k]);
            if (t == 0) {
                continue;
            }
            for (int i = 0; i < n_; ++i) {
                acc[k - n_ + i] -= t * mod_[i];
            }
        }
        ZqElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = static_cast<std::uint64_t>(norm(acc[i]));
        }
        return r;
    }

    ZqElem pow(ZqElem base, std::uint64_t e) const
    {
        ZqElem r = one();
        while (e > 0) {
            if (e & 1) {
                r = mul(r, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    /// Inverse of a unit by Newton iteration from the residue-field inverse.
    ZqElem inverse(const ZqElem& x) const
    {
        const FFElem r = reduce(x);
        if (ff_.is_zero(r)) {
            throw domain_error("ZqContext::inverse: not a unit");
        }
        ZqElem z = lift(ff_.inverse(r));
        const ZqElem two = from_int(2);
        for (int prec = 1; prec < M_; prec *= 2) {
            z = mul(z, sub(two, mul(x, z)));
        }
        return z;
    }

    /// Teichmueller lift: the (q'-1)-th root of unity reducing to x
    /// (q' = p^degree); teichmuller(0) = 0.
    ZqElem teichmuller(const FFElem& x) const
    {
        ZqElem z = lift(x);
        if (ff_.is_zero(x)) {
            return z;
        }
        const std::uint64_t qp = static_cast<std::uint64_t>(ff_.size());
        for (int i = 0; i < M_; ++i) {
            z = pow(z, qp);
        }
        return z;
    }

    /// Evaluate a polynomial with Z_q coefficients (low degree first).
    ZqElem eval(const std::vector<ZqElem>& poly, const ZqElem& x) const
    {
        ZqElem r = zero();
        for (std::size_t i = poly.size(); i-- > 0;) {
            r = add(mul(r, x), poly[i]);
        }
        return r;
    }

    /// Root of `poly` congruent to `approx` mod p, assuming the root is
    /// simple mod p.
    ZqElem hensel_root(const std::vector<ZqElem>& poly, ZqElem approx) const
    {
        std::vector<ZqElem> deriv;
        for (std::size_t i = 1; i < poly.size(); ++i) {
            deriv.push_back(scale(poly[i], static_cast<std::int64_t>(i)));
        }
        if (!ff_.is_zero(reduce(eval(poly, approx)))) {
            throw domain_error("ZqContext::hensel_root: not a root mod p");
        }
        for (int prec = 1; prec < 2 * M_; prec *= 2) {
            approx = sub(approx, mul(eval(poly, approx), inverse(eval(deriv, approx))));
        }
        if (!is_zero(eval(poly, approx))) {
            throw internal_error("ZqContext::hensel_root: iteration did not converge");
        }
        return approx;
    }

    /// The lifted modulus as a polynomial over Z_q.
    std::vector<ZqElem> lifted_modulus() const
    {
        std::vector<ZqElem> out;
        for (int i = 0; i <= n_; ++i) {
            out.push_back(from_int(mod_[i]));
        }
        return out;
    }

    /// Image of Y under the Frobenius automorphism.
    const ZqElem& frobenius_of_y() const { return sigma_y_; }

    /// sigma(x), the lift of x -> x^p.
    ZqElem frobenius(const ZqElem& x) const
    {
        if (n_ == 1) {
            return x;
        }
        const ZqElem& sy = frobenius_of_y();
        ZqElem r = zero();
        for (int i = n_; i-- > 0;) {
            r = add(mul(r, sy), from_int_u(x.c[i]));
        }
        return r;
    }

    ZqElem frobenius_power(ZqElem x, std::int64_t k) const
    {
        for (std::int64_t i = 0; i < min_residue(k, n_); ++i) {
            x = frobenius(x);
        }
        return x;
    }

    /// Tr_{Q_q/Q_p}(x) mod p^M.
    std::uint64_t trace(const ZqElem& x) const
    {
        unsigned __int128 s = 0;
        for (int i = 0; i < n_; ++i) {
            s += mulmod(x.c[i], trace_basis_[i]);
        }
        return static_cast<std::uint64_t>(s % P_);
    }

    /// v_p(x), nullopt when x = 0 mod p^M.
    std::optional<int> valuation(const ZqElem& x) const
    {
        std::optional<int> best;
        for (int i = 0; i < n_; ++i) {
            if (x.c[i] == 0) {
                continue;
            }
            int v = 0;
            std::uint64_t t = x.c[i];
            while (t % static_cast<std::uint64_t>(p_) == 0) {
                t /= static_cast<std::uint64_t>(p_);
                ++v;
            }
            if (!best || v < *best) {
                best = v;
            }
        }
        return best;
    }

    /// Reduce an element of a context with higher precision (same p, degree).
    ZqElem truncate_from(const ZqElem& x) const
    {
        ZqElem r;
        for (int i = 0; i < n_; ++i) {
            r.c[i] = x.c[i] % P_;
        }
        return r;
    }

    std::uint64_t mulmod(std::uint64_t x, std::uint64_t y) const
    {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % P_);
    }

    std::uint64_t reduce_signed(std::int64_t v) const
    {
        const __int128 r = static_cast<__int128>(v) % static_cast<__int128>(P_);
        return static_cast<std::uint64_t>(r < 0 ? r + static_cast<__int128>(P_) : r);
    }

    /// Inverse of an integer prime to p, mod p^M.
    std::uint64_t inverse_int(std::int64_t v) const
    {
        ExactInt inv;
        const ExactInt Pz(std::to_string(P_));
        if (mpz_invert(inv.get_mpz_t(), ExactInt(static_cast<long>(v)).get_mpz_t(), Pz.get_mpz_t()) == 0) {
            throw domain_error("ZqContext::inverse_int: not a unit");
        }
        return std::stoull(inv.get_str());
    }

    std::string to_string(const ZqElem& x) const
    {
        std::string s = "[";
        for (int i = 0; i < n_; ++i) {
            s += (i ? "," : "") + std::to_string(x.c[i]);
        }
        return s + "]";
    }

private:
    ZqElem from_int_u(std::uint64_t v) const
    {
        ZqElem r;
        r.c[0] = v % P_;
        return r;
    }

    __int128 norm(__int128 v) const
    {
        v %= static_cast<__int128>(P_);
        return v < 0 ? v + static_cast<__int128>(P_) : v;
    }

    void compute_traces()
    {
        // Newton's identities for the power sums of the roots of m~.
        std::vector<__int128> s(static_cast<std::size_t>(n_), 0);
        s[0] = n_ % static_cast<__int128>(P_);
        for (int k = 1; k < n_; ++k) {
            __int128 acc = -static_cast<__int128>(k) * mod_[n_ - k];
            for (int i = 1; i < k; ++i) {
                acc -= static_cast<__int128>(mod_[n_ - i]) * s[k - i];
            }
            s[k] = norm(acc);
        }
        trace_basis_.fill(0);
        for (int i = 0; i < n_; ++i) {
            trace_basis_[i] = static_cast<std::uint64_t>(norm(s[i]));
        }
        if (n_ == 1) {
            trace_basis_[0] = 1;
        }
    }

    FFContext ff_;
    std::int64_t p_;
    int n_;
    int M_;
    std::uint64_t P_ = 1;
    std::array<std::int64_t, kMaxDegree + 1> mod_{};
    std::array<std::uint64_t, kMaxDegree> trace_basis_{};
    ZqElem sigma_y_;
};

/// A valuation that is either exact or only known to be at least `value`.
struct Valuation {
    bool certified = true;
    ExactRat value;

    static Valuation at_least(const ExactRat& cap) { return Valuation{false, cap}; }
};

/// Element of Z_q[pi_1] / p^M in the basis 1, pi_1, ..., pi_1^{p-2}.
struct RamifiedElem {
    std::vector<ZqElem> c;
};

/// Z_q[pi_1] with pi_1 = zeta_p - 1, a root of ((1 + X)^p - 1)/X.
class RamifiedContext
{
public:
    explicit RamifiedContext(const ZqContext& base) : base_(&base), p_(base.p())
    {
        // pi^{p-1} = -sum_{j<p-1} binom(p, j + 1) pi^j.
        for (std::int64_t j = 0; j + 1 < p_; ++j) {
            ExactInt b;
            mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(j + 1));
            relation_.push_back(base.from_mpz(b).c[0]);
        }
        zeta_powers_.push_back(one());
        for (std::int64_t s = 1; s < p_; ++s) {
            zeta_powers_.push_back(mul_one_plus_pi(zeta_powers_.back()));
        }
    }

    const ZqContext& base() const { return *base_; }
    std::int64_t p() const { return p_; }
    int dimension() const { return static_cast<int>(p_ - 1); }

    RamifiedElem zero() const { return RamifiedElem{std::vector<ZqElem>(static_cast<std::size_t>(p_ - 1))}; }

    RamifiedElem from_base(const ZqElem& x) const
    {
        RamifiedElem r = zero();
        r.c[0] = x;
        return r;
    }

    RamifiedElem one() const { return from_base(base_->one()); }

    /// pi_1^k for 0 <= k.
    RamifiedElem pi_power(std::int64_t k) const
    {
        RamifiedElem r = one();
        RamifiedElem pi = zero();
        if (p_ == 2) {
            pi.c[0] = base_->from_int(-2);
        } else {
            pi.c[1] = base_->one();
        }
        for (std::int64_t i = 0; i < k; ++i) {
            r = mul(r, pi);
        }
        return r;
    }

    RamifiedElem add(const RamifiedElem& x, const RamifiedElem& y) const
    {
        RamifiedElem r = zero();
        for (std::size_t j = 0; j < r.c.size(); ++j) {
            r.c[j] = base_->add(x.c[j], y.c[j]);
        }
        return r;
    }

    RamifiedElem sub(const RamifiedElem& x, const RamifiedElem& y) const
    {
        RamifiedElem r = zero();
        for (std::size_t j = 0; j < r.c.size(); ++j) {
            r.c[j] = base_->sub(x.c[j], y.c[j]);
        }
        return r;
    }

    RamifiedElem scale(const RamifiedElem& x, const ZqElem& s) const
    {
        RamifiedElem r = zero();
        for (std::size_t j = 0; j < r.c.size(); ++j) {
            r.c[j] = base_->mul(x.c[j], s);
        }
        return r;
    }

    RamifiedElem scale_int(const RamifiedElem& x, std::int64_t s) const
    {
        RamifiedElem r = zero();
        for (std::size_t j = 0; j < r.c.size(); ++j) {
            r.c[j] = base_->scale(x.c[j], s);
        }
        return r;
    }

    RamifiedElem mul(const RamifiedElem& x, const RamifiedElem& y) const
    {
        const std::size_t n = static_cast<std::size_t>(p_ - 1);
        std::vector<ZqElem> acc(2 * n - 1, base_->zero());
        for (std::size_t i = 0; i < n; ++i) {
            if (base_->is_zero(x.c[i])) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (!base_->is_zero(y.c[j])) {
                    acc[i + j] = base_->add(acc[i + j], base_->mul(x.c[i], y.c[j]));
                }
            }
        }
        for (std::size_t k = acc.size(); k-- > n;) {
            const ZqElem t = acc[k];
            if (base_->is_zero(t)) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                acc[k - n + j] = base_->sub(acc[k - n + j], base_->scale_u(t, relation_[j]));
            }
        }
        acc.resize(n);
        return RamifiedElem{std::move(acc)};
    }

    /// zeta_p^s = (1 + pi_1)^{s mod p}.
    const RamifiedElem& zeta_p_power(std::int64_t s) const
    {
        return zeta_powers_[static_cast<std::size_t>(min_residue(s, p_))];
    }

    bool is_zero(const RamifiedElem& x) const
    {
        for (const auto& c : x.c) {
            if (!base_->is_zero(c)) {
                return false;
            }
        }
        return true;
    }

    bool equal(const RamifiedElem& x, const RamifiedElem& y) const { return x.c == y.c; }

    /// min_j (v_p(c_j) + j/(p-1)); "at least M" when x = 0 mod p^M.
    Valuation valuation(const RamifiedElem& x) const
    {
        std::optional<ExactRat> best;
        for (std::size_t j = 0; j < x.c.size(); ++j) {
            const auto v = base_->valuation(x.c[j]);
            if (!v) {
                continue;
            }
            const ExactRat cand = ExactRat(*v) + make_rat(static_cast<std::int64_t>(j), p_ - 1);
            if (!best || cand < *best) {
                best = cand;
            }
        }
        if (!best) {
            return Valuation::at_least(ExactRat(base_->precision()));
        }
        return Valuation{true, *best};
    }

    /// Apply a base-ring map coefficient-wise.
    template <class F>
    RamifiedElem map_coefficients(const RamifiedElem& x, F&& f) const
    {
        RamifiedElem r = zero();
        for (std::size_t j = 0; j < r.c.size(); ++j) {
            r.c[j] = f(x.c[j]);
        }
        return r;
    }

private:
    RamifiedElem mul_one_plus_pi(const RamifiedElem& x) const
    {
        const std::size_t n = static_cast<std::size_t>(p_ - 1);
        RamifiedElem r = x;
        // r += pi * x
        const ZqElem top = x.c[n - 1];
        for (std::size_t j = n; j-- > 1;) {
            r.c[j] = base_->add(r.c[j], x.c[j - 1]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            r.c[j] = base_->sub(r.c[j], base_->scale_u(top, relation_[j]));
        }
        return r;
    }

    const ZqContext* base_;
    std::int64_t p_;
    std::vector<std::uint64_t> relation_;
    std::vector<RamifiedElem> zeta_powers_;
};

} // namespace twnp

#endif
