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

#ifndef TWNP_DWORK_HPP
#define TWNP_DWORK_HPP

#include <twnp/arith.hpp>
#include <twnp/lfunction.hpp>
#include <twnp/padic.hpp>
#include <twnp/polygon.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twnp
{

class truncation_error : public std::runtime_error
{
public:
    truncation_error(const std::string& what, int N, int O)
        : std::runtime_error(what), suggested_N(N), suggested_O(O)
    {
    }
    int suggested_N;
    int suggested_O;
};

/// Truncated series sum_k c_k pi^{k/den}, k < c.size(), with Z_q
/// coefficients.  All operations truncate to the length of the result.
struct PiSeries {
    std::vector<ZqElem> c;

    std::size_t slots() const { return c.size(); }
};

inline PiSeries pi_zero(std::size_t slots) { return PiSeries{std::vector<ZqElem>(slots)}; }

inline PiSeries pi_one(const ZqContext& zq, std::size_t slots)
{
    PiSeries r = pi_zero(slots);
    if (slots > 0) {
        r.c[0] = zq.one();
    }
    return r;
}

/// First slot holding a coefficient nonzero mod p^M.
inline std::optional<std::size_t> pi_order(const ZqContext& zq, const PiSeries& x)
{
    for (std::size_t k = 0; k < x.c.size(); ++k) {
        if (!zq.is_zero(x.c[k])) {
            return k;
        }
    }
    return std::nullopt;
}

inline bool pi_is_zero(const ZqContext& zq, const PiSeries& x) { return !pi_order(zq, x).has_value(); }

inline void pi_add_to(const ZqContext& zq, PiSeries& acc, const PiSeries& x)
{
    const std::size_t n = std::min(acc.c.size(), x.c.size());
    for (std::size_t k = 0; k < n; ++k) {
        acc.c[k] = zq.add(acc.c[k], x.c[k]);
    }
}

inline PiSeries pi_add(const ZqContext& zq, PiSeries x, const PiSeries& y)
{
    pi_add_to(zq, x, y);
    return x;
}

inline PiSeries pi_sub(const ZqContext& zq, PiSeries x, const PiSeries& y)
{
    const std::size_t n = std::min(x.c.size(), y.c.size());
    for (std::size_t k = 0; k < n; ++k) {
        x.c[k] = zq.sub(x.c[k], y.c[k]);
    }
    return x;
}

inline PiSeries pi_neg(const ZqContext& zq, PiSeries x)
{
    for (auto& v : x.c) {
        v = zq.neg(v);
    }
    return x;
}

inline PiSeries pi_scale(const ZqContext& zq, PiSeries x, const ZqElem& s)
{
    for (auto& v : x.c) {
        v = zq.mul(v, s);
    }
    return x;
}

inline PiSeries pi_scale_int(const ZqContext& zq, PiSeries x, std::int64_t s)
{
    for (auto& v : x.c) {
        v = zq.scale(v, s);
    }
    return x;
}

/// acc += x * y, truncated to acc.slots().
inline void pi_mul_add(const ZqContext& zq, PiSeries& acc, const PiSeries& x, const PiSeries& y)
{
    const std::size_t L = acc.c.size();
    const auto ox = pi_order(zq, x);
    if (!ox) {
        return;
    }
    const auto oy = pi_order(zq, y);
    if (!oy) {
        return;
    }
    for (std::size_t i = *ox; i < x.c.size() && i + *oy < L; ++i) {
        if (zq.is_zero(x.c[i])) {
            continue;
        }
        for (std::size_t j = *oy; j < y.c.size() && i + j < L; ++j) {
            if (!zq.is_zero(y.c[j])) {
                acc.c[i + j] = zq.add(acc.c[i + j], zq.mul(x.c[i], y.c[j]));
            }
        }
    }
}

inline PiSeries pi_mul(const ZqContext& zq, const PiSeries& x, const PiSeries& y, std::size_t slots)
{
    PiSeries r = pi_zero(slots);
    pi_mul_add(zq, r, x, y);
    return r;
}

/// x * pi^{s/den} truncated to `slots`; a negative shift requires the
/// dropped low slots to vanish.
inline PiSeries pi_shift(const ZqContext& zq, const PiSeries& x, std::int64_t s, std::size_t slots)
{
    PiSeries r = pi_zero(slots);
    for (std::size_t k = 0; k < x.c.size(); ++k) {
        const std::int64_t t = static_cast<std::int64_t>(k) + s;
        if (t < 0) {
            if (!zq.is_zero(x.c[k])) {
                throw internal_error("pi_shift: negative exponent with nonzero coefficient");
            }
            continue;
        }
        if (t < static_cast<std::int64_t>(slots)) {
            r.c[static_cast<std::size_t>(t)] = x.c[k];
        }
    }
    return r;
}

inline PiSeries pi_truncate(PiSeries x, std::size_t slots)
{
    x.c.resize(slots);
    return x;
}

using GammaCoeffs = std::vector<PiSeries>;

/// gamma_n = sum_{dx + ey = n} pi^{x+y} lambda_x lambda_y lambda_hat^y for
/// n = 0 .. n_max, as series in pi^{1/d} truncated at pi-order O.
inline GammaCoeffs ef_coeffs(const ZqContext& zq, const Params& prm, const ZqElem& lambda_hat, std::int64_t n_max,
                             std::int64_t O)
{
    const std::int64_t den = prm.d;
    const std::size_t slots = static_cast<std::size_t>(O * den);
    const std::int64_t xy_cap = std::max<std::int64_t>(O, 0);
    const auto ah = artin_hasse_coeffs(prm.p, xy_cap);
    std::vector<ZqElem> lam;
    for (const auto& v : ah) {
        lam.push_back(zq.from_rat(v));
    }
    std::vector<ZqElem> lam_hat_pow{zq.one()};
    for (std::int64_t y = 1; y <= xy_cap; ++y) {
        lam_hat_pow.push_back(zq.mul(lam_hat_pow.back(), lambda_hat));
    }
    GammaCoeffs out(static_cast<std::size_t>(n_max + 1), pi_zero(slots));
    for (std::int64_t x = 0; x < O && prm.d * x <= n_max; ++x) {
        for (std::int64_t y = 0; x + y < O && prm.d * x + prm.e * y <= n_max; ++y) {
            const std::size_t slot = static_cast<std::size_t>((x + y) * den);
            auto& target = out[static_cast<std::size_t>(prm.d * x + prm.e * y)].c[slot];
            target = zq.add(target, zq.mul(zq.mul(lam[x], lam[y]), lam_hat_pow[y]));
        }
    }
    return out;
}

/// s_k = p^k u mod (q - 1).
inline std::int64_t twisted_exponent(const Params& prm, std::int64_t k)
{
    std::int64_t s = prm.u % (prm.q - 1);
    for (std::int64_t i = 0; i < min_residue(k, prm.a); ++i) {
        s = s * prm.p % (prm.q - 1);
    }
    return s;
}

/// Lower bound (s_k - s_{k-1})/(d(q-1)) + (j - i)/d + phi(p i - j + u_{-k})
/// for the one-step entry; nullopt (+infinity) when phi is infinite.
inline std::optional<ExactRat> entry_valuation_bound(const Params& prm, std::int64_t i, std::int64_t j,
                                                     std::int64_t k)
{
    if (k < 1 || k > prm.b) {
        throw domain_error("entry_valuation_bound: need 1 <= k <= b");
    }
    const auto ph = min_phi(prm.p * i - j + prm.digit(-k), prm.d, prm.e);
    if (!ph) {
        return std::nullopt;
    }
    const ExactRat shift = make_rat(twisted_exponent(prm, k) - twisted_exponent(prm, k - 1), prm.d * (prm.q - 1));
    return shift + make_rat(j - i, prm.d) + ExactRat(*ph);
}

struct TruncationVerdict {
    bool ok = true;
    std::vector<std::string> reasons;
    int suggested_N = 0;
    int suggested_O = 0;
};

inline constexpr int kOrderGuard = 1;

/// Checks that rows w >= N only reach pi-order >= O (entry order is at least
/// (p - 1) w / d) and that O clears a(p - 1) P(n_max) by the guard.
inline TruncationVerdict truncation_certificate(const Params& prm, int N, int O, int n_max)
{
    TruncationVerdict v;
    const ExactRat target = ExactRat(prm.a * (prm.p - 1)) * lower_bound_polygon(prm, n_max).value(n_max);
    const int O_needed = static_cast<int>(ceil_rat(target).get_si()) + kOrderGuard;
    v.suggested_O = std::max(O, O_needed + 1);
    v.suggested_N = std::max<int>(n_max, static_cast<int>(ceil_rat(make_rat(v.suggested_O * prm.d, prm.p - 1)).get_si()));
    if (n_max > N) {
        v.ok = false;
        v.reasons.push_back("n_max exceeds N");
    }
    if (static_cast<std::int64_t>(prm.p - 1) * N < static_cast<std::int64_t>(O) * prm.d) {
        v.ok = false;
        v.reasons.push_back("rows beyond N are not negligible at order O");
    }
    if (O < O_needed) {
        v.ok = false;
        v.reasons.push_back("order O below a(p-1)P(n_max) + guard");
    }
    return v;
}

/// Matrix of Psi^a on the basis (pi^{1/d} X)^{u/(q-1) + i}, i < N, with
/// entries (w, i) = pi^{(i-w)/d} F_{qw - i + u}, F = prod_l E_f^{sigma^l}(X^{p^l}).
class DworkOperator
{
public:
    DworkOperator(const Params& prm, int N, int O, int M) : prm_(prm), N_(N), O_(O), zq_(prm.p, static_cast<int>(prm.a), M)
    {
        if (N < 1 || O < 1) {
            throw domain_error("DworkOperator: need N, O >= 1");
        }
        slots_ = static_cast<std::size_t>(O) * static_cast<std::size_t>(prm.d);
        const FFContext& ff = zq_.residue_field();
        lambda_hat_ = zq_.pow(zq_.teichmuller(ff.generator()), static_cast<std::uint64_t>(prm.lambda_index));
        build();
    }

    const Params& params() const { return prm_; }
    const ZqContext& zq() const { return zq_; }
    int N() const { return N_; }
    int O() const { return O_; }
    std::size_t slots() const { return slots_; }
    std::int64_t den() const { return prm_.d; }
    const std::vector<std::vector<PiSeries>>& matrix() const { return m_; }
    const PiSeries& entry(int w, int i) const { return m_[w][i]; }

    /// gamma coefficients with lambda_hat^{p^l} (the sigma^l twist).
    GammaCoeffs gamma(std::int64_t l, std::int64_t n_max, std::int64_t order) const
    {
        ZqElem lh = lambda_hat_;
        for (std::int64_t i = 0; i < l; ++i) {
            lh = zq_.pow(lh, static_cast<std::uint64_t>(prm_.p));
        }
        return ef_coeffs(zq_, prm_, lh, n_max, order);
    }

private:
    void build()
    {
        const std::int64_t q = prm_.q;
        const std::int64_t d = prm_.d;
        const std::int64_t O_F = O_ + (N_ - 1 + d - 1) / d;
        const std::size_t slots_F = static_cast<std::size_t>(O_F * d);
        const std::int64_t nF_max = q * (N_ - 1) + prm_.u;
        // gamma_n vanishes to order O_F once n >= d O_F.
        const std::int64_t g_max = std::min<std::int64_t>(nF_max, d * O_F);
        std::map<std::int64_t, PiSeries> F;
        {
            const GammaCoeffs g0 = gamma(0, g_max, O_F);
            for (std::int64_t n = 0; n <= g_max; ++n) {
                if (!pi_is_zero(zq_, g0[n])) {
                    F.emplace(n, g0[n]);
                }
            }
        }
        std::int64_t pl = 1;
        for (std::int64_t l = 1; l < prm_.a; ++l) {
            pl *= prm_.p;
            const GammaCoeffs gl = gamma(l, std::min<std::int64_t>(g_max, nF_max / pl), O_F);
            std::map<std::int64_t, PiSeries> next;
            for (const auto& [n0, s0] : F) {
                for (std::int64_t n1 = 0; n1 < static_cast<std::int64_t>(gl.size()) && n0 + pl * n1 <= nF_max; ++n1) {
                    if (pi_is_zero(zq_, gl[n1])) {
                        continue;
                    }
                    auto it = next.try_emplace(n0 + pl * n1, pi_zero(slots_F)).first;
                    pi_mul_add(zq_, it->second, s0, gl[n1]);
                }
            }
            F = std::move(next);
        }
        m_.assign(static_cast<std::size_t>(N_), std::vector<PiSeries>(static_cast<std::size_t>(N_), pi_zero(slots_)));
        for (int w = 0; w < N_; ++w) {
            for (int i = 0; i < N_; ++i) {
                const std::int64_t n = q * w - i + prm_.u;
                const auto it = F.find(n);
                if (n < 0 || it == F.end()) {
                    continue;
                }
                m_[w][i] = pi_shift(zq_, it->second, i - w, slots_);
            }
        }
    }

    Params prm_;
    int N_;
    int O_;
    ZqContext zq_;
    std::size_t slots_ = 0;
    ZqElem lambda_hat_;
    std::vector<std::vector<PiSeries>> m_;
};

/// Polynomials in s of degree <= n with PiSeries coefficients.
using SPoly = std::vector<PiSeries>;

inline SPoly spoly_mul(const ZqContext& zq, const SPoly& x, const SPoly& y, std::size_t slots)
{
    const std::size_t n = x.size();
    SPoly r(n, pi_zero(slots));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; i + j < n; ++j) {
            pi_mul_add(zq, r[i + j], x[i], y[j]);
        }
    }
    return r;
}

/// Inverse of 1 + s Q modulo s^{n}.
inline SPoly spoly_unit_inverse(const ZqContext& zq, const SPoly& x, std::size_t slots)
{
    const std::size_t n = x.size();
    // t = 1 - x has no constant term; 1/x = sum_i t^i.
    SPoly t(n, pi_zero(slots));
    for (std::size_t i = 1; i < n; ++i) {
        t[i] = pi_neg(zq, x[i]);
    }
    if (!(x[0].c == pi_one(zq, slots).c)) {
        throw internal_error("spoly_unit_inverse: constant term is not 1");
    }
    SPoly r(n, pi_zero(slots));
    r[0] = pi_one(zq, slots);
    SPoly pw = r;
    for (std::size_t i = 1; i < n; ++i) {
        pw = spoly_mul(zq, pw, t, slots);
        for (std::size_t k = 0; k < n; ++k) {
            pi_add_to(zq, r[k], pw[k]);
        }
    }
    return r;
}

/// Coefficients c_0 .. c_{n_max} of det(1 - M s) by elimination over
/// R[s]/(s^{n_max+1}); every pivot is 1 mod s so no division in R occurs.
inline std::vector<PiSeries> char_series_elimination(const DworkOperator& op, int n_max)
{
    const ZqContext& zq = op.zq();
    const std::size_t L = op.slots();
    const int N = op.N();
    const std::size_t len = static_cast<std::size_t>(n_max + 1);
    std::vector<std::vector<SPoly>> A(N, std::vector<SPoly>(N, SPoly(len, pi_zero(L))));
    for (int r = 0; r < N; ++r) {
        for (int c = 0; c < N; ++c) {
            if (len > 1) {
                A[r][c][1] = pi_neg(zq, op.entry(r, c));
            }
        }
        A[r][r][0] = pi_one(zq, L);
    }
    auto is_zero_poly = [&](const SPoly& f) {
        for (const auto& s : f) {
            if (!pi_is_zero(zq, s)) {
                return false;
            }
        }
        return true;
    };
    SPoly det(len, pi_zero(L));
    det[0] = pi_one(zq, L);
    for (int j = 0; j < N; ++j) {
        det = spoly_mul(zq, det, A[j][j], L);
        const SPoly inv = spoly_unit_inverse(zq, A[j][j], L);
        for (int r = j + 1; r < N; ++r) {
            if (is_zero_poly(A[r][j])) {
                continue;
            }
            const SPoly f = spoly_mul(zq, A[r][j], inv, L);
            for (int c = j + 1; c < N; ++c) {
                if (is_zero_poly(A[j][c])) {
                    continue;
                }
                const SPoly upd = spoly_mul(zq, f, A[j][c], L);
                for (std::size_t k = 0; k < len; ++k) {
                    A[r][c][k] = pi_sub(zq, A[r][c][k], upd[k]);
                }
            }
        }
    }
    return det;
}

/// Tr(M^k) for k = 1 .. k_max.
inline std::vector<PiSeries> operator_traces(const DworkOperator& op, int k_max)
{
    const ZqContext& zq = op.zq();
    const std::size_t L = op.slots();
    const int N = op.N();
    std::vector<PiSeries> out{pi_zero(L)};
    std::vector<std::vector<PiSeries>> pw = op.matrix();
    for (int k = 1; k <= k_max; ++k) {
        PiSeries tr = pi_zero(L);
        for (int i = 0; i < N; ++i) {
            pi_add_to(zq, tr, pw[i][i]);
        }
        out.push_back(std::move(tr));
        if (k == k_max) {
            break;
        }
        std::vector<std::vector<PiSeries>> next(N, std::vector<PiSeries>(N, pi_zero(L)));
        for (int i = 0; i < N; ++i) {
            for (int l = 0; l < N; ++l) {
                if (pi_is_zero(zq, pw[i][l])) {
                    continue;
                }
                for (int j = 0; j < N; ++j) {
                    pi_mul_add(zq, next[i][j], pw[i][l], op.entry(l, j));
                }
            }
        }
        pw = std::move(next);
    }
    return out;
}

/// Coefficients of det(1 - M s) from traces: n c_n = -sum_k Tr(M^k) c_{n-k}.
inline std::vector<PiSeries> char_series_traces(const DworkOperator& op, int n_max)
{
    const ZqContext& zq = op.zq();
    const std::size_t L = op.slots();
    if (n_max >= op.params().p) {
        throw domain_error("char_series_traces: n_max must be below p");
    }
    const auto tr = operator_traces(op, n_max);
    std::vector<PiSeries> c{pi_one(zq, L)};
    for (int n = 1; n <= n_max; ++n) {
        PiSeries acc = pi_zero(L);
        for (int k = 1; k <= n; ++k) {
            pi_mul_add(zq, acc, tr[k], c[n - k]);
        }
        ZqElem inv;
        inv.c[0] = zq.inverse_int(n);
        c.push_back(pi_neg(zq, pi_scale(zq, acc, inv)));
    }
    return c;
}

struct NPTResult {
    std::vector<PiSeries> coeffs;
    std::vector<Valuation> orders; // ord_pi(c_n) in pi-units
    Polygon polygon;
    TruncationVerdict certificate;
};

/// ord_pi of each coefficient; fractional-exponent slots must vanish.
inline std::vector<Valuation> series_orders(const DworkOperator& op, const std::vector<PiSeries>& coeffs)
{
    std::vector<Valuation> out;
    for (const auto& c : coeffs) {
        for (std::size_t k = 0; k < c.c.size(); ++k) {
            if (k % static_cast<std::size_t>(op.den()) != 0 && !op.zq().is_zero(c.c[k])) {
                throw internal_error("char series has a fractional pi-exponent");
            }
        }
        const auto o = pi_order(op.zq(), c);
        if (o) {
            out.push_back(Valuation{true, make_rat(static_cast<std::int64_t>(*o), op.den())});
        } else {
            out.push_back(Valuation::at_least(ExactRat(op.O())));
        }
    }
    return out;
}

/// NP_{u,T} on [0, n_max]: hull of (n, ord_pi(c_n) / (a (p - 1))).
inline NPTResult np_T(const Params& prm, int N, int O, int n_max, int M = 0, bool check_paths = true)
{
    NPTResult res;
    res.certificate = truncation_certificate(prm, N, O, n_max);
    if (!res.certificate.ok) {
        throw truncation_error("np_T: truncation certificate failed", res.certificate.suggested_N,
                               res.certificate.suggested_O);
    }
    const DworkOperator op(prm, N, O, M > 0 ? M : default_precision(prm.p, prm.a, prm.d));
    res.coeffs = char_series_elimination(op, n_max);
    if (check_paths && n_max < prm.p) {
        const auto alt = char_series_traces(op, n_max);
        for (int n = 0; n <= n_max; ++n) {
            if (!(alt[n].c == res.coeffs[n].c)) {
                throw internal_error("np_T: elimination and trace paths disagree");
            }
        }
    }
    res.orders = series_orders(op, res.coeffs);
    std::vector<Valuation> scaled;
    for (const auto& v : res.orders) {
        scaled.push_back(Valuation{v.certified, v.value / (prm.p - 1)});
    }
    res.polygon = newton_polygon_from_valuations(scaled, prm.a);
    return res;
}

/// Default (N, O) for a target n_max: O = ceil(a(p-1)P(n_max)) + 2 and the
/// smallest N the certificate accepts.
inline std::pair<int, int> default_truncation(const Params& prm, int n_max)
{
    const TruncationVerdict v = truncation_certificate(prm, n_max, 1, n_max);
    return {v.suggested_N, v.suggested_O};
}

struct TraceReport {
    bool ok = true;
    int limit = 0;                  // pi-order up to which agreement is certified
    std::vector<int> agreement;     // per k: first disagreeing pi-order, or limit
    std::vector<std::string> notes;
};

/// Compares S_k(T) with (q^k - 1) Tr(M^k) after substituting T = E(pi) - 1.
/// At pi-order m the comparison is taken mod p^{min_{j <= m} prec_j}.
inline TraceReport trace_consistency(const DworkOperator& op, const SumEngine& eng, int k_max, int J)
{
    const Params& prm = op.params();
    const ZqContext& zq = op.zq();
    if (zq.precision() != eng.base().precision()) {
        throw domain_error("trace_consistency: operator and engine precisions differ");
    }
    const std::size_t L = op.slots();
    const std::int64_t den = op.den();
    const int O = op.O();
    const auto tr = operator_traces(op, k_max);

    TraceReport rep;
    rep.limit = static_cast<int>(std::min<std::int64_t>(
        {static_cast<std::int64_t>(J) + 1, O, (prm.p - 1) * static_cast<std::int64_t>(op.N()) / prm.d}));

    const auto ah = artin_hasse_coeffs(prm.p, O);
    PiSeries T = pi_zero(L);
    for (std::int64_t j = 1; j < O; ++j) {
        T.c[static_cast<std::size_t>(j * den)] = zq.from_rat(ah[j]);
    }
    std::vector<PiSeries> Tpow{pi_one(zq, L)};
    for (int j = 1; j <= J; ++j) {
        Tpow.push_back(pi_mul(zq, Tpow.back(), T, L));
    }
    for (int k = 1; k <= k_max; ++k) {
        const TadicSum s = eng.tadic(k, J, prm.lambda_index);
        PiSeries lhs = pi_zero(L);
        for (int j = 0; j <= J; ++j) {
            pi_add_to(zq, lhs, pi_scale(zq, Tpow[j], s.coeff[j]));
        }
        const PiSeries rhs = pi_scale_int(zq, tr[k], eng.field_size(k) - 1);
        const PiSeries diff = pi_sub(zq, lhs, rhs);
        int agree = rep.limit;
        int min_prec = zq.precision();
        for (int m = 0; m < rep.limit; ++m) {
            if (m <= J) {
                min_prec = std::min(min_prec, s.precision[m]);
            }
            const std::uint64_t pk = static_cast<std::uint64_t>(ipow(prm.p, min_prec));
            bool same = true;
            for (std::int64_t sub = 0; sub < den && same; ++sub) {
                const ZqElem& v = diff.c[static_cast<std::size_t>(m * den + sub)];
                for (int i = 0; i < zq.degree(); ++i) {
                    same = same && v.c[i] % pk == 0;
                }
            }
            if (!same) {
                agree = m;
                break;
            }
        }
        rep.agreement.push_back(agree);
        if (agree < rep.limit) {
            rep.ok = false;
            rep.notes.push_back("k=" + std::to_string(k) + " disagrees at pi-order " + std::to_string(agree));
        }
    }
    return rep;
}

inline TraceReport trace_consistency(const Params& prm, int k_max, int J, int N, int O, int M = 0,
                                     std::int64_t budget = kDefaultBudget)
{
    const int prec = M > 0 ? M : default_precision(prm.p, prm.a, prm.d);
    const DworkOperator op(prm, N, O, prec);
    const SumEngine eng(prm, prec, budget);
    return trace_consistency(op, eng, k_max, J);
}

} // namespace twnp

#endif
