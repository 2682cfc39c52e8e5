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

#ifndef TWNP_LFUNCTION_HPP
#define TWNP_LFUNCTION_HPP

#include <twnp/arith.hpp>
#include <twnp/ffield.hpp>
#include <twnp/padic.hpp>
#include <twnp/polygon.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace twnp
{

/// Default cap on the number of field elements enumerated for one sum.
inline constexpr std::int64_t kDefaultBudget = 200'000'000;

class budget_exceeded : public std::runtime_error
{
public:
    budget_exceeded(const std::string& what, std::int64_t required)
        : std::runtime_error(what + " (requires " + std::to_string(required) + " elements)"), required_(required)
    {
    }
    std::int64_t required() const { return required_; }

private:
    std::int64_t required_;
};

/// The embedding iota: F_q -> F_{q^k} sending the base generator g_1 to
/// h^{j1}, h = g_K^{(Q-1)/(q-1)}.
struct SubfieldEmbedding {
    FFElem beta;                                  // image of the base Y
    std::int64_t j1 = 0;                          // iota(g_1) = h^{j1}
    std::int64_t norm_log = 0;                    // j1^{-1} mod (q - 1)
    std::unordered_map<std::int64_t, std::int64_t> back; // K-code -> base code

    FFElem image(const FFContext& base, const FFContext& big, const FFElem& x) const
    {
        FFElem r = big.zero();
        FFElem pw = big.one();
        for (int i = 0; i < base.degree(); ++i) {
            r = big.add(r, big.scale(pw, x.c[i]));
            pw = big.mul(pw, beta);
        }
        return r;
    }
};

inline SubfieldEmbedding make_embedding(const FFContext& base, const FFContext& big)
{
    if (big.degree() % base.degree() != 0 || big.p() != base.p()) {
        throw domain_error("make_embedding: degrees are not compatible");
    }
    const std::int64_t q = base.size();
    const std::int64_t Q = big.size();
    const FFElem h = big.pow(big.generator(), (Q - 1) / (q - 1));
    SubfieldEmbedding emb;
    if (base.degree() == 1) {
        emb.beta = big.zero();
    } else {
        FFElem x = big.one();
        bool found = false;
        for (std::int64_t j = 0; j < q - 1; ++j) {
            if (big.is_zero(big.eval(base.modulus(), x))) {
                emb.beta = x;
                found = true;
                break;
            }
            x = big.mul(x, h);
        }
        if (!found) {
            throw internal_error("make_embedding: no root of the base modulus");
        }
    }
    for (std::int64_t v = 0; v < q; ++v) {
        emb.back.emplace(big.encode(emb.image(base, big, base.decode(v))), v);
    }
    const FFElem g1 = emb.image(base, big, base.generator());
    FFElem x = big.one();
    for (std::int64_t j = 0; j < q - 1; ++j) {
        if (x == g1) {
            emb.j1 = j;
            break;
        }
        x = big.mul(x, h);
    }
    emb.norm_log = q == 2 ? 0 : mod_inverse(emb.j1, q - 1);
    return emb;
}

/// Truncated T-adic sum sum_j coeff[j] T^j; coeff[j] is known modulo
/// p^{precision[j]}.
struct TadicSum {
    std::vector<ZqElem> coeff;
    std::vector<int> precision;
};

/// Exponential sums of f = x^d + lambda x^e twisted by omega^{-u}(Nm x).
/// All values live in the base ring Z_q[pi_1] (classical) or Z_q (T-adic).
class SumEngine
{
public:
    SumEngine(const Params& prm, int M, std::int64_t budget = kDefaultBudget)
        : prm_(prm), budget_(budget), base_(std::make_unique<ZqContext>(prm.p, static_cast<int>(prm.a), M)),
          ram_(std::make_unique<RamifiedContext>(*base_))
    {
        if (prm.q >= 65536) {
            throw domain_error("SumEngine: q must be below 65536");
        }
        const FFContext& ff = base_->residue_field();
        omega_g1_ = base_->teichmuller(ff.generator());
        zeta_c_ = base_->pow(omega_g1_, static_cast<std::uint64_t>((prm.q - 1) / prm.c));
        for (std::int64_t v = 0; v < prm.q; ++v) {
            trace_fp_.push_back(ff.trace(ff.decode(v)));
        }
    }

    const Params& params() const { return prm_; }
    const ZqContext& base() const { return *base_; }
    const RamifiedContext& ramified() const { return *ram_; }
    std::int64_t budget() const { return budget_; }

    /// Teichmueller lift of g_1^lambda.
    ZqElem lambda_hat(std::int64_t lambda_index) const
    {
        return base_->pow(omega_g1_, static_cast<std::uint64_t>(lambda_index));
    }

    /// Value of the character omega^{-u}(Nm x) for x = g_K^j, j = r mod c.
    ZqElem character(std::int64_t norm_log, std::int64_t r) const
    {
        const std::int64_t e = min_residue(-min_residue(prm_.mu, prm_.c) * norm_log % prm_.c * r, prm_.c);
        return base_->pow(zeta_c_, static_cast<std::uint64_t>(e));
    }

    std::int64_t field_size(int k) const
    {
        std::int64_t Q = 1;
        for (int i = 0; i < k; ++i) {
            if (Q > (std::int64_t{1} << 50) / prm_.q) {
                return std::int64_t{1} << 50;
            }
            Q *= prm_.q;
        }
        return Q;
    }

    void check_budget(int k) const
    {
        const std::int64_t Q = field_size(k);
        if (Q - 1 > budget_) {
            throw budget_exceeded("sum over F_{q^" + std::to_string(k) + "}", Q - 1);
        }
    }

    /// S_k for every lambda index 0 .. q - 2 from one pass over F_{q^k}^x.
    std::vector<RamifiedElem> classical_all(int k) const
    {
        check_budget(k);
        const FFContext& ff = base_->residue_field();
        const FFContext big(prm_.p, static_cast<int>(prm_.a) * k);
        const SubfieldEmbedding emb = make_embedding(ff, big);
        const std::int64_t Q = big.size();
        const std::int64_t q = prm_.q;
        const std::int64_t p = prm_.p;
        const std::int64_t c = prm_.c;
        const int n = big.degree();
        const int a = ff.degree();

        // tau_i = Tr_{K/F_q}(Y^i) as base elements.
        std::vector<FFElem> tau;
        for (int i = 0; i < n; ++i) {
            FFElem y = big.basis(i), s = big.zero();
            for (int l = 0; l < k; ++l) {
                s = big.add(s, y);
                y = big.pow(y, q);
            }
            const auto it = emb.back.find(big.encode(s));
            if (it == emb.back.end()) {
                throw internal_error("classical_all: relative trace outside the subfield");
            }
            tau.push_back(ff.decode(it->second));
        }
        std::vector<std::uint16_t> trq(static_cast<std::size_t>(Q - 1));
        FFElem x = big.one();
        std::vector<std::uint64_t> acc(static_cast<std::size_t>(a));
        for (std::int64_t m = 0; m < Q - 1; ++m) {
            std::fill(acc.begin(), acc.end(), 0);
            for (int i = 0; i < n; ++i) {
                if (x.c[i] == 0) {
                    continue;
                }
                for (int l = 0; l < a; ++l) {
                    acc[l] += static_cast<std::uint64_t>(x.c[i]) * tau[i].c[l];
                }
            }
            std::int64_t code = 0;
            for (int l = a; l-- > 0;) {
                code = code * p + static_cast<std::int64_t>(acc[l] % static_cast<std::uint64_t>(p));
            }
            trq[m] = static_cast<std::uint16_t>(code);
            x = big.mul_by_generator(x);
        }
        // counts[(r * p + s1) * q + z]
        std::vector<std::int64_t> counts(static_cast<std::size_t>(c * p * q), 0);
        std::int64_t id = 0, ie = 0;
        const std::int64_t d = prm_.d % (Q - 1), e = prm_.e % (Q - 1);
        for (std::int64_t j = 0; j < Q - 1; ++j) {
            const std::int64_t r = j % c;
            const std::int64_t s1 = trace_fp_[trq[id]];
            ++counts[static_cast<std::size_t>((r * p + s1) * q + trq[ie])];
            id += d;
            if (id >= Q - 1) {
                id -= Q - 1;
            }
            ie += e;
            if (ie >= Q - 1) {
                ie -= Q - 1;
            }
        }
        std::vector<ZqElem> chi;
        for (std::int64_t r = 0; r < c; ++r) {
            chi.push_back(character(emb.norm_log, r));
        }
        std::vector<RamifiedElem> out;
        FFElem lam = ff.one();
        std::vector<std::int64_t> tr_lz(static_cast<std::size_t>(q));
        std::vector<std::int64_t> by_s(static_cast<std::size_t>(p));
        for (std::int64_t li = 0; li < q - 1; ++li) {
            for (std::int64_t z = 0; z < q; ++z) {
                tr_lz[z] = trace_fp_[ff.encode(ff.mul(lam, ff.decode(z)))];
            }
            RamifiedElem total = ram_->zero();
            for (std::int64_t r = 0; r < c; ++r) {
                std::fill(by_s.begin(), by_s.end(), 0);
                for (std::int64_t s1 = 0; s1 < p; ++s1) {
                    const std::int64_t* row = &counts[static_cast<std::size_t>((r * p + s1) * q)];
                    for (std::int64_t z = 0; z < q; ++z) {
                        if (row[z] != 0) {
                            by_s[static_cast<std::size_t>((s1 + tr_lz[z]) % p)] += row[z];
                        }
                    }
                }
                RamifiedElem part = ram_->zero();
                for (std::int64_t s = 0; s < p; ++s) {
                    if (by_s[s] != 0) {
                        part = ram_->add(part, ram_->scale_int(ram_->zeta_p_power(s), by_s[s]));
                    }
                }
                total = ram_->add(total, ram_->scale(part, chi[r]));
            }
            out.push_back(std::move(total));
            lam = ff.mul(lam, ff.generator());
        }
        return out;
    }

    RamifiedElem classical(int k, std::int64_t lambda_index) const
    {
        return classical_all(k).at(static_cast<std::size_t>(lambda_index));
    }

    /// S_k computed directly in Z_{q^k}[pi_1]: x^d + lambda x^e is evaluated
    /// in F_{q^k} and the character is a Teichmueller power there.
    RamifiedElem classical_literal(int k, std::int64_t lambda_index, const ZqContext& big_ctx,
                                   const RamifiedContext& big_ram) const
    {
        check_budget(k);
        const FFContext& ff = base_->residue_field();
        const FFContext& big = big_ctx.residue_field();
        if (big.degree() != ff.degree() * k) {
            throw domain_error("classical_literal: context degree mismatch");
        }
        const SubfieldEmbedding emb = make_embedding(ff, big);
        const std::int64_t Q = big.size();
        const std::int64_t p = prm_.p;
        const std::int64_t c = prm_.c;
        const FFElem lam = emb.image(ff, big, ff.pow(ff.generator(), lambda_index));
        const FFElem gd = big.pow(big.generator(), prm_.d), ge = big.pow(big.generator(), prm_.e);
        std::vector<std::int64_t> by(static_cast<std::size_t>(c * p), 0);
        FFElem xd = big.one(), xe = big.one();
        for (std::int64_t j = 0; j < Q - 1; ++j) {
            const std::int64_t s = big.trace(big.add(xd, big.mul(lam, xe)));
            ++by[static_cast<std::size_t>((j % c) * p + s)];
            xd = big.mul(xd, gd);
            xe = big.mul(xe, ge);
        }
        // omega_K(g_K)^{-u (Q-1)/(q-1) j} depends on j mod c.
        const ZqElem wg = big_ctx.teichmuller(big.generator());
        const std::uint64_t step = static_cast<std::uint64_t>(
            min_residue(-static_cast<__int128>(prm_.u) * ((Q - 1) / (prm_.q - 1)) % (Q - 1), Q - 1));
        const ZqElem eta = big_ctx.pow(wg, step);
        RamifiedElem total = big_ram.zero();
        ZqElem chi = big_ctx.one();
        for (std::int64_t r = 0; r < c; ++r) {
            RamifiedElem part = big_ram.zero();
            for (std::int64_t s = 0; s < p; ++s) {
                if (by[r * p + s] != 0) {
                    part = big_ram.add(part, big_ram.scale_int(big_ram.zeta_p_power(s), by[r * p + s]));
                }
            }
            total = big_ram.add(total, big_ram.scale(part, chi));
            chi = big_ctx.mul(chi, eta);
        }
        return total;
    }

    /// Lift of the subfield embedding: the image of the base Y in Z_{q^k}.
    ZqElem lifted_embedding_root(const ZqContext& big_ctx) const
    {
        const FFContext& ff = base_->residue_field();
        if (ff.degree() == 1) {
            return big_ctx.zero();
        }
        const SubfieldEmbedding emb = make_embedding(ff, big_ctx.residue_field());
        std::vector<ZqElem> poly;
        for (auto m : ff.modulus()) {
            poly.push_back(big_ctx.from_int(m));
        }
        return big_ctx.hensel_root(poly, big_ctx.lift(emb.beta));
    }

    /// Image of a base element under the lifted embedding.
    ZqElem embed(const ZqElem& x, const ZqContext& big_ctx, const ZqElem& root) const
    {
        if (base_->degree() == 1) {
            return big_ctx.from_int(static_cast<std::int64_t>(x.c[0] % big_ctx.modulus_pm()));
        }
        ZqElem r = big_ctx.zero();
        for (int i = base_->degree(); i-- > 0;) {
            ZqElem ci;
            ci.c[0] = x.c[i] % big_ctx.modulus_pm();
            r = big_ctx.add(big_ctx.mul(r, root), ci);
        }
        return r;
    }

    /// S_k(T) = sum_x (1 + T)^{t(x)} omega^{-u}(Nm x) truncated after T^J,
    /// with t(x) = Tr(x^d + lambda^ x^e) on Teichmueller lifts.
    TadicSum tadic(int k, int J, std::int64_t lambda_index) const
    {
        check_budget(k);
        const int M = base_->precision();
        const ZqContext big(prm_.p, static_cast<int>(prm_.a) * k, M);
        const FFContext& ff = base_->residue_field();
        const SubfieldEmbedding emb = make_embedding(ff, big.residue_field());
        const std::int64_t Q = big.residue_field().size();
        const std::uint64_t P = big.modulus_pm();
        const ZqElem wg = big.teichmuller(big.residue_field().generator());
        std::vector<std::uint64_t> trw(static_cast<std::size_t>(Q - 1));
        ZqElem w = big.one();
        for (std::int64_t m = 0; m < Q - 1; ++m) {
            trw[m] = big.trace(w);
            w = big.mul(w, wg);
        }
        if (!(w == big.one())) {
            throw internal_error("tadic: Teichmueller generator has the wrong order");
        }
        const std::int64_t L = static_cast<std::int64_t>(static_cast<__int128>((Q - 1) / (prm_.q - 1)) * emb.j1 %
                                                         (Q - 1) * lambda_index % (Q - 1));
        const std::int64_t c = prm_.c;
        std::vector<std::vector<unsigned __int128>> acc(static_cast<std::size_t>(c),
                                                        std::vector<unsigned __int128>(J + 1, 0));
        std::int64_t id = 0, ie = L;
        const std::int64_t d = prm_.d % (Q - 1), e = prm_.e % (Q - 1);
        for (std::int64_t j = 0; j < Q - 1; ++j) {
            const std::uint64_t t = (trw[id] + trw[ie]) % P;
            auto& row = acc[static_cast<std::size_t>(j % c)];
            std::uint64_t ff_val = 1;
            for (int i = 0; i <= J; ++i) {
                row[i] += ff_val;
                if (row[i] >= (static_cast<unsigned __int128>(1) << 126)) {
                    row[i] %= P;
                }
                const std::uint64_t factor = (t + P - static_cast<std::uint64_t>(i) % P) % P;
                ff_val = static_cast<std::uint64_t>(static_cast<unsigned __int128>(ff_val) * factor % P);
            }
            id += d;
            if (id >= Q - 1) {
                id -= Q - 1;
            }
            ie += e;
            if (ie >= Q - 1) {
                ie -= Q - 1;
            }
        }
        TadicSum out;
        for (int i = 0; i <= J; ++i) {
            // Divide by i! = p^v * unit.
            std::int64_t v = 0;
            std::uint64_t unit_mod = 1;
            for (std::int64_t f = 2; f <= i; ++f) {
                std::int64_t g = f;
                while (g % prm_.p == 0) {
                    g /= prm_.p;
                    ++v;
                }
                unit_mod = base_->mulmod(unit_mod, static_cast<std::uint64_t>(g) % base_->modulus_pm());
            }
            if (v >= M) {
                throw precision_error("tadic: j! exhausts the working precision");
            }
            const std::uint64_t pv = static_cast<std::uint64_t>(ipow(prm_.p, v));
            const std::uint64_t unit_inv = base_->inverse_int(static_cast<std::int64_t>(unit_mod));
            ZqElem total = base_->zero();
            for (std::int64_t r = 0; r < c; ++r) {
                const std::uint64_t s = static_cast<std::uint64_t>(acc[r][i] % P);
                if (s % pv != 0) {
                    throw internal_error("tadic: binomial sum not divisible by the p-part of j!");
                }
                const std::uint64_t q_val = base_->mulmod(s / pv, unit_inv);
                total = base_->add(total, base_->scale_u(character(emb.norm_log, r), q_val));
            }
            out.coeff.push_back(total);
            out.precision.push_back(M - static_cast<int>(v));
        }
        return out;
    }

    /// Evaluate a T-adic sum at T = pi_1.
    RamifiedElem specialize(const TadicSum& s) const
    {
        RamifiedElem total = ram_->zero();
        RamifiedElem pw = ram_->one();
        const RamifiedElem pi = ram_->pi_power(1);
        for (const auto& cf : s.coeff) {
            total = ram_->add(total, ram_->scale(pw, cf));
            pw = ram_->mul(pw, pi);
        }
        return total;
    }

private:
    Params prm_;
    std::int64_t budget_;
    std::unique_ptr<ZqContext> base_;
    std::unique_ptr<RamifiedContext> ram_;
    ZqElem omega_g1_;
    ZqElem zeta_c_;
    std::vector<std::int64_t> trace_fp_;
};

struct LFunctionData {
    std::vector<RamifiedElem> S;      // S_1 .. S_d (index 0 unused)
    std::vector<RamifiedElem> coeffs; // l_0 .. l_d
    std::vector<Valuation> valuations;
    Polygon newton_polygon;
};

/// l_0 .. l_D from power sums via n l_n = sum_{k=1}^n S_k l_{n-k}.
inline std::vector<RamifiedElem> power_sums_to_coeffs(const RamifiedContext& R, const std::vector<RamifiedElem>& S,
                                                     int D)
{
    const ZqContext& base = R.base();
    std::vector<RamifiedElem> l{R.one()};
    for (int n = 1; n <= D; ++n) {
        if (n % R.p() == 0) {
            throw domain_error("power_sums_to_coeffs: n divisible by p");
        }
        RamifiedElem acc = R.zero();
        for (int k = 1; k <= n; ++k) {
            acc = R.add(acc, R.mul(S[k], l[n - k]));
        }
        ZqElem inv;
        inv.c[0] = base.inverse_int(n);
        l.push_back(R.scale(acc, inv));
    }
    return l;
}

/// Newton polygon of points (n, v_n / a) where v_n may be an uncertified
/// lower bound.  An uncertified point is dropped only when its bound
/// already lies on or above the hull of the certified points.
inline Polygon newton_polygon_from_valuations(const std::vector<Valuation>& vals, std::int64_t a)
{
    std::vector<std::optional<ExactRat>> pts;
    for (const auto& v : vals) {
        if (v.certified) {
            pts.emplace_back(v.value / a);
        } else {
            pts.emplace_back(std::nullopt);
        }
    }
    if (!pts.back()) {
        throw precision_error("newton polygon: last coefficient not certified; raise the precision");
    }
    Polygon hull = lower_convex_hull(pts);
    for (std::size_t n = 0; n < vals.size(); ++n) {
        if (!vals[n].certified && vals[n].value / a < hull.value(static_cast<std::int64_t>(n))) {
            throw precision_error("newton polygon: coefficient " + std::to_string(n) +
                                  " is zero to working precision below the hull; raise the precision");
        }
    }
    return hull;
}

inline LFunctionData l_polynomial_from_sums(const SumEngine& eng, std::vector<RamifiedElem> S)
{
    const Params& prm = eng.params();
    if (prm.p <= prm.d) {
        throw domain_error("l_polynomial: requires p > d");
    }
    LFunctionData out;
    out.S = std::move(S);
    out.coeffs = power_sums_to_coeffs(eng.ramified(), out.S, static_cast<int>(prm.d));
    for (const auto& l : out.coeffs) {
        out.valuations.push_back(eng.ramified().valuation(l));
    }
    out.newton_polygon = newton_polygon_from_valuations(out.valuations, prm.a);
    return out;
}

/// L-polynomial data for every lambda index, sharing one pass per k.
inline std::vector<LFunctionData> l_polynomials_all_lambda(const SumEngine& eng)
{
    const Params& prm = eng.params();
    std::vector<std::vector<RamifiedElem>> by_k{{}};
    for (int k = 1; k <= prm.d; ++k) {
        by_k.push_back(eng.classical_all(k));
    }
    std::vector<LFunctionData> out;
    for (std::int64_t li = 0; li < prm.q - 1; ++li) {
        std::vector<RamifiedElem> S{eng.ramified().zero()};
        for (int k = 1; k <= prm.d; ++k) {
            S.push_back(by_k[k][li]);
        }
        out.push_back(l_polynomial_from_sums(eng, std::move(S)));
    }
    return out;
}

inline LFunctionData l_polynomial(const SumEngine& eng)
{
    const Params& prm = eng.params();
    std::vector<RamifiedElem> S{eng.ramified().zero()};
    for (int k = 1; k <= prm.d; ++k) {
        S.push_back(eng.classical(k, prm.lambda_index));
    }
    return l_polynomial_from_sums(eng, std::move(S));
}

/// Newton polygon of the L-polynomial on [0, d] at the default precision.
inline Polygon newton_polygon_classical(const Params& prm, std::int64_t budget = kDefaultBudget)
{
    const SumEngine eng(prm, default_precision(prm.p, prm.a, prm.d), budget);
    return l_polynomial(eng).newton_polygon;
}

} // namespace twnp

#endif
