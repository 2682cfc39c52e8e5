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


#include <twnp/dwork.hpp>
#include <twnp/hasse.hpp>

#include <gtest/gtest.h>

using namespace twnp;

namespace
{

Params p11() { return make_params(11, 1, 3, 2); }
Params b2_case() { return make_params(11, 2, 3, 2, 3, 1); }

std::int64_t slot_order(const ZqContext& zq, const PiSeries& x)
{
    const auto o = pi_order(zq, x);
    return o ? static_cast<std::int64_t>(*o) : -1;
}

/// min over n = n_0 + p n_1 + ... + p^{a-1} n_{a-1} of sum phi(n_l).
ExtNat phi_tower(std::int64_t n, std::int64_t p, std::int64_t a, std::int64_t d, std::int64_t e)
{
    if (a == 1) {
        return min_phi(n, d, e);
    }
    ExtNat best;
    for (std::int64_t m = 0; p * m <= n; ++m) {
        const ExtNat x = min_phi(n - p * m, d, e);
        const ExtNat y = phi_tower(m, p, a - 1, d, e);
        if (x && y && (!best || *x + *y < *best)) {
            best = *x + *y;
        }
    }
    return best;
}

} // namespace

TEST(Gamma, LowCoefficients)
{
    const Params prm = p11();
    const ZqContext zq(prm.p, 1, 8);
    const GammaCoeffs g = ef_coeffs(zq, prm, zq.one(), 10, 6);
    EXPECT_EQ(g[0].c, pi_one(zq, g[0].slots()).c);
    EXPECT_EQ(slot_order(zq, g[3]), 3);
    EXPECT_EQ(g[3].c[3], zq.one());
    EXPECT_EQ(slot_order(zq, g[1]), -1);
}

TEST(Gamma, OrderIsPhi)
{
    for (auto [p, d, e, lam] : {std::tuple{11, 3, 2, 0}, {7, 4, 1, 3}, {13, 5, 2, 5}}) {
        const Params prm = make_params(p, 1, d, e, 1, 0, lam);
        const ZqContext zq(p, 1, 8);
        const ZqElem lh = zq.pow(zq.teichmuller(zq.residue_field().generator()), static_cast<std::uint64_t>(lam));
        const std::int64_t O = 8;
        const GammaCoeffs g = ef_coeffs(zq, prm, lh, 60, O);
        for (std::int64_t n = 0; n <= 60; ++n) {
            const ExtNat ph = min_phi(n, d, e);
            if (!ph || *ph >= O) {
                EXPECT_EQ(slot_order(zq, g[n]), -1) << p << " n=" << n;
            } else {
                EXPECT_EQ(slot_order(zq, g[n]), *ph * d) << p << " n=" << n;
            }
        }
    }
}

TEST(Matrix, EntryOrdersAndRowDecay)
{
    for (const Params& prm : {p11(), b2_case(), make_params(13, 1, 3, 1, 2, 1)}) {
        const auto [N, O] = default_truncation(prm, 3);
        const DworkOperator op(prm, N, O, 8);
        for (int w = 0; w < N; ++w) {
            for (int i = 0; i < N; ++i) {
                const auto o = pi_order(op.zq(), op.entry(w, i));
                const ExtNat ph = phi_tower(prm.q * w - i + prm.u, prm.p, prm.a, prm.d, prm.e);
                if (!ph) {
                    EXPECT_FALSE(o.has_value());
                    continue;
                }
                const ExactRat sym = make_rat(i - w, prm.d) + ExactRat(*ph);
                EXPECT_GE(sym, 0);
                EXPECT_GE(sym, make_rat((prm.p - 1) * w, prm.d));
                if (o) {
                    EXPECT_GE(make_rat(static_cast<std::int64_t>(*o), prm.d), sym) << w << " " << i;
                }
            }
        }
    }
}

TEST(Matrix, OneStepEntryBound)
{
    EXPECT_EQ(*entry_valuation_bound(p11(), 0, 0, 1), 0);
    for (const Params& prm : {p11(), make_params(7, 1, 3, 2), make_params(13, 1, 3, 1, 2, 1)}) {
        const DworkOperator op(prm, 6, 12, 8);
        for (int w = 0; w < 6; ++w) {
            for (int i = 0; i < 6; ++i) {
                const auto bound = entry_valuation_bound(prm, w, i, 1);
                const auto o = pi_order(op.zq(), op.entry(w, i));
                if (!bound) {
                    EXPECT_FALSE(o.has_value());
                } else if (*bound < op.O()) {
                    ASSERT_TRUE(o.has_value()) << w << " " << i;
                    EXPECT_EQ(make_rat(static_cast<std::int64_t>(*o), prm.d), *bound);
                }
            }
        }
    }
}

TEST(Matrix, TwistedExponents)
{
    const Params prm = b2_case();
    EXPECT_EQ(twisted_exponent(prm, 0), 40);
    EXPECT_EQ(twisted_exponent(prm, 1), 80);
    EXPECT_EQ(twisted_exponent(prm, 2), 40);
    // s_{b-k} = u_k + u_{k+1} p with digits (7, 3).
    EXPECT_EQ(twisted_exponent(prm, 1), 3 + 7 * 11);
}

TEST(CharSeries, PathsAgree)
{
    for (const Params& prm : {p11(), b2_case(), make_params(7, 1, 3, 2), make_params(13, 1, 4, 1, 2, 1)}) {
        const auto [N, O] = default_truncation(prm, 4);
        const DworkOperator op(prm, N, O, 8);
        const auto A = char_series_elimination(op, 4);
        const auto B = char_series_traces(op, 4);
        ASSERT_EQ(A.size(), 5U);
        for (int n = 0; n <= 4; ++n) {
            EXPECT_EQ(A[n].c, B[n].c) << prm.p << " n=" << n;
        }
        EXPECT_EQ(A[0].c, pi_one(op.zq(), op.slots()).c);
        EXPECT_EQ(A[1].c, pi_neg(op.zq(), operator_traces(op, 1)[1]).c);
    }
}

TEST(NPT, AnchorP11)
{
    const Params prm = p11();
    const auto [N, O] = default_truncation(prm, 3);
    EXPECT_EQ(N, 4);
    EXPECT_EQ(O, 12);
    const NPTResult r = np_T(prm, N, O, 3);
    EXPECT_EQ(r.polygon.slopes(), (std::vector<ExactRat>{0, make_rat(2, 5), make_rat(3, 5)}));
    EXPECT_EQ(r.polygon, lower_bound_polygon(prm, 3));
}

TEST(NPT, DoublingIsBitIdentical)
{
    for (const Params& prm : {p11(), b2_case()}) {
        const auto [N, O] = default_truncation(prm, 3);
        const NPTResult r1 = np_T(prm, N, O, 3);
        const NPTResult r2 = np_T(prm, 2 * N, O, 3);
        for (int n = 0; n <= 3; ++n) {
            EXPECT_EQ(r1.coeffs[n].c, r2.coeffs[n].c);
        }
        EXPECT_EQ(r1.polygon, r2.polygon);
    }
}

TEST(NPT, AggregateLowerBound)
{
    for (const Params& prm : {p11(), b2_case(), make_params(7, 1, 3, 2), make_params(17, 1, 4, 1),
                              make_params(13, 1, 3, 1, 2, 1), make_params(19, 1, 5, 2)}) {
        const int n_max = static_cast<int>(std::min<std::int64_t>(prm.d + 1, prm.p - 1));
        const auto [N, O] = default_truncation(prm, n_max);
        const NPTResult r = np_T(prm, N, O, n_max);
        const Polygon P = lower_bound_polygon(prm, n_max);
        for (int n = 0; n <= n_max; ++n) {
            EXPECT_GE(r.orders[n].value, ExactRat(prm.a * (prm.p - 1)) * P.value(n)) << prm.p << " n=" << n;
        }
    }
}

TEST(NPT, SandwichedBetweenBoundAndClassical)
{
    for (const Params& prm : {p11(), make_params(7, 1, 3, 2), make_params(13, 1, 3, 1, 2, 1),
                              make_params(17, 1, 4, 1), make_params(11, 1, 3, 2, 1, 0, 4)}) {
        const auto [N, O] = default_truncation(prm, static_cast<int>(prm.d));
        const NPTResult r = np_T(prm, N, O, static_cast<int>(prm.d));
        const Polygon classical = newton_polygon_classical(prm, kDefaultBudget);
        EXPECT_TRUE(lies_above(r.polygon, lower_bound_polygon(prm, prm.d)).holds);
        EXPECT_TRUE(lies_above(classical, r.polygon).holds);
    }
}

TEST(NPT, HodgeWhenPIsOneModD)
{
    for (auto [p, d, e] : {std::tuple{7, 3, 2}, {13, 4, 1}, {11, 5, 3}}) {
        const Params prm = make_params(p, 1, d, e);
        const auto [N, O] = default_truncation(prm, d);
        EXPECT_EQ(np_T(prm, N, O, d).polygon, hodge_polygon(prm, d)) << p;
    }
}

TEST(Trace, AgreesP11)
{
    const Params prm = p11();
    const auto [N, O] = default_truncation(prm, 3);
    const TraceReport rep = trace_consistency(prm, 3, O, N, O);
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.limit, O);
    EXPECT_EQ(rep.agreement, (std::vector<int>{O, O, O}));
}

TEST(Trace, AgreesTwisted)
{
    const Params prm = b2_case();
    const auto [N, O] = default_truncation(prm, 3);
    const TraceReport rep = trace_consistency(prm, 2, O, N, O);
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.limit, O);
}

TEST(Trace, DetectsMismatchedOperator)
{
    const Params twisted = make_params(13, 1, 3, 1, 2, 1);
    const Params plain = make_params(13, 1, 3, 1);
    const DworkOperator op(twisted, 8, 16, 8);
    const SumEngine eng(plain, 8, kDefaultBudget);
    const TraceReport rep = trace_consistency(op, eng, 2, 16);
    EXPECT_FALSE(rep.ok);
    EXPECT_FALSE(rep.notes.empty());
}

TEST(Certificate, Failures)
{
    const Params prm = p11();
    EXPECT_TRUE(truncation_certificate(prm, 4, 12, 3).ok);
    const TruncationVerdict small_n = truncation_certificate(prm, 3, 12, 3);
    EXPECT_FALSE(small_n.ok);
    EXPECT_TRUE(truncation_certificate(prm, small_n.suggested_N, small_n.suggested_O, 3).ok);
    const TruncationVerdict small_o = truncation_certificate(prm, 4, 10, 3);
    EXPECT_FALSE(small_o.ok);
    EXPECT_TRUE(truncation_certificate(prm, small_o.suggested_N, small_o.suggested_O, 3).ok);
    EXPECT_FALSE(truncation_certificate(prm, 2, 4, 3).ok);
    EXPECT_THROW(np_T(prm, 3, 12, 3), truncation_error);
}
