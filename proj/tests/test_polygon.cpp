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

#include <twnp/polygon.hpp>

#include <gtest/gtest.h>

using namespace twnp;

namespace
{

std::vector<Params> grid()
{
    std::vector<Params> out;
    for (std::int64_t d = 2; d <= 6; ++d) {
        for (std::int64_t e = 1; e < d; ++e) {
            if (std::gcd(d, e) != 1) {
                continue;
            }
            for (std::int64_t p = 2; p < 60; ++p) {
                if (!is_prime(p) || d % p == 0) {
                    continue;
                }
                for (std::int64_t c : {1, 2, 3}) {
                    if ((p - 1) % c != 0) {
                        continue;
                    }
                    out.push_back(make_params(p, 1, d, e, c, 1));
                }
            }
        }
    }
    return out;
}

} // namespace

TEST(Params, Derived)
{
    const Params a = make_params(11, 2, 3, 2, 3, 1);
    EXPECT_EQ(a.q, 121);
    EXPECT_EQ(a.u, 40);
    EXPECT_EQ(a.b, 2);
    EXPECT_EQ(a.digits, (std::vector<std::int64_t>{7, 3}));
    const Params triv = make_params(11, 1, 3, 2, 1, 1);
    EXPECT_EQ(triv.u, 0);
    EXPECT_THROW(make_params(12, 1, 3, 2), domain_error);
    EXPECT_THROW(make_params(11, 1, 4, 2), domain_error);
    EXPECT_THROW(make_params(3, 1, 3, 2), domain_error);
    EXPECT_THROW(make_params(11, 1, 3, 2, 3, 1), domain_error); // 3 does not divide 10
    EXPECT_THROW(make_params(11, 1, 3, 2, 5, 5), domain_error);
    EXPECT_THROW(make_params(11, 1, 3, 2, 1, 0, 10), domain_error);
}

TEST(Hodge, Examples)
{
    const Polygon h = hodge_polygon(make_params(13, 1, 3, 2), 6);
    EXPECT_EQ(h.slopes(), (std::vector<ExactRat>{0, make_rat(1, 3), make_rat(2, 3), 1, make_rat(4, 3),
                                                  make_rat(5, 3)}));
    const Polygon t = hodge_polygon(make_params(11, 1, 3, 1, 2, 1), 4);
    EXPECT_EQ(t.slope(0), make_rat(1, 6));
    EXPECT_EQ(t.slope(3), t.slope(0) + 1);
}

TEST(LowerBound, AnchorP11)
{
    const Polygon P = lower_bound_polygon(make_params(11, 1, 3, 2), 3);
    EXPECT_EQ(P.values(), (std::vector<ExactRat>{0, 0, make_rat(2, 5), 1}));
    EXPECT_EQ(P.slopes(), (std::vector<ExactRat>{0, make_rat(2, 5), make_rat(3, 5)}));
}

TEST(LowerBound, AgreesWithHodgeOnMultiplesOfD)
{
    for (const auto& prm : grid()) {
        const std::int64_t n_max = 3 * prm.d;
        const Polygon P = lower_bound_polygon(prm, n_max);
        const Polygon H = hodge_polygon(prm, n_max);
        EXPECT_TRUE(lies_above(P, H).holds);
        for (std::int64_t n = 0; n <= n_max; n += prm.d) {
            EXPECT_EQ(P.value(n), H.value(n));
        }
    }
}

TEST(LowerBound, SlopePeriodicityMonotonicityAndGap)
{
    for (const auto& prm : grid()) {
        const std::int64_t d = prm.d;
        const Polygon P = lower_bound_polygon(prm, 3 * d + 1);
        const Polygon H = hodge_polygon(prm, 3 * d + 1);
        for (std::int64_t n = 0; n + d < 3 * d + 1; ++n) {
            EXPECT_EQ(P.slope(n + d), P.slope(n) + 1);
        }
        if (prm.p > (d - prm.e) * (2 * d - 1)) {
            EXPECT_TRUE(P.is_convex()) << prm.p << " " << d << " " << prm.e << " " << prm.c;
        }
        for (std::int64_t n = 0; n <= 3 * d + 1; ++n) {
            EXPECT_LE(P.value(n) - H.value(n), make_rat((d - prm.e) * min_residue(n, d) * (d - 1), d * (prm.p - 1)));
        }
    }
}

TEST(LowerBound, EqualsHodgeWhenPIsOneModD)
{
    for (std::int64_t d : {3, 4, 5}) {
        for (std::int64_t p : {31, 41, 61}) {
            if (p % d != 1) {
                continue;
            }
            for (std::int64_t e = 1; e < d; ++e) {
                if (std::gcd(d, e) == 1) {
                    const Params prm = make_params(p, 1, d, e);
                    EXPECT_EQ(lower_bound_polygon(prm, 2 * d), hodge_polygon(prm, 2 * d));
                }
            }
        }
    }
}

TEST(Hull, Examples)
{
    const Polygon h = lower_convex_hull(std::vector<ExactRat>{0, 1, 1});
    EXPECT_EQ(h.values(), (std::vector<ExactRat>{0, make_rat(1, 2), 1}));
    EXPECT_EQ(h.corners().size(), 2u);
    const Polygon g = lower_convex_hull(std::vector<std::optional<ExactRat>>{ExactRat(0), std::nullopt, ExactRat(1)});
    EXPECT_EQ(g.values(), (std::vector<ExactRat>{0, make_rat(1, 2), 1}));
    const Polygon c = lower_convex_hull(std::vector<ExactRat>{0, 1, 2, 3});
    EXPECT_EQ(c.corners().size(), 2u);
    const Polygon tail =
        lower_convex_hull(std::vector<std::optional<ExactRat>>{ExactRat(0), ExactRat(1), std::nullopt});
    EXPECT_EQ(tail.size(), 2u);
    EXPECT_THROW(lower_convex_hull(std::vector<std::optional<ExactRat>>{}), domain_error);
}

TEST(Hull, IsConvexAndBelowPoints)
{
    std::vector<ExactRat> pts{0, make_rat(3, 2), make_rat(1, 2), 4, 2, 7, make_rat(13, 2)};
    const Polygon h = lower_convex_hull(pts);
    EXPECT_TRUE(h.is_convex());
    for (std::size_t n = 0; n < pts.size(); ++n) {
        EXPECT_LE(h.value(n), pts[n]);
    }
    EXPECT_EQ(h.value(0), pts[0]);
    EXPECT_EQ(h.value(6), pts[6]);
}

TEST(LiesAbove, Verdicts)
{
    const Polygon P = lower_bound_polygon(make_params(11, 1, 3, 2), 3);
    EXPECT_TRUE(lies_above(P, P).holds);
    const Polygon H = hodge_polygon(make_params(11, 1, 3, 2), 3);
    EXPECT_TRUE(lies_above(P, H).holds);
    const auto v = lies_above(H, P);
    EXPECT_FALSE(v.holds);
    EXPECT_EQ(v.index, 2);
    EXPECT_EQ(v.upper_value, make_rat(1, 3));
    EXPECT_EQ(v.lower_value, make_rat(2, 5));
}
