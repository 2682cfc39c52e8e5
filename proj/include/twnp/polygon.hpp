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

#ifndef TWNP_POLYGON_HPP
#define TWNP_POLYGON_HPP

#include <twnp/arith.hpp>
#include <twnp/combinatorics.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace twnp
{

/// Parameter tuple (p, a, d, e, c, mu, lambda) of f = x^d + lambda x^e over
/// F_q with the twist u = (q - 1) mu / c.  lambda is a discrete log with
/// respect to the generator chosen by the residue-field context.
struct Params {
    std::int64_t p = 0;
    std::int64_t a = 1;
    std::int64_t d = 0;
    std::int64_t e = 0;
    std::int64_t c = 1;
    std::int64_t mu = 0;
    std::int64_t lambda_index = 0;

    std::int64_t q = 0;
    std::int64_t u = 0;
    std::int64_t b = 1;
    std::vector<std::int64_t> digits; // u_0 .. u_{a-1}

    /// u_k with k taken modulo b.
    std::int64_t digit(std::int64_t k) const { return digits[static_cast<std::size_t>(min_residue(k, b))]; }

    std::int64_t digit_sum() const
    {
        std::int64_t s = 0;
        for (std::int64_t k = 0; k < b; ++k) {
            s += digit(k);
        }
        return s;
    }
};

/// Largest q accepted by make_params.
inline constexpr std::int64_t kMaxFieldSize = std::int64_t{1} << 40;

inline Params make_params(std::int64_t p, std::int64_t a, std::int64_t d, std::int64_t e, std::int64_t c = 1,
                          std::int64_t mu = 0, std::int64_t lambda_index = 0)
{
    if (!is_prime(p)) {
        throw domain_error("make_params: p must be prime");
    }
    if (a < 1) {
        throw domain_error("make_params: a must be >= 1");
    }
    if (!(d > e && e >= 1) || std::gcd(d, e) != 1) {
        throw domain_error("make_params: need d > e >= 1 with gcd(d, e) = 1");
    }
    if (d % p == 0) {
        throw domain_error("make_params: p must not divide d");
    }
    if (c < 1) {
        throw domain_error("make_params: c must be >= 1");
    }
    Params prm;
    prm.p = p;
    prm.a = a;
    prm.d = d;
    prm.e = e;
    prm.c = c;
    prm.mu = mu;
    std::int64_t q = 1;
    for (std::int64_t i = 0; i < a; ++i) {
        if (q > kMaxFieldSize / p) {
            throw domain_error("make_params: q = p^a too large");
        }
        q *= p;
    }
    prm.q = q;
    if ((q - 1) % c != 0) {
        throw domain_error("make_params: c must divide q - 1");
    }
    if (std::gcd(min_residue(mu, c), c) != 1) {
        throw domain_error("make_params: gcd(mu, c) must be 1");
    }
    prm.b = multiplicative_order(min_residue(p, c), c);
    if (a % prm.b != 0) {
        throw domain_error("make_params: b must divide a");
    }
    if (lambda_index < 0 || lambda_index >= q - 1) {
        throw domain_error("make_params: lambda index must lie in [0, q - 2]");
    }
    prm.lambda_index = lambda_index;
    prm.u = (q - 1) / c * min_residue(mu, c) % (q - 1);
    std::int64_t rest = prm.u;
    for (std::int64_t i = 0; i < a; ++i) {
        prm.digits.push_back(rest % p);
        rest /= p;
    }
    for (std::int64_t i = prm.b; i < a; ++i) {
        if (prm.digits[i] != prm.digits[i - prm.b]) {
            throw internal_error("make_params: base-p digits of u are not b-periodic");
        }
    }
    return prm;
}

/// Piecewise-linear polygon stored by its value at every integer index
/// 0 .. size() - 1.
class Polygon
{
public:
    Polygon() = default;
    explicit Polygon(std::vector<ExactRat> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    std::int64_t last_index() const { return static_cast<std::int64_t>(values_.size()) - 1; }

    const ExactRat& value(std::int64_t n) const { return values_.at(static_cast<std::size_t>(n)); }
    const std::vector<ExactRat>& values() const { return values_; }

    /// Slope on [n, n + 1].
    ExactRat slope(std::int64_t n) const { return value(n + 1) - value(n); }

    std::vector<ExactRat> slopes() const
    {
        std::vector<ExactRat> out;
        for (std::int64_t n = 0; n + 1 < static_cast<std::int64_t>(values_.size()); ++n) {
            out.push_back(slope(n));
        }
        return out;
    }

    /// Indices where the slope changes, plus both endpoints.
    std::vector<std::pair<std::int64_t, ExactRat>> corners() const
    {
        std::vector<std::pair<std::int64_t, ExactRat>> out;
        const std::int64_t last = last_index();
        for (std::int64_t n = 0; n <= last; ++n) {
            if (n == 0 || n == last || slope(n - 1) != slope(n)) {
                out.emplace_back(n, value(n));
            }
        }
        return out;
    }

    bool is_convex() const
    {
        for (std::int64_t n = 1; n + 1 <= last_index(); ++n) {
            if (slope(n) < slope(n - 1)) {
                return false;
            }
        }
        return true;
    }

    Polygon truncated(std::int64_t last) const
    {
        std::vector<ExactRat> v(values_.begin(), values_.begin() + std::min<std::int64_t>(last + 1, size()));
        return Polygon(std::move(v));
    }

    friend bool operator==(const Polygon& x, const Polygon& y) { return x.values_ == y.values_; }

private:
    std::vector<ExactRat> values_;
};

/// Lower convex hull of (n, value_n), n = 0 .. points.size() - 1; missing
/// values stand for +infinity.  The hull is evaluated at every integer index
/// up to the last finite point.
inline Polygon lower_convex_hull(const std::vector<std::optional<ExactRat>>& points)
{
    if (points.empty() || !points[0]) {
        throw domain_error("lower_convex_hull: a finite point at index 0 is required");
    }
    std::vector<std::pair<std::int64_t, ExactRat>> hull;
    for (std::int64_t n = 0; n < static_cast<std::int64_t>(points.size()); ++n) {
        if (!points[n]) {
            continue;
        }
        const ExactRat& y = *points[n];
        while (hull.size() >= 2) {
            const auto& [x1, y1] = hull[hull.size() - 2];
            const auto& [x2, y2] = hull[hull.size() - 1];
            // Drop the middle point when it lies on or above the chord.
            const ExactRat lhs = (y2 - y1) * (n - x2);
            const ExactRat rhs = (y - y2) * (x2 - x1);
            if (lhs >= rhs) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.emplace_back(n, y);
    }
    std::vector<ExactRat> values(static_cast<std::size_t>(hull.back().first + 1));
    values[0] = hull[0].second;
    for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
        const auto& [x1, y1] = hull[s];
        const auto& [x2, y2] = hull[s + 1];
        const ExactRat slope = (y2 - y1) / ExactRat(x2 - x1);
        for (std::int64_t n = x1 + 1; n <= x2; ++n) {
            values[n] = y1 + slope * (n - x1);
        }
    }
    return Polygon(std::move(values));
}

inline Polygon lower_convex_hull(const std::vector<ExactRat>& points)
{
    std::vector<std::optional<ExactRat>> pts(points.begin(), points.end());
    return lower_convex_hull(pts);
}

/// Infinity u-twisted Hodge polygon on [0, n_max].
inline Polygon hodge_polygon(const Params& prm, std::int64_t n_max)
{
    const ExactRat twist = make_rat(prm.digit_sum(), prm.b * prm.d * (prm.p - 1));
    std::vector<ExactRat> values{ExactRat(0)};
    for (std::int64_t n = 0; n < n_max; ++n) {
        values.push_back(values.back() + make_rat(n, prm.d) + twist);
    }
    return Polygon(std::move(values));
}

/// P_{u,e,d}(n) for n = 0 .. n_max.
inline Polygon lower_bound_polygon(const Params& prm, std::int64_t n_max)
{
    const std::int64_t den = prm.b * prm.d * (prm.p - 1);
    std::vector<CombInstance> insts;
    for (std::int64_t k = 1; k <= prm.b; ++k) {
        insts.emplace_back(prm.p, prm.d, prm.e, prm.digit(k));
    }
    std::vector<ExactRat> values;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        ExactInt acc = 0;
        for (std::int64_t k = 1; k <= prm.b; ++k) {
            const std::int64_t C = compute_C_value(insts[k - 1], static_cast<int>(n - 1));
            acc += ExactInt(n) * prm.digit(k) + ExactInt(prm.d - prm.e) * C;
        }
        values.push_back(make_rat(n * (n - 1), 2 * prm.d) + ExactRat(acc, ExactInt(den)));
    }
    for (auto& v : values) {
        v.canonicalize();
    }
    return Polygon(std::move(values));
}

struct LiesAboveVerdict {
    bool holds = true;
    std::int64_t index = -1; // first violation
    ExactRat upper_value;
    ExactRat lower_value;
};

/// Does `upper` lie on or above `lower` at every shared index?
inline LiesAboveVerdict lies_above(const Polygon& upper, const Polygon& lower)
{
    LiesAboveVerdict v;
    const std::int64_t last = std::min(upper.last_index(), lower.last_index());
    for (std::int64_t n = 0; n <= last; ++n) {
        if (upper.value(n) < lower.value(n)) {
            v.holds = false;
            v.index = n;
            v.upper_value = upper.value(n);
            v.lower_value = lower.value(n);
            return v;
        }
    }
    return v;
}

/// Equality on the shared index range.
inline bool coincide(const Polygon& x, const Polygon& y)
{
    const std::int64_t last = std::min(x.last_index(), y.last_index());
    for (std::int64_t n = 0; n <= last; ++n) {
        if (x.value(n) != y.value(n)) {
            return false;
        }
    }
    return true;
}

inline std::string slopes_string(const Polygon& poly)
{
    std::string s;
    for (const auto& w : poly.slopes()) {
        if (!s.empty()) {
            s += ' ';
        }
        s += w.get_str();
    }
    return s;
}

} // namespace twnp

#endif
