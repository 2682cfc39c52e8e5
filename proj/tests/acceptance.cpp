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


// Acceptance gate: one PASS/FAIL line per criterion.  Exact arithmetic, so
// every comparison is an equality unless it is a certified-order check.

#include <twnp/twnp.hpp>

#include <chrono>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace twnp;

namespace
{

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int g_failures = 0;

template <class F>
void run(int id, const std::string& title, double limit_s, F body)
{
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = Outcome{false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && s > limit_s) {
        o.pass = false;
        o.detail += "; over time limit";
    }
    g_failures += o.pass ? 0 : 1;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " [" << title << "] " << o.detail << " ("
         << s << " s)";
    std::cout << line.str() << std::endl;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n)
{
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p <= n; ++p) {
        if (is_prime(p)) {
            out.push_back(p);
        }
    }
    return out;
}

/// t values covering every residue mod d at both ends of [0, p - 1].
std::vector<std::int64_t> t_sample(std::int64_t p, std::int64_t d)
{
    std::set<std::int64_t> ts;
    for (std::int64_t t = 0; t < 2 * d && t < p; ++t) {
        ts.insert(t);
    }
    for (std::int64_t t = std::max<std::int64_t>(0, p - d); t < p; ++t) {
        ts.insert(t);
    }
    return {ts.begin(), ts.end()};
}

std::vector<CombInstance> combinatorial_grid()
{
    std::vector<CombInstance> out;
    for (std::int64_t d = 2; d <= 6; ++d) {
        for (std::int64_t e = 1; e < d; ++e) {
            if (std::gcd(d, e) != 1) {
                continue;
            }
            for (const auto p : primes_up_to(60)) {
                if (p <= (d - e) * (2 * d - 1)) {
                    continue;
                }
                for (const auto t : t_sample(p, d)) {
                    out.emplace_back(p, d, e, t);
                }
            }
        }
    }
    return out;
}

Outcome criterion1()
{
    std::int64_t checks = 0, bad = 0;
    std::string first;
    auto fail = [&](const std::string& what) {
        if (bad++ == 0) {
            first = what;
        }
    };
    const auto grid = combinatorial_grid();
    for (const auto& inst : grid) {
        const int d = static_cast<int>(inst.d);
        std::vector<std::int64_t> C(2 * d + 2);
        for (int n = -1; n <= 2 * d; ++n) {
            C[n + 1] = compute_C_value(inst, n);
        }
        for (int n = -1; n <= 2 * d; ++n) {
            for (std::int64_t alpha = 0; alpha < d; ++alpha) {
                std::int64_t s = 0;
                for (int i = 0; i <= n; ++i) {
                    s += R_value(inst, i, alpha) + r_value(inst, i, alpha);
                }
                const std::int64_t bf = compute_bfC(inst, n, alpha);
                ++checks;
                if (C[n + 1] != s - inst.d * bf) {
                    fail("identity");
                }
                if (n + d <= 2 * d) {
                    ++checks;
                    if (compute_bfC(inst, n + d, alpha) != d - 1 + bf) {
                        fail("bfC periodicity");
                    }
                }
            }
            if (n + d <= 2 * d) {
                ++checks;
                if (C[n + d + 1] != C[n + 1]) {
                    fail("C periodicity");
                }
            }
        }
        // w(n) = n/d + (t + (d - e)(C_n - C_{n-1})) / (d(p - 1)).
        auto w = [&](int n) -> ExactRat {
            return make_rat(n, inst.d) +
                   make_rat(inst.t + (inst.d - inst.e) * (C[n + 1] - C[n]), inst.d * (inst.p - 1));
        };
        for (int n = 0; n + 1 <= 2 * d; ++n) {
            ++checks;
            if (w(n) > w(n + 1)) {
                fail("slope monotonicity");
            }
        }
    }
    return Outcome{bad == 0, std::to_string(grid.size()) + " instances, " + std::to_string(checks) + " checks, " +
                                 std::to_string(bad) + " failures" + (bad ? " (first: " + first + ")" : "")};
}

Outcome criterion2()
{
    std::int64_t compared = 0, mismatches = 0;
    for (const auto& inst : combinatorial_grid()) {
        for (int n = 0; n + 1 <= 7; ++n) {
            ++compared;
            if (compute_C_value(inst, n) != compute_C_exhaustive(inst, n).value) {
                ++mismatches;
            }
        }
    }
    return Outcome{mismatches == 0,
                   std::to_string(compared) + " C-values compared, " + std::to_string(mismatches) + " mismatches"};
}

/// Records by key, shared by the grid criteria.
std::map<std::string, Json> g_records;

std::vector<Json> evaluate_grid(const GridSpec& g)
{
    SweepOptions opt;
    std::vector<Json> out;
    for (const auto& t : enumerate_grid(g, opt.budget)) {
        const auto keys = tuple_keys(t);
        bool cached = true;
        for (const auto& k : keys) {
            cached = cached && g_records.count(k) != 0;
        }
        if (!cached) {
            for (auto& r : evaluate_tuple(t, opt)) {
                g_records[r["key"].get<std::string>()] = r;
            }
        }
        for (const auto& k : keys) {
            out.push_back(g_records.at(k));
        }
    }
    return out;
}

GridSpec criterion3_grid()
{
    GridSpec g;
    g.ds = {2, 3, 4};
    g.es = {};
    g.cs = {1, 2};
    g.floor = PrimeFloor::e_bound;
    g.primes_per_class = 3;
    g.p_max = 500;
    return g;
}

std::vector<Json> criterion3_records()
{
    std::vector<Json> out;
    for (const std::int64_t d : {2, 3, 4}) {
        GridSpec g = criterion3_grid();
        g.ds = {d};
        g.es = {d - 1};
        for (auto& r : evaluate_grid(g)) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

Outcome criterion3()
{
    const auto recs = criterion3_records();
    std::int64_t equal = 0, other = 0;
    std::set<std::string> tuples;
    for (const auto& r : recs) {
        tuples.insert(r["key"].get<std::string>().substr(0, r["key"].get<std::string>().find(";lambda")));
        if (r["status"] == "ok" && r["equal"].get<bool>()) {
            ++equal;
        } else {
            ++other;
        }
    }
    // Anchor d = 3, e = 2, c = 1, p = 11: slopes from the assignment oracle
    // C_{0,-1..2} = 0, 0, 2, 0 (u = 0).
    const Params anchor = make_params(11, 1, 3, 2);
    const Polygon P = lower_bound_polygon(anchor, 3);
    const std::vector<ExactRat> expected{0, make_rat(2, 5), make_rat(3, 5)};
    ExactRat sum = 0;
    for (const auto& s : P.slopes()) {
        sum += s;
    }
    bool anchor_ok = P.slopes() == expected && sum == 1;
    std::int64_t anchor_records = 0;
    for (const std::int64_t p : {11, 13, 17}) {
        for (std::int64_t li = 0; li < p - 1; ++li) {
            const Json& r = g_records.at(record_key(make_params(p, 1, 3, 2, 1, 1), li));
            anchor_ok = anchor_ok && r["status"] == "ok" && r["equal"].get<bool>();
            if (p == 11) {
                anchor_ok = anchor_ok && r["np_slopes"] == rat_list_json(expected);
            }
            ++anchor_records;
        }
    }
    return Outcome{other == 0 && anchor_ok,
                   std::to_string(tuples.size()) + " tuples, " + std::to_string(recs.size()) + " (tuple, lambda) records, " +
                       std::to_string(equal) + " equal, " + std::to_string(other) + " not equal or not computed; anchor p=11 slopes " +
                       slopes_string(P) + " sum " + rational_string(sum) + ", " + std::to_string(anchor_records) +
                       " anchor records " + (anchor_ok ? "ok" : "FAILED")};
}

Outcome criterion4()
{
    std::vector<Json> recs = criterion3_records();
    auto add = [&](GridSpec g) {
        for (auto& r : evaluate_grid(g)) {
            recs.push_back(std::move(r));
        }
    };
    GridSpec g;
    g.floor = PrimeFloor::hypothesis;
    g.p_max = 500;
    g.ds = {3};
    g.es = {1};
    g.cs = {1, 2};
    g.primes_per_class = 2;
    add(g);
    g.ds = {4};
    g.es = {1};
    g.cs = {1};
    add(g);
    g.ds = {5};
    g.es = {2};
    g.cs = {1};
    g.primes_per_class = 1;
    add(g);
    // Small-field classes with larger c, where p | H does occur.
    GridSpec h;
    h.floor = PrimeFloor::hypothesis;
    h.ds = {3};
    h.es = {2};
    h.cs = {6};
    h.p_max = 13;
    add(h);
    h.ds = {4};
    h.es = {3};
    h.cs = {2, 5, 6};
    h.p_max = 13;
    add(h);

    std::int64_t checked = 0, equal = 0, strict = 0, pdiv = 0, violations = 0, skipped = 0;
    for (const auto& r : recs) {
        if (r["status"] != "ok") {
            ++skipped;
            continue;
        }
        if (!r["hypothesis"].get<bool>()) {
            continue;
        }
        ++checked;
        const bool eq = r["equal"].get<bool>();
        const bool div = r["p_divides_H"].get<bool>();
        pdiv += div ? 1 : 0;
        equal += eq ? 1 : 0;
        if (!eq) {
            // Strictly above: lies above and differs at some n.
            if (r["lies_above"].get<bool>() && r["np_slopes"] != r["P_slopes"]) {
                ++strict;
            } else {
                ++violations;
            }
        }
        if (eq == div) {
            ++violations;
        }
    }
    std::string detail = std::to_string(checked) + " records checked, " + std::to_string(equal) + " equal with p !| H, " +
                         std::to_string(strict) + " strictly above with p | H, " + std::to_string(violations) +
                         " violations, " + std::to_string(skipped) + " not computed (budget)";
    if (pdiv == 0) {
        detail += "; no instance with p | H in this grid";
    }
    return Outcome{violations == 0 && checked > 0, detail};
}

Outcome criterion5()
{
    std::int64_t checked = 0, bad = 0;
    std::string cases;
    for (const std::int64_t d : {3, 4, 5}) {
        int found = 0;
        for (std::int64_t p = d + 1; found < 2; ++p) {
            if (!is_prime(p) || p % d != 1) {
                continue;
            }
            ++found;
            for (std::int64_t e = 1; e < d; ++e) {
                if (std::gcd(d, e) != 1) {
                    continue;
                }
                const Params prm = make_params(p, 1, d, e);
                const Polygon H = hodge_polygon(prm, d);
                std::vector<ExactRat> expected;
                for (std::int64_t i = 0; i < d; ++i) {
                    expected.push_back(make_rat(i, d));
                }
                bad += H.slopes() == expected ? 0 : 1;
                const SumEngine eng(prm, default_precision(p, 1, d));
                for (const auto& data : l_polynomials_all_lambda(eng)) {
                    ++checked;
                    bad += data.newton_polygon == H ? 0 : 1;
                }
                cases += " (d=" + std::to_string(d) + ",p=" + std::to_string(p) + ",e=" + std::to_string(e) + ")";
            }
        }
    }
    return Outcome{bad == 0, std::to_string(checked) + " polygons equal to Hodge, " + std::to_string(bad) +
                                 " mismatches;" + cases};
}

Outcome criterion6()
{
    const Params prm = make_params(11, 1, 3, 2);
    const auto [N, O] = default_truncation(prm, 3);
    const NPTResult r = np_T(prm, N, O, 3);
    const Polygon P = lower_bound_polygon(prm, 3);
    const bool slopes_ok = r.polygon.slopes() == P.slopes();
    const TraceReport tr = trace_consistency(prm, 3, O, N, O);
    const Polygon classical = newton_polygon_classical(prm);
    const bool sandwich = lies_above(r.polygon, P).holds && lies_above(classical, r.polygon).holds;
    const NPTResult r2 = np_T(prm, 2 * N, O, 3);
    bool identical = r.polygon == r2.polygon;
    for (int n = 0; n <= 3; ++n) {
        identical = identical && r.coeffs[n].c == r2.coeffs[n].c;
    }
    std::ostringstream os;
    os << "N=" << N << " O=" << O << " NP_T slopes " << slopes_string(r.polygon) << (slopes_ok ? " = P" : " != P")
       << "; trace k<=3 agreement to order " << tr.limit << (tr.ok ? " ok" : " FAILED") << "; sandwich "
       << (sandwich ? "holds" : "FAILED") << "; doubling N=" << 2 * N << (identical ? " bit-identical" : " CHANGED");
    return Outcome{slopes_ok && tr.ok && sandwich && identical, os.str()};
}

Outcome criterion7()
{
    const Params base = make_params(11, 2, 3, 2, 3, 1);
    const bool shape = base.q == 121 && base.u == 40 && base.b == 2 && base.digit(0) == 7 && base.digit(1) == 3;
    const Polygon P = lower_bound_polygon(base, 3);
    const HasseCertificate cert = hasse_certificate(base);
    const SumEngine eng(base, default_precision(11, 2, 3));
    const auto all = l_polynomials_all_lambda(eng);
    bool above = true, verdict = true;
    for (const auto& data : all) {
        above = above && lies_above(data.newton_polygon, P).holds;
        verdict = verdict && (data.newton_polygon == P) == cert.h_unit;
    }
    bool routes = true;
    std::string trace_note;
    for (const std::int64_t li : {0, 1}) {
        Params prm = base;
        prm.lambda_index = li;
        const auto [N, O] = default_truncation(prm, 3);
        const NPTResult r = np_T(prm, N, O, 3);
        routes = routes && r.polygon == all[li].newton_polygon;
        const TraceReport tr = trace_consistency(prm, 3, O, N, O);
        routes = routes && tr.ok;
        trace_note = "N=" + std::to_string(N) + " O=" + std::to_string(O) + " trace order " + std::to_string(tr.limit);
        const int J = 2 * static_cast<int>(prm.p);
        for (int k = 1; k <= 3; ++k) {
            const TadicSum s = eng.tadic(k, J, li);
            const Valuation v =
                eng.ramified().valuation(eng.ramified().sub(eng.specialize(s), all[li].S[static_cast<std::size_t>(k)]));
            int min_prec = eng.base().precision();
            for (const int pr : s.precision) {
                min_prec = std::min(min_prec, pr);
            }
            routes = routes && v.value >= std::min(make_rat(J + 1, prm.p - 1), ExactRat(min_prec));
        }
    }
    std::ostringstream os;
    os << "q=121 u=40 digits (7,3) " << (shape ? "ok" : "WRONG") << "; P slopes " << slopes_string(P) << "; h_unit "
       << (cert.h_unit ? "true" : "false") << "; lies_above over " << all.size() << " lambdas "
       << (above ? "holds" : "FAILED") << "; equality verdict " << (verdict ? "matches" : "MISMATCH")
       << "; classical vs T-adic (NP_T, trace, specialization) " << (routes ? "agree" : "DISAGREE") << " (" << trace_note
       << ")";
    return Outcome{shape && above && verdict && routes, os.str()};
}

/// Every (d, e, c, mu, p) with d <= 6, c <= 4, p < 200 that passes make_params.
std::vector<Params> wide_params()
{
    std::vector<Params> out;
    for (std::int64_t d = 2; d <= 6; ++d) {
        for (std::int64_t e = 1; e < d; ++e) {
            if (std::gcd(d, e) != 1) {
                continue;
            }
            for (std::int64_t c = 1; c <= 4; ++c) {
                for (const auto p : primes_up_to(200)) {
                    if (d % p == 0 || c % p == 0 || p <= (d - e) * (2 * d - 1)) {
                        continue;
                    }
                    for (std::int64_t mu = 1; mu <= c; ++mu) {
                        if (std::gcd(mu % c, c) != 1) {
                            continue;
                        }
                        out.push_back(make_params(p, multiplicative_order(p, c), d, e, c, mu));
                    }
                }
            }
        }
    }
    return out;
}

std::string class_key(std::int64_t mu, std::int64_t c, std::int64_t bp, std::int64_t e, std::int64_t d)
{
    return std::to_string(mu % c) + "," + std::to_string(c) + "," + std::to_string(bp) + "," + std::to_string(e) + "," +
           std::to_string(d);
}

Outcome criterion8()
{
    std::map<std::string, std::pair<std::string, std::set<std::int64_t>>> classes;
    std::int64_t conflicts = 0, evaluated = 0;
    auto note = [&](const std::string& key, const std::string& H, std::int64_t p) {
        auto [it, fresh] = classes.try_emplace(key, H, std::set<std::int64_t>{});
        if (!fresh && it->second.first != H) {
            ++conflicts;
        }
        it->second.second.insert(p);
        ++evaluated;
    };
    for (const auto& [key, r] : g_records) {
        note(class_key(r["mu"].get<std::int64_t>(), r["c"].get<std::int64_t>(), r["bold_p"].get<std::int64_t>(),
                       r["e"].get<std::int64_t>(), r["d"].get<std::int64_t>()),
             r["H"].get<std::string>(), r["p"].get<std::int64_t>());
    }
    for (const auto& prm : wide_params()) {
        const std::int64_t bp = reduced_prime(prm.p, prm.c, prm.d);
        note(class_key(prm.mu, prm.c, bp, prm.e, prm.d), hasse_certificate(prm).H.get_str(), prm.p);
    }
    std::int64_t multi = 0;
    for (const auto& [k, v] : classes) {
        multi += v.second.size() >= 2 ? 1 : 0;
    }
    return Outcome{conflicts == 0 && multi > 0,
                   std::to_string(evaluated) + " evaluations in " + std::to_string(classes.size()) + " classes, " +
                       std::to_string(multi) + " classes seen with two or more primes, " + std::to_string(conflicts) +
                       " conflicts; integrality assertion never fired"};
}

Outcome criterion9()
{
    std::int64_t checked = 0, bad = 0;
    for (const auto& [key, r] : g_records) {
        ++checked;
        const ExactRat gap(r["asymptotic_gap"].get<std::string>());
        const ExactRat bound(r["asymptotic_bound"].get<std::string>());
        bad += gap <= bound ? 0 : 1;
    }
    for (const auto& prm : wide_params()) {
        ++checked;
        bad += asymptotic_gap(prm) <= asymptotic_bound(prm) ? 0 : 1;
    }
    return Outcome{bad == 0, std::to_string(checked) + " grid points, " + std::to_string(bad) + " above the bound"};
}

} // namespace

int main()
{
    run(1, "combinatorial identities", 60, criterion1);
    run(2, "assignment solver vs enumeration", 0, criterion2);
    run(3, "e = d - 1 reproduction", 120, criterion3);
    run(4, "equality iff p does not divide H", 0, criterion4);
    run(5, "Hodge case p = 1 mod d", 0, criterion5);
    run(6, "Dwork path p = 11", 300, criterion6);
    run(7, "twisted b = 2 case", 600, criterion7);
    run(8, "Hasse constant class invariance", 0, criterion8);
    run(9, "asymptotic gap bound", 0, criterion9);
    std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
