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


#include <twnp/twnp.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace twnp;

namespace
{

enum ExitCode { kOk = 0, kViolation = 1, kBadInput = 2, kPrecision = 3 };

struct Global {
    int precision = 0;
    int jobs = 1;
    std::int64_t budget = kDefaultBudget;
    std::string out;
    std::string format = "json";
};

struct ParamFlags {
    std::int64_t p = 0;
    std::optional<std::int64_t> a;
    std::int64_t d = 0;
    std::int64_t e = 0;
    std::int64_t c = 1;
    std::int64_t mu = 1;
    std::int64_t lambda = 0;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--p", p, "characteristic")->required();
        cmd->add_option("--a", a, "extension degree (default: order of p mod c)");
        cmd->add_option("--d", d, "leading exponent")->required();
        cmd->add_option("--e", e, "second exponent")->required();
        cmd->add_option("--c", c, "character order")->capture_default_str();
        cmd->add_option("--mu", mu, "character numerator")->capture_default_str();
        cmd->add_option("--lambda", lambda, "lambda = g^index")->capture_default_str();
    }

    Params make() const
    {
        if (!is_prime(p)) {
            throw domain_error("p must be prime");
        }
        if (c < 1 || std::gcd(p, c) != 1) {
            throw domain_error("c must be positive and prime to p");
        }
        return make_params(p, a ? *a : multiplicative_order(p, c), d, e, c, mu, lambda);
    }
};

int precision_for(const Global& g, const Params& prm)
{
    return g.precision > 0 ? std::min(g.precision, max_precision(prm.p)) : default_precision(prm.p, prm.a, prm.d);
}

void emit(const Global& g, const std::string& text)
{
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream o(g.out, std::ios::trunc);
    if (!o) {
        throw domain_error("cannot write " + g.out);
    }
    o << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json header(const std::string& command, const Params& prm)
{
    return Json{{"schema", kSchemaVersion}, {"command", command}, {"params", params_json(prm)}};
}

int cmd_polygon(const Global& g, const ParamFlags& pf, std::optional<std::int64_t> n_max_opt)
{
    const Params prm = pf.make();
    const std::int64_t n_max = n_max_opt ? *n_max_opt : prm.d;
    if (n_max < 0) {
        throw domain_error("n-max must be non-negative");
    }
    const Polygon H = hodge_polygon(prm, n_max);
    const Polygon P = lower_bound_polygon(prm, n_max);
    if (g.format == "csv") {
        emit(g, slopes_csv({{"hodge", H}, {"lower_bound", P}}));
        return kOk;
    }
    Json j = header("polygon", prm);
    j["n_max"] = n_max;
    j["hodge"] = polygon_json(H);
    j["lower_bound"] = polygon_json(P);
    j["coincide"] = P == H;
    emit(g, dump(j));
    return kOk;
}

int cmd_hasse(const Global& g, const ParamFlags& pf)
{
    const Params prm = pf.make();
    const HasseCertificate cert = hasse_certificate(prm);
    if (g.format == "csv") {
        std::string s = "n,k,h_num,h_den\n";
        for (const auto& en : cert.entries) {
            s += std::to_string(en.n) + "," + std::to_string(en.k) + "," + en.h.get_num().get_str() + "," +
                 en.h.get_den().get_str() + "\n";
        }
        emit(g, s);
        return kOk;
    }
    Json j = header("hasse", prm);
    j["bold_p"] = reduced_prime(prm.p, prm.c, prm.d);
    j["certificate"] = hasse_json(cert);
    emit(g, dump(j));
    return kOk;
}

int cmd_lfunc(const Global& g, const ParamFlags& pf, bool all_lambda)
{
    const Params prm = pf.make();
    const SumEngine eng(prm, precision_for(g, prm), g.budget);
    eng.check_budget(static_cast<int>(prm.d));
    const Polygon P = lower_bound_polygon(prm, prm.d);
    if (all_lambda) {
        const auto all = l_polynomials_all_lambda(eng);
        if (g.format == "csv") {
            std::vector<std::pair<std::string, Polygon>> rows;
            for (std::size_t li = 0; li < all.size(); ++li) {
                rows.emplace_back("lambda" + std::to_string(li), all[li].newton_polygon);
            }
            emit(g, slopes_csv(rows));
            return kOk;
        }
        Json j = header("lfunc", prm);
        j["precision"] = eng.base().precision();
        j["lower_bound"] = polygon_json(P);
        Json arr = Json::array();
        for (std::size_t li = 0; li < all.size(); ++li) {
            arr.push_back(Json{{"lambda_index", li},
                               {"slopes", rat_list_json(all[li].newton_polygon.slopes())},
                               {"equal", all[li].newton_polygon == P}});
        }
        j["lambdas"] = arr;
        emit(g, dump(j));
        return kOk;
    }
    const LFunctionData data = l_polynomial(eng);
    if (g.format == "csv") {
        emit(g, slopes_csv({{"newton", data.newton_polygon}, {"lower_bound", P}}));
        return kOk;
    }
    Json j = header("lfunc", prm);
    j["precision"] = eng.base().precision();
    Json vals = Json::array();
    for (const auto& v : data.valuations) {
        vals.push_back(valuation_json(v));
    }
    j["valuations"] = vals;
    j["newton"] = polygon_json(data.newton_polygon);
    j["lower_bound"] = polygon_json(P);
    j["equal"] = data.newton_polygon == P;
    j["lies_above"] = lies_above(data.newton_polygon, P).holds;
    emit(g, dump(j));
    return kOk;
}

struct DworkFlags {
    std::optional<int> N;
    std::optional<int> O;
    std::optional<int> n_max;
    std::optional<int> k_max;
    std::optional<int> J;
    bool no_trace = false;
    bool no_classical = false;
    bool no_doubling = false;
};

int cmd_dwork(const Global& g, const ParamFlags& pf, const DworkFlags& df)
{
    const Params prm = pf.make();
    const int n_max = df.n_max ? *df.n_max : static_cast<int>(prm.d);
    if (n_max < 1) {
        throw domain_error("n-max must be positive");
    }
    const auto [N0, O0] = default_truncation(prm, n_max);
    const int O = df.O ? *df.O : O0;
    const int N = df.N ? *df.N : truncation_certificate(prm, n_max, O, n_max).suggested_N;
    const int M = precision_for(g, prm);
    Json j = header("dwork", prm);
    j["n_max"] = n_max;
    j["precision"] = M;
    const TruncationVerdict cert = truncation_certificate(prm, N, O, n_max);
    j["certificate"] = certificate_json(cert, N, O);
    if (!cert.ok) {
        j["status"] = "truncation_failure";
        emit(g, dump(j));
        std::cerr << "truncation certificate failed; try --N " << cert.suggested_N << " --O " << cert.suggested_O
                  << "\n";
        return kPrecision;
    }
    int code = kOk;
    const NPTResult r = np_T(prm, N, O, n_max, M);
    const Polygon P = lower_bound_polygon(prm, n_max);
    Json orders = Json::array();
    for (const auto& v : r.orders) {
        orders.push_back(valuation_json(v));
    }
    j["status"] = "ok";
    j["pi_orders"] = orders;
    j["np_T"] = polygon_json(r.polygon);
    j["lower_bound"] = polygon_json(P);
    j["equal"] = r.polygon == P;
    const bool above = lies_above(r.polygon, P).holds;
    j["lies_above"] = above;
    if (!above && hypothesis_holds(prm.p, prm.d, prm.e)) {
        code = kViolation;
    }
    if (!df.no_doubling) {
        const NPTResult r2 = np_T(prm, 2 * N, O, n_max, M);
        bool same = true;
        for (int n = 0; n <= n_max; ++n) {
            same = same && r.coeffs[n].c == r2.coeffs[n].c;
        }
        j["doubling"] = Json{{"N", 2 * N}, {"identical", same}};
        if (!same) {
            code = std::max<int>(code, kPrecision);
        }
    }
    if (!df.no_trace) {
        const int k_max = df.k_max ? *df.k_max : std::min(3, n_max);
        const TraceReport rep = trace_consistency(prm, k_max, df.J ? *df.J : O, N, O, M, g.budget);
        j["trace"] = trace_json(rep);
        if (!rep.ok) {
            code = kViolation;
        }
    }
    if (!df.no_classical && n_max == prm.d) {
        try {
            const SumEngine eng(prm, M, g.budget);
            eng.check_budget(static_cast<int>(prm.d));
            const Polygon classical = l_polynomial(eng).newton_polygon;
            const bool lo = lies_above(r.polygon, P).holds;
            const bool hi = lies_above(classical, r.polygon).holds;
            j["sandwich"] = Json{{"status", "ok"},
                                 {"classical", polygon_json(classical)},
                                 {"lower_le_np_T", lo},
                                 {"np_T_le_classical", hi}};
            if (!hi) {
                code = kViolation;
            }
        } catch (const budget_exceeded&) {
            j["sandwich"] = Json{{"status", "skipped:budget"}};
        }
    }
    if (g.format == "csv") {
        emit(g, slopes_csv({{"np_T", r.polygon}, {"lower_bound", P}}));
    } else {
        emit(g, dump(j));
    }
    return code;
}

struct GridFlags {
    std::vector<std::int64_t> ds;
    std::vector<std::int64_t> es;
    std::vector<std::int64_t> cs{1};
    std::vector<std::int64_t> mus;
    std::int64_t p_min = 2;
    std::int64_t p_max = 100;
    int per_class = 0;
    std::string floor = "hypothesis";
    std::vector<std::int64_t> residues;
    std::int64_t a_multiple = 1;
    std::string lambda = "all";
    bool fsync = false;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--d", ds, "values of d")->required();
        cmd->add_option("--e", es, "values of e (default: all coprime e < d)");
        cmd->add_option("--c", cs, "character orders")->capture_default_str();
        cmd->add_option("--mu", mus, "character numerators (default: all units mod c)");
        cmd->add_option("--p-min", p_min)->capture_default_str();
        cmd->add_option("--p-max", p_max)->capture_default_str();
        cmd->add_option("--primes-per-class", per_class, "first k primes per class mod cd (0: all)")
            ->capture_default_str();
        cmd->add_option("--floor", floor, "prime floor rule")
            ->check(CLI::IsMember({"none", "hypothesis", "e_bound"}))
            ->capture_default_str();
        cmd->add_option("--residues", residues, "residue classes mod cd");
        cmd->add_option("--a-multiple", a_multiple, "a = multiple * ord_c(p)")->capture_default_str();
        cmd->add_option("--lambda", lambda, "all | sample:K | fixed:I")->capture_default_str();
        cmd->add_flag("--fsync", fsync, "fsync after every record");
    }

    GridSpec make() const
    {
        GridSpec gs;
        gs.ds = ds;
        gs.es = es;
        gs.cs = cs;
        gs.mus = mus;
        gs.p_min = p_min;
        gs.p_max = p_max;
        gs.primes_per_class = per_class;
        gs.floor = floor == "none" ? PrimeFloor::none : floor == "e_bound" ? PrimeFloor::e_bound : PrimeFloor::hypothesis;
        gs.residues = residues;
        if (a_multiple < 1) {
            throw domain_error("a-multiple must be positive");
        }
        gs.a_multiple = a_multiple;
        for (const auto c : cs) {
            if (c < 1) {
                throw domain_error("c must be positive");
            }
        }
        for (const auto d : ds) {
            if (d < 2) {
                throw domain_error("d must be at least 2");
            }
        }
        if (lambda == "all") {
            gs.lambda_policy = LambdaPolicy::all;
        } else if (lambda.rfind("sample:", 0) == 0) {
            gs.lambda_policy = LambdaPolicy::sample;
            gs.lambda_value = std::stoll(lambda.substr(7));
        } else if (lambda.rfind("fixed:", 0) == 0) {
            gs.lambda_policy = LambdaPolicy::fixed;
            gs.lambda_value = std::stoll(lambda.substr(6));
        } else {
            throw domain_error("bad --lambda policy: " + lambda);
        }
        return gs;
    }
};

int cmd_sweep(const Global& g, const GridFlags& gf, bool enforce)
{
    if (g.format != "json") {
        throw domain_error("sweep and verify write JSONL records; --format csv is not available");
    }
    const GridSpec gs = gf.make();
    JsonlStore store(g.out.empty() ? std::string("twnp_sweep.jsonl") : g.out, gf.fsync);
    SweepOptions opt;
    opt.jobs = g.jobs;
    opt.precision = g.precision;
    opt.budget = g.budget;
    opt.fsync = gf.fsync;
    const SweepResult res = run_sweep(gs, store, opt);
    Json summary = res.summary;
    if (!summary["p_divides_H_found"].get<bool>()) {
        summary["note"] = "no instance with p | H in this grid";
    }
    std::cout << dump(summary);
    if (enforce && res.violation) {
        for (const auto& r : res.violating) {
            std::cerr << r.dump() << "\n";
        }
        return kViolation;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Twisted Newton polygons of binomial exponential sums"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--precision", g.precision, "p-adic working precision M (0: default)");
    app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--budget", g.budget, "maximum field elements enumerated per sum")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output file (sweep: JSONL store)");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    ParamFlags pf;
    std::optional<std::int64_t> poly_nmax;
    auto* polygon = app.add_subcommand("polygon", "Hodge and lower-bound polygons");
    pf.attach(polygon);
    polygon->add_option("--n-max", poly_nmax, "last index (default d)");

    auto* hasse = app.add_subcommand("hasse", "Hasse numbers and constant");
    pf.attach(hasse);

    bool all_lambda = false;
    auto* lfunc = app.add_subcommand("lfunc", "Newton polygon from exponential sums");
    pf.attach(lfunc);
    lfunc->add_flag("--all-lambda", all_lambda, "every lambda in one pass");

    DworkFlags df;
    auto* dwork = app.add_subcommand("dwork", "T-adic Newton polygon from the Dwork operator");
    pf.attach(dwork);
    dwork->add_option("--N", df.N, "basis size");
    dwork->add_option("--O", df.O, "pi-adic order");
    dwork->add_option("--n-max", df.n_max, "last coefficient (default d)");
    dwork->add_option("--k-max", df.k_max, "trace check up to k");
    dwork->add_option("--J", df.J, "T-degree cap for the trace check (default O)");
    dwork->add_flag("--no-trace", df.no_trace);
    dwork->add_flag("--no-classical", df.no_classical);
    dwork->add_flag("--no-doubling", df.no_doubling);

    GridFlags gf_verify;
    auto* verify = app.add_subcommand("verify", "sweep a grid and check the theorems");
    gf_verify.attach(verify);
    GridFlags gf_sweep;
    auto* sweep = app.add_subcommand("sweep", "sweep a grid and store records");
    gf_sweep.attach(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (polygon->parsed()) {
            return cmd_polygon(g, pf, poly_nmax);
        }
        if (hasse->parsed()) {
            return cmd_hasse(g, pf);
        }
        if (lfunc->parsed()) {
            return cmd_lfunc(g, pf, all_lambda);
        }
        if (dwork->parsed()) {
            return cmd_dwork(g, pf, df);
        }
        if (verify->parsed()) {
            return cmd_sweep(g, gf_verify, true);
        }
        if (sweep->parsed()) {
            return cmd_sweep(g, gf_sweep, false);
        }
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const budget_exceeded& e) {
        std::cerr << "error: budget exceeded: " << e.what() << "\n";
        return kBadInput;
    } catch (const truncation_error& e) {
        std::cerr << "error: " << e.what() << "; try --N " << e.suggested_N << " --O " << e.suggested_O << "\n";
        return kPrecision;
    } catch (const precision_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPrecision;
    } catch (const internal_error& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return kViolation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kOk;
}
