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

#ifndef TWNP_SWEEP_HPP
#define TWNP_SWEEP_HPP

#include <twnp/hasse.hpp>
#include <twnp/io.hpp>
#include <twnp/lfunction.hpp>
#include <twnp/polygon.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

namespace twnp
{

enum class PrimeFloor { none, hypothesis, e_bound };

enum class LambdaPolicy { all, sample, fixed };

struct GridSpec {
    std::vector<std::int64_t> ds;
    std::vector<std::int64_t> es;  // empty: every e < d coprime to d
    std::vector<std::int64_t> cs{1};
    std::vector<std::int64_t> mus; // empty: every mu in [1, c] coprime to c
    std::int64_t p_min = 2;
    std::int64_t p_max = 100;
    int primes_per_class = 0;      // 0: every prime in range
    PrimeFloor floor = PrimeFloor::hypothesis;
    std::vector<std::int64_t> residues; // residues mod cd; empty: all
    std::int64_t a_multiple = 1;
    LambdaPolicy lambda_policy = LambdaPolicy::all;
    std::int64_t lambda_value = 0; // sample size or fixed index
};

struct GridTuple {
    Params prm; // lambda_index = 0
    std::vector<std::int64_t> lambdas;
    bool over_budget = false; // one "lambda=*" record instead of one per lambda
};

/// p > (d - e)(2d - 1).
inline bool hypothesis_holds(std::int64_t p, std::int64_t d, std::int64_t e) { return p > (d - e) * (2 * d - 1); }

inline std::vector<std::int64_t> select_lambdas(const GridSpec& g, std::int64_t q)
{
    std::vector<std::int64_t> out;
    switch (g.lambda_policy) {
    case LambdaPolicy::all:
        for (std::int64_t i = 0; i < q - 1; ++i) {
            out.push_back(i);
        }
        break;
    case LambdaPolicy::sample: {
        const std::int64_t k = std::min(std::max<std::int64_t>(g.lambda_value, 1), q - 1);
        for (std::int64_t i = 0; i < k; ++i) {
            out.push_back(i * (q - 1) / k);
        }
        break;
    }
    case LambdaPolicy::fixed:
        out.push_back(min_residue(g.lambda_value, q - 1));
        break;
    }
    return out;
}

/// Tuples in a fixed order: d, e, c, mu, residue class, p.
inline std::vector<GridTuple> enumerate_grid(const GridSpec& g, std::int64_t budget = kDefaultBudget)
{
    std::vector<GridTuple> out;
    for (const std::int64_t d : g.ds) {
        std::vector<std::int64_t> es = g.es;
        if (es.empty()) {
            for (std::int64_t e = 1; e < d; ++e) {
                es.push_back(e);
            }
        }
        for (const std::int64_t e : es) {
            if (!(d > e && e >= 1) || std::gcd(d, e) != 1) {
                continue;
            }
            for (const std::int64_t c : g.cs) {
                std::vector<std::int64_t> mus = g.mus;
                if (mus.empty()) {
                    for (std::int64_t mu = 1; mu <= c; ++mu) {
                        if (std::gcd(mu % c, c) == 1) {
                            mus.push_back(mu);
                        }
                    }
                }
                std::int64_t floor = g.p_min - 1;
                if (g.floor == PrimeFloor::hypothesis) {
                    floor = std::max(floor, (d - e) * (2 * d - 1));
                } else if (g.floor == PrimeFloor::e_bound) {
                    floor = std::max(floor, c * (d * d - d + 1));
                }
                floor = std::max(floor, d);
                const std::int64_t cd = c * d;
                std::vector<std::int64_t> classes = g.residues;
                if (classes.empty()) {
                    for (std::int64_t r = 0; r < cd; ++r) {
                        classes.push_back(r);
                    }
                }
                for (const std::int64_t mu : mus) {
                    if (std::gcd(min_residue(mu, c), c) != 1) {
                        continue;
                    }
                    for (const std::int64_t r : classes) {
                        int taken = 0;
                        for (std::int64_t p = floor + 1; p <= g.p_max; ++p) {
                            if (g.primes_per_class > 0 && taken >= g.primes_per_class) {
                                break;
                            }
                            if (!is_prime(p) || min_residue(p, cd) != min_residue(r, cd) || d % p == 0 || c % p == 0) {
                                continue;
                            }
                            const std::int64_t a = multiplicative_order(p, c) * g.a_multiple;
                            GridTuple t;
                            try {
                                t.prm = make_params(p, a, d, e, c, mu, 0);
                            } catch (const domain_error&) {
                                continue;
                            }
                            std::int64_t size = 1;
                            for (std::int64_t k = 0; k < d && !t.over_budget; ++k) {
                                t.over_budget = size > budget / t.prm.q;
                                size *= t.prm.q;
                            }
                            t.over_budget = t.over_budget || size - 1 > budget;
                            if (!t.over_budget) {
                                t.lambdas = select_lambdas(g, t.prm.q);
                            }
                            out.push_back(std::move(t));
                            ++taken;
                        }
                    }
                }
            }
        }
    }
    return out;
}

/// lambda_index < 0 stands for every lambda.
inline std::string record_key(const Params& prm, std::int64_t lambda_index)
{
    return "p=" + std::to_string(prm.p) + ";a=" + std::to_string(prm.a) + ";d=" + std::to_string(prm.d) +
           ";e=" + std::to_string(prm.e) + ";c=" + std::to_string(prm.c) + ";mu=" + std::to_string(prm.mu) +
           ";lambda=" + (lambda_index < 0 ? std::string("*") : std::to_string(lambda_index));
}

inline std::vector<std::string> tuple_keys(const GridTuple& t)
{
    if (t.over_budget) {
        return {record_key(t.prm, -1)};
    }
    std::vector<std::string> out;
    for (const auto li : t.lambdas) {
        out.push_back(record_key(t.prm, li));
    }
    return out;
}

/// max_n (P(n) - H(n)) on [0, d].
inline ExactRat asymptotic_gap(const Params& prm)
{
    const Polygon P = lower_bound_polygon(prm, prm.d);
    const Polygon H = hodge_polygon(prm, prm.d);
    ExactRat gap = 0;
    for (std::int64_t n = 0; n <= prm.d; ++n) {
        gap = std::max<ExactRat>(gap, P.value(n) - H.value(n));
    }
    return gap;
}

/// (d - e)(d - 1)^2 / (d (p - 1)).
inline ExactRat asymptotic_bound(const Params& prm)
{
    return make_rat((prm.d - prm.e) * (prm.d - 1) * (prm.d - 1), prm.d * (prm.p - 1));
}

struct SweepOptions {
    int jobs = 1;
    int precision = 0; // 0: default per tuple
    std::int64_t budget = kDefaultBudget;
    bool fsync = false;
};

/// Evaluates one tuple for its selected lambdas; one record per lambda.
inline std::vector<Json> evaluate_tuple(const GridTuple& t, const SweepOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    const Params& prm = t.prm;
    const int M = opt.precision > 0 ? std::min(opt.precision, max_precision(prm.p))
                                    : default_precision(prm.p, prm.a, prm.d);
    const Polygon P = lower_bound_polygon(prm, prm.d);
    const Polygon H = hodge_polygon(prm, prm.d);
    const HasseCertificate cert = hasse_certificate(prm);
    const ExactRat gap = asymptotic_gap(prm);
    const ExactRat bound = asymptotic_bound(prm);
    const bool hyp = hypothesis_holds(prm.p, prm.d, prm.e);

    std::string status = t.over_budget ? "skipped:budget" : "ok";
    std::vector<LFunctionData> data;
    if (!t.over_budget) {
        try {
            const SumEngine eng(prm, M, opt.budget);
            eng.check_budget(static_cast<int>(prm.d));
            data = l_polynomials_all_lambda(eng);
        } catch (const budget_exceeded&) {
            status = "skipped:budget";
        } catch (const precision_error&) {
            status = "error:precision";
        } catch (const domain_error&) {
            status = "error:unsupported";
        }
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    std::vector<Json> out;
    const std::vector<std::int64_t> lambdas = t.over_budget ? std::vector<std::int64_t>{-1} : t.lambdas;
    for (const std::int64_t li : lambdas) {
        Json r;
        r["schema"] = kSchemaVersion;
        r["key"] = record_key(prm, li);
        r["status"] = status;
        r["p"] = prm.p;
        r["a"] = prm.a;
        r["d"] = prm.d;
        r["e"] = prm.e;
        r["c"] = prm.c;
        r["mu"] = prm.mu;
        r["lambda_index"] = li < 0 ? Json(nullptr) : Json(li);
        r["b"] = prm.b;
        r["q"] = prm.q;
        r["u"] = prm.u;
        r["bold_p"] = reduced_prime(prm.p, prm.c, prm.d);
        r["hypothesis"] = hyp;
        r["H"] = cert.H.get_str();
        r["H_mod_p"] = cert.H_mod_p;
        r["h_unit"] = cert.h_unit;
        r["p_divides_H"] = cert.p_divides_H;
        r["P_slopes"] = rat_list_json(P.slopes());
        r["hodge_slopes"] = rat_list_json(H.slopes());
        r["asymptotic_gap"] = rat_json(gap);
        r["asymptotic_bound"] = rat_json(bound);
        Json violations = Json::array();
        if (gap > bound) {
            violations.push_back("asymptotic_bound");
        }
        if (!lies_above(P, H).holds) {
            violations.push_back("P_above_hodge");
        }
        if (status == "ok") {
            const Polygon& np = data[static_cast<std::size_t>(li)].newton_polygon;
            const bool equal = np == P;
            const bool above = lies_above(np, P).holds;
            r["np_slopes"] = rat_list_json(np.slopes());
            r["equal"] = equal;
            r["lies_above"] = above;
            if (hyp && !above) {
                violations.push_back("lies_above");
            }
            if (hyp && equal == cert.p_divides_H) {
                violations.push_back("equal_iff_hasse_unit");
            }
            if (prm.e == prm.d - 1 && prm.p > prm.c * (prm.d * prm.d - prm.d + 1) && !equal) {
                violations.push_back("e_bound_equality");
            }
            if (prm.u == 0 && prm.p % prm.d == 1 && !(np == H)) {
                violations.push_back("hodge_example");
            }
        } else {
            r["np_slopes"] = nullptr;
            r["equal"] = nullptr;
            r["lies_above"] = nullptr;
        }
        r["violations"] = violations;
        r["precision"] = M;
        r["timings"] = Json{{"tuple_ms", ms}};
        out.push_back(std::move(r));
    }
    return out;
}

/// Append-only JSONL file keyed by "key".  Lines that do not parse as a
/// complete record are moved to <path>.quarantine on open.
class JsonlStore
{
public:
    explicit JsonlStore(std::string path, bool fsync = false) : path_(std::move(path)), fsync_(fsync)
    {
        std::vector<std::string> good;
        std::vector<std::string> bad;
        {
            std::ifstream in(path_);
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) {
                    continue;
                }
                const Json j = Json::parse(line, nullptr, false);
                if (j.is_discarded() || !j.is_object() || !j.contains("key")) {
                    bad.push_back(line);
                    continue;
                }
                records_[j["key"].get<std::string>()] = j;
                good.push_back(line);
            }
        }
        quarantined_ = static_cast<int>(bad.size());
        if (!bad.empty()) {
            std::ofstream q(path_ + ".quarantine", std::ios::app);
            for (const auto& l : bad) {
                q << l << "\n";
            }
            const std::string tmp = path_ + ".tmp";
            {
                std::ofstream o(tmp, std::ios::trunc);
                for (const auto& l : good) {
                    o << l << "\n";
                }
            }
            std::rename(tmp.c_str(), path_.c_str());
        }
        file_ = std::fopen(path_.c_str(), "a");
        if (file_ == nullptr) {
            throw std::runtime_error("cannot open " + path_);
        }
    }

    JsonlStore(const JsonlStore&) = delete;
    JsonlStore& operator=(const JsonlStore&) = delete;

    ~JsonlStore()
    {
        if (file_ != nullptr) {
            std::fclose(file_);
        }
    }

    bool contains(const std::string& key) const { return records_.count(key) != 0; }
    const Json& at(const std::string& key) const { return records_.at(key); }
    int quarantined() const { return quarantined_; }
    std::size_t size() const { return records_.size(); }

    void append(const Json& record)
    {
        const std::string line = record.dump() + "\n";
        std::fwrite(line.data(), 1, line.size(), file_);
        std::fflush(file_);
        if (fsync_) {
            ::fsync(fileno(file_));
        }
        records_[record["key"].get<std::string>()] = record;
    }

private:
    std::string path_;
    bool fsync_;
    std::FILE* file_ = nullptr;
    std::map<std::string, Json> records_;
    int quarantined_ = 0;
};

struct SweepResult {
    Json summary;
    std::vector<Json> violating;
    bool violation = false;
};

/// Runs the grid, skipping keys already stored; workers evaluate tuples and
/// the calling thread is the only writer.
inline SweepResult run_sweep(const GridSpec& g, JsonlStore& store, const SweepOptions& opt)
{
    const std::vector<GridTuple> tuples = enumerate_grid(g, opt.budget);
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        for (const auto& key : tuple_keys(tuples[i])) {
            if (!store.contains(key)) {
                todo.push_back(i);
                break;
            }
        }
    }

    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::vector<Json>> ready;
    std::atomic<std::size_t> next{0};
    std::size_t finished = 0;
    const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(std::max<std::size_t>(todo.size(), 1))));
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= todo.size()) {
                    return;
                }
                std::vector<Json> recs = evaluate_tuple(tuples[todo[idx]], opt);
                {
                    std::lock_guard<std::mutex> lk(mu);
                    ready.push_back(std::move(recs));
                }
                cv.notify_one();
            }
        });
    }
    std::size_t new_records = 0;
    while (finished < todo.size()) {
        std::unique_lock<std::mutex> lk(mu);
        cv.wait(lk, [&] { return !ready.empty(); });
        std::vector<Json> recs = std::move(ready.front());
        ready.pop_front();
        lk.unlock();
        for (const auto& r : recs) {
            if (!store.contains(r["key"].get<std::string>())) {
                store.append(r);
                ++new_records;
            }
        }
        ++finished;
    }
    for (auto& t : workers) {
        t.join();
    }

    SweepResult res;
    std::int64_t n = 0, ok = 0, equal = 0, strict = 0, pdiv = 0, skipped = 0, errors = 0, viol = 0;
    std::map<std::string, std::string> class_H;
    std::set<std::string> conflicts;
    for (const auto& t : tuples) {
        for (const auto& key : tuple_keys(t)) {
            const Json& r = store.at(key);
            ++n;
            const std::string st = r["status"].get<std::string>();
            if (st == "skipped:budget") {
                ++skipped;
            } else if (st != "ok") {
                ++errors;
            } else {
                ++ok;
                if (r["equal"].get<bool>()) {
                    ++equal;
                } else if (r["lies_above"].get<bool>()) {
                    ++strict;
                }
            }
            if (r["p_divides_H"].get<bool>()) {
                ++pdiv;
            }
            if (!r["violations"].empty()) {
                ++viol;
                res.violating.push_back(r);
            }
            const std::string cls = "mu=" + std::to_string(r["mu"].get<std::int64_t>() % r["c"].get<std::int64_t>()) +
                                    ";c=" + std::to_string(r["c"].get<std::int64_t>()) +
                                    ";bold_p=" + std::to_string(r["bold_p"].get<std::int64_t>()) +
                                    ";e=" + std::to_string(r["e"].get<std::int64_t>()) +
                                    ";d=" + std::to_string(r["d"].get<std::int64_t>());
            const auto [it, inserted] = class_H.emplace(cls, r["H"].get<std::string>());
            if (!inserted && it->second != r["H"].get<std::string>()) {
                conflicts.insert(cls);
            }
        }
    }
    res.violation = viol > 0 || !conflicts.empty();
    res.summary = Json{{"schema", kSchemaVersion},
                       {"tuples", tuples.size()},
                       {"records", n},
                       {"new_records", new_records},
                       {"quarantined_lines", store.quarantined()},
                       {"ok", ok},
                       {"equal", equal},
                       {"strict_above", strict},
                       {"p_divides_H", pdiv},
                       {"p_divides_H_found", pdiv > 0},
                       {"skipped_budget", skipped},
                       {"errors", errors},
                       {"violations", viol},
                       {"hasse_classes", class_H.size()},
                       {"hasse_class_conflicts", Json(std::vector<std::string>(conflicts.begin(), conflicts.end()))}};
    return res;
}

} // namespace twnp

#endif
