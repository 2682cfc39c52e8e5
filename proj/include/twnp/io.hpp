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

#ifndef TWNP_IO_HPP
#define TWNP_IO_HPP

#include <twnp/dwork.hpp>
#include <twnp/hasse.hpp>
#include <twnp/lfunction.hpp>
#include <twnp/polygon.hpp>

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace twnp
{

/// Ordered keys keep output byte-stable across runs.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json rat_json(const ExactRat& x) { return rational_string(x); }

inline Json rat_list_json(const std::vector<ExactRat>& xs)
{
    Json out = Json::array();
    for (const auto& x : xs) {
        out.push_back(rat_json(x));
    }
    return out;
}

inline Json params_json(const Params& prm)
{
    Json digits = Json::array();
    for (std::int64_t k = 0; k < prm.b; ++k) {
        digits.push_back(prm.digit(k));
    }
    return Json{{"p", prm.p},   {"a", prm.a}, {"d", prm.d},  {"e", prm.e},           {"c", prm.c},
                {"mu", prm.mu}, {"lambda_index", prm.lambda_index}, {"q", prm.q}, {"u", prm.u},
                {"b", prm.b},   {"digits", digits}};
}

inline Json polygon_json(const Polygon& poly)
{
    Json vertices = Json::array();
    for (const auto& [n, v] : poly.corners()) {
        vertices.push_back(Json::array({n, rat_json(v)}));
    }
    return Json{{"values", rat_list_json(poly.values())}, {"slopes", rat_list_json(poly.slopes())},
                {"vertices", vertices}};
}

inline Json valuation_json(const Valuation& v)
{
    return Json{{"value", rat_json(v.value)}, {"certified", v.certified}};
}

inline Json hasse_json(const HasseCertificate& cert)
{
    Json entries = Json::array();
    for (const auto& en : cert.entries) {
        Json v = en.valuation ? Json(*en.valuation) : Json(nullptr);
        entries.push_back(Json{{"n", en.n}, {"k", en.k}, {"h", rat_json(en.h)}, {"valuation", v}});
    }
    return Json{{"entries", entries},
                {"product_valuation", cert.product_valuation ? Json(*cert.product_valuation) : Json(nullptr)},
                {"H", cert.H.get_str()},
                {"H_mod_p", cert.H_mod_p},
                {"h_unit", cert.h_unit},
                {"p_divides_H", cert.p_divides_H}};
}

inline Json certificate_json(const TruncationVerdict& v, int N, int O)
{
    return Json{{"N", N},
                {"O", O},
                {"ok", v.ok},
                {"reasons", v.reasons},
                {"suggested_N", v.suggested_N},
                {"suggested_O", v.suggested_O}};
}

inline Json trace_json(const TraceReport& rep)
{
    return Json{{"ok", rep.ok}, {"limit", rep.limit}, {"agreement", rep.agreement}, {"notes", rep.notes}};
}

/// Plot-ready slope table: one row per slope.
inline std::string slopes_csv(const std::vector<std::pair<std::string, Polygon>>& polys)
{
    std::ostringstream os;
    os << "polygon,n,slope_num,slope_den\n";
    for (const auto& [name, poly] : polys) {
        const auto s = poly.slopes();
        for (std::size_t n = 0; n < s.size(); ++n) {
            os << name << "," << n << "," << s[n].get_num().get_str() << "," << s[n].get_den().get_str() << "\n";
        }
    }
    return os.str();
}

} // namespace twnp

#endif
