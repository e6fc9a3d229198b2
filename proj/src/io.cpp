#include "rlcm/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace rlcm::io {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw ParseError("failed writing '" + path + "'");
}

namespace {

std::string where(std::size_t line, std::size_t col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// Rows of 0/1 fields; returns (rows, source line of each row).
std::vector<std::vector<int>> parse_binary_csv(const std::string& text, const char* what) {
    std::vector<std::vector<int>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<int> row;
        std::size_t col = 1;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            std::string field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            std::size_t b = field.find_first_not_of(" \t");
            std::size_t e = field.find_last_not_of(" \t");
            std::string v = b == std::string::npos ? "" : field.substr(b, e - b + 1);
            if (v != "0" && v != "1")
                throw ParseError(std::string(what) + ": " + where(lineno, pos + 1) + ": field " +
                                 std::to_string(col) + " is '" + v + "', expected 0 or 1");
            row.push_back(v == "1");
            if (comma == std::string::npos) break;
            pos = comma + 1;
            ++col;
        }
        if (rows.empty()) width = row.size();
        if (row.size() != width)
            throw ParseError(std::string(what) + ": " + where(lineno, 1) + ": has " + std::to_string(row.size()) +
                             " fields, expected " + std::to_string(width));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(std::string(what) + ": no data rows");
    return rows;
}

std::vector<std::vector<double>> theta_rows(const ThetaMatrix& t) {
    std::vector<std::vector<double>> rows;
    for (int j = 0; j < t.items(); ++j) rows.emplace_back(t.row(j).begin(), t.row(j).end());
    return rows;
}

ThetaMatrix theta_from_rows(const json& rows, bool probability) {
    if (!rows.is_array() || rows.empty()) throw ParseError("theta values must be a non-empty array of rows");
    const std::size_t C = rows.at(0).size();
    if (C < 2 || (C & (C - 1))) throw ParseError("theta rows must have 2^K entries");
    std::vector<double> v;
    for (const auto& r : rows) {
        if (r.size() != C) throw ParseError("theta rows have unequal lengths");
        for (const auto& x : r) v.push_back(x.get<double>());
    }
    return ThetaMatrix(static_cast<int>(rows.size()), __builtin_ctzll(C), std::move(v), probability);
}

void expect_format(const json& j, const char* format) {
    if (!j.is_object()) throw ParseError(std::string("expected a JSON object with format '") + format + "'");
    if (j.contains("format") && j.at("format") != format)
        throw ParseError(std::string("expected format '") + format + "', got " + j.at("format").dump());
    if (j.contains("column_order") && j.at("column_order") != kColumnOrder)
        throw ParseError(std::string("unsupported column_order ") + j.at("column_order").dump() +
                         "; expected '" + kColumnOrder + "'");
}

json optional_row(const std::optional<int>& r) { return r ? json(*r + 1) : json(nullptr); }

json rows_1based(const std::vector<int>& v) {
    json out = json::array();
    for (int r : v) out.push_back(r + 1);
    return out;
}

json blocks_json(const std::optional<IdentityBlocks>& b) {
    if (!b) return nullptr;
    return {{"a", rows_1based(b->block_a)}, {"b", rows_1based(b->block_b)}};
}

std::string code_label(Code c, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back((c >> i & 1) ? '1' : '0');
    return s;
}

std::vector<Code> display_order(int n, bool graded) {
    if (graded) return graded_order(n);
    std::vector<Code> order(pow2(n));
    for (Code c = 0; c < order.size(); ++c) order[c] = c;
    return order;
}

// Shortest text that reads back to the same double.
void put(std::ostream& os, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    os.write(buf, res.ptr - buf);
}

}  // namespace

QMatrix parse_qmatrix_csv(const std::string& text) {
    auto rows = parse_binary_csv(text, "Q-matrix");
    try {
        return QMatrix(rows);
    } catch (const Error& e) {
        throw ParseError(std::string("Q-matrix: ") + e.what());
    }
}

std::string format_qmatrix_csv(const QMatrix& Q) {
    std::ostringstream os;
    os << "# Q-matrix J=" << Q.items() << " K=" << Q.attributes() << "\n";
    for (int j = 0; j < Q.items(); ++j) {
        for (int k = 0; k < Q.attributes(); ++k) os << (k ? "," : "") << Q.at(j, k);
        os << "\n";
    }
    return os.str();
}

ResponseData parse_responses_csv(const std::string& text) {
    auto rows = parse_binary_csv(text, "responses");
    const int J = static_cast<int>(rows.front().size());
    if (J > kMaxItems) throw ParseError("responses: J=" + std::to_string(J) + " exceeds the item cap");
    std::vector<Code> patterns;
    patterns.reserve(rows.size());
    for (const auto& r : rows) {
        Code c = 0;
        for (int j = 0; j < J; ++j)
            if (r[j]) c |= Code{1} << j;
        patterns.push_back(c);
    }
    return ResponseData(J, std::move(patterns));
}

std::string format_responses_csv(const ResponseData& data) {
    std::ostringstream os;
    os << "# responses N=" << data.subjects() << " J=" << data.items() << "\n";
    std::string line;
    for (Code r : data.patterns()) {
        line.clear();
        for (int j = 0; j < data.items(); ++j) {
            if (j) line.push_back(',');
            line.push_back((r >> j & 1) ? '1' : '0');
        }
        os << line << "\n";
    }
    return os.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw ParseError("JSON " + where(line, col) + ": " + e.what());
    }
}

json theta_to_json(const ThetaMatrix& theta) {
    return {{"format", "rlcm.theta"},
            {"version", kSchemaVersion},
            {"J", theta.items()},
            {"K", theta.attributes()},
            {"column_order", kColumnOrder},
            {"probability", theta.is_probability()},
            {"values", theta_rows(theta)}};
}

ThetaMatrix theta_from_json(const json& j) {
    expect_format(j, "rlcm.theta");
    try {
        ThetaMatrix t = theta_from_rows(j.at("values"), j.value("probability", true));
        if (j.contains("J") && j.at("J").get<int>() != t.items()) throw ParseError("theta: J disagrees with values");
        if (j.contains("K") && j.at("K").get<int>() != t.attributes())
            throw ParseError("theta: K disagrees with values");
        return t;
    } catch (const json::exception& e) {
        throw ParseError(std::string("theta: ") + e.what());
    }
}

json proportions_to_json(const ProportionVector& p) {
    return {{"format", "rlcm.proportions"},
            {"version", kSchemaVersion},
            {"K", p.attributes()},
            {"column_order", kColumnOrder},
            {"probs", std::vector<double>(p.values().begin(), p.values().end())}};
}

ProportionVector proportions_from_json(const json& j) {
    expect_format(j, "rlcm.proportions");
    try {
        ProportionVector p(j.at("probs").get<std::vector<double>>());
        if (j.contains("K") && j.at("K").get<int>() != p.attributes())
            throw ParseError("proportions: K disagrees with probs length");
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("proportions: ") + e.what());
    }
}

json item_to_json(const ItemParams& p, int K) {
    json out{{"family", family_name(family_of(p))}};
    switch (family_of(p)) {
        case Family::DINA: out["s"] = std::get<Dina>(p).s; out["g"] = std::get<Dina>(p).g; break;
        case Family::DINO: out["s"] = std::get<Dino>(p).s; out["g"] = std::get<Dino>(p).g; break;
        case Family::GDINA: {
            json beta = json::array();
            for (const auto& [S, v] : std::get<Gdina>(p).beta) {
                json attrs = json::array();
                for (int k = 0; k < K; ++k)
                    if (S >> k & 1) attrs.push_back(k + 1);
                beta.push_back({{"attributes", attrs}, {"value", v}});
            }
            out["beta"] = beta;
            break;
        }
        case Family::LLM: out["beta0"] = std::get<Llm>(p).beta0; out["beta"] = std::get<Llm>(p).beta; break;
        case Family::RRUM: out["pi"] = std::get<Rrum>(p).pi; out["r"] = std::get<Rrum>(p).r; break;
    }
    return out;
}

ItemParams item_from_json(const json& j, int K) {
    try {
        Family f = parse_family(j.at("family").get<std::string>());
        auto vec = [&](const char* key) {
            auto v = j.at(key).get<std::vector<double>>();
            if (static_cast<int>(v.size()) != K)
                throw ParseError(std::string(key) + " must have K=" + std::to_string(K) + " entries");
            return v;
        };
        switch (f) {
            case Family::DINA: return Dina{j.at("s").get<double>(), j.at("g").get<double>()};
            case Family::DINO: return Dino{j.at("s").get<double>(), j.at("g").get<double>()};
            case Family::GDINA: {
                Gdina g;
                for (const auto& term : j.at("beta")) {
                    Code S = 0;
                    for (int k : term.at("attributes").get<std::vector<int>>()) {
                        if (k < 1 || k > K) throw ParseError("G-DINA attribute index out of range");
                        S |= Code{1} << (k - 1);
                    }
                    g.beta[S] += term.at("value").get<double>();
                }
                return g;
            }
            case Family::LLM: return Llm{j.at("beta0").get<double>(), vec("beta")};
            case Family::RRUM: return Rrum{j.at("pi").get<double>(), vec("r")};
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("item parameters: ") + e.what());
    }
    throw ParseError("item parameters: unknown family");
}

json item_params_to_json(const std::vector<ItemParams>& params, int K) {
    json items = json::array();
    for (const auto& p : params) items.push_back(item_to_json(p, K));
    return {{"format", "rlcm.item_params"}, {"version", kSchemaVersion}, {"K", K}, {"items", items}};
}

std::vector<ItemParams> item_params_from_json(const json& j, int K) {
    expect_format(j, "rlcm.item_params");
    if (j.contains("K") && j.at("K").get<int>() != K)
        throw ParseError("item parameters declare K=" + j.at("K").dump() + " but Q has K=" + std::to_string(K));
    std::vector<ItemParams> out;
    std::size_t idx = 0;
    for (const auto& item : j.at("items")) {
        ++idx;
        try {
            out.push_back(item_from_json(item, K));
        } catch (const Error& e) {
            throw ParseError("item " + std::to_string(idx) + ": " + e.what());
        }
    }
    return out;
}

json report_to_json(const IdentifiabilityReport& rep) {
    json witness = json::array();
    for (const auto& w : rep.completeness.witness) witness.push_back(optional_row(w));
    json singles = json::array();
    for (const auto& rows : rep.c1.singleton_rows) singles.push_back(rows_1based(rows));
    json out{{"format", "rlcm.identifiability_report"},
             {"version", kSchemaVersion},
             {"complete", rep.complete()},
             {"completeness_witness", witness},
             {"c1_holds", rep.c1_holds()},
             {"singleton_rows", singles},
             {"c1_blocks", blocks_json(rep.c1.blocks)},
             {"c2_holds", rep.c2 ? json(rep.c2->holds) : json(nullptr)},
             {"c2_witness", nullptr},
             {"c2_blocks", blocks_json(rep.c2_blocks)},
             {"designation_search", designation_search_name(rep.designation_search)},
             {"designations_available", rep.designations_available},
             {"three_identity_sufficient", rep.three_identity_sufficient},
             {"verdict", verdict_name(rep.verdict)},
             {"notes", rep.notes}};
    if (rep.c2) {
        json w = json::array();
        for (const auto& x : rep.c2->witness) w.push_back(optional_row(x));
        out["c2_witness"] = w;
    }
    return out;
}

namespace {

json point_json(const ModelPoint& m) {
    return {{"theta", theta_rows(m.theta)}, {"p", std::vector<double>(m.p.values().begin(), m.p.values().end())}};
}

}  // namespace

json pair_to_json(const NonIdentifiablePair& pair) {
    return {{"format", "rlcm.pair"},
            {"version", kSchemaVersion},
            {"J", pair.first().theta.items()},
            {"K", pair.first().theta.attributes()},
            {"column_order", kColumnOrder},
            {"first", point_json(pair.first())},
            {"second", point_json(pair.second())},
            {"max_distribution_gap", pair.max_distribution_gap()},
            {"parameter_distance", pair.parameter_distance()}};
}

ModelPoint model_point_from_json(const json& j) {
    try {
        return ModelPoint{theta_from_rows(j.at("theta"), true), ProportionVector(j.at("p").get<std::vector<double>>())};
    } catch (const json::exception& e) {
        throw ParseError(std::string("model point: ") + e.what());
    }
}

std::pair<ModelPoint, ModelPoint> pair_points_from_json(const json& j) {
    expect_format(j, "rlcm.pair");
    try {
        return {model_point_from_json(j.at("first")), model_point_from_json(j.at("second"))};
    } catch (const json::exception& e) {
        throw ParseError(std::string("pair: ") + e.what());
    }
}

Prop2Design prop2_design_from_json(const json& j) {
    expect_format(j, "rlcm.prop2_design");
    try {
        Prop2Design d;
        d.K = j.at("K").get<int>();
        d.extra_rows = j.value("extra_rows", std::vector<std::vector<int>>{});
        for (const auto& item : j.at("items")) d.items.push_back(Dina{item.at("s").get<double>(), item.at("g").get<double>()});
        d.rho = j.at("rho").get<double>();
        auto anchors = j.at("anchors").get<std::vector<double>>();
        if (anchors.size() != 2) throw ParseError("prop2 design: anchors must have two entries");
        d.anchor1 = anchors[0];
        d.anchor2 = anchors[1];
        d.base_weights = j.value("base_weights", std::vector<double>{});
        return d;
    } catch (const json::exception& e) {
        throw ParseError(std::string("prop2 design: ") + e.what());
    }
}

json prop2_design_to_json(const Prop2Design& d) {
    json items = json::array();
    for (const auto& it : d.items) items.push_back({{"s", it.s}, {"g", it.g}});
    return {{"format", "rlcm.prop2_design"}, {"version", kSchemaVersion}, {"K", d.K},
            {"extra_rows", d.extra_rows},    {"items", items},            {"rho", d.rho},
            {"anchors", {d.anchor1, d.anchor2}}, {"base_weights", d.base_weights}};
}

json fit_to_json(const FitResult& fit, int K) {
    double best = -std::numeric_limits<double>::infinity(), worst = std::numeric_limits<double>::infinity();
    for (double v : fit.restart_logliks) {
        best = std::max(best, v);
        worst = std::min(worst, v);
    }
    json items = json::array();
    for (const auto& p : fit.item_params_hat) items.push_back(item_to_json(p, K));
    return {{"format", "rlcm.fit"},
            {"version", kSchemaVersion},
            {"J", fit.theta_hat.items()},
            {"K", K},
            {"column_order", kColumnOrder},
            {"items", items},
            {"theta", theta_rows(fit.theta_hat)},
            {"p", std::vector<double>(fit.p_hat.values().begin(), fit.p_hat.values().end())},
            {"loglik_trace", fit.loglik_trace},
            {"final_loglik", fit.final_loglik()},
            {"converged", fit.converged},
            {"iterations", fit.iterations},
            {"restarts_used", fit.restarts_used},
            {"restart_logliks", fit.restart_logliks},
            {"best_loglik_spread", std::isfinite(worst) ? json(best - worst) : json(nullptr)}};
}

json experiment_to_json(const ExperimentTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"N", r.N},
                        {"errors", r.errors},
                        {"median_error", r.median_error},
                        {"median_item_errors", r.median_item_errors},
                        {"median_p_error", r.median_p_error},
                        {"best_logliks", r.best_logliks}});
    return {{"format", "rlcm.experiment"},
            {"version", kSchemaVersion},
            {"verdict", verdict_name(table.verdict)},
            {"warnings", table.warnings},
            {"rows", rows}};
}

std::string format_tmatrix_csv(const TMatrix& t, bool graded) {
    const auto rows = display_order(t.items(), graded);
    const auto cols = display_order(t.attributes(), graded);
    std::ostringstream os;
    os << "# T-matrix t[r,alpha] = P(R >= r | alpha); J=" << t.items() << " K=" << t.attributes()
       << "; order: " << (graded ? "weight-graded" : kColumnOrder)
       << "; labels list coordinates 1..n left to right\n";
    os << "pattern";
    for (Code a : cols) os << ",a" << code_label(a, t.attributes());
    os << "\n";
    for (Code r : rows) {
        os << "r" << code_label(r, t.items());
        for (Code a : cols) {
            os << ",";
            put(os, t(r, a));
        }
        os << "\n";
    }
    return os.str();
}

std::string format_distribution_csv(const std::vector<double>& marginals, const std::vector<double>& point, int J,
                                    bool graded) {
    std::ostringstream os;
    os << "# response distribution; J=" << J << "; order: " << (graded ? "weight-graded" : kColumnOrder) << "\n";
    os << "pattern,P_geq,P_eq\n";
    for (Code r : display_order(J, graded)) {
        os << "r" << code_label(r, J) << ",";
        put(os, marginals[r]);
        os << ",";
        put(os, point[r]);
        os << "\n";
    }
    return os.str();
}

json schemas() {
    const json prob = {{"type", "number"}, {"minimum", 0}, {"maximum", 1}};
    const json matrix = {{"type", "array"}, {"items", {{"type", "array"}, {"items", {{"type", "number"}}}}}};
    const json order = {{"const", kColumnOrder}};
    json item = {
        {"type", "object"},
        {"required", {"family"}},
        {"oneOf",
         {{{"properties", {{"family", {{"enum", {"DINA", "DINO"}}}}, {"s", prob}, {"g", prob}}},
           {"required", {"s", "g"}}},
          {{"properties",
            {{"family", {{"const", "GDINA"}}},
             {"beta",
              {{"type", "array"},
               {"items",
                {{"type", "object"},
                 {"properties",
                  {{"attributes", {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 1}}}}},
                   {"value", {{"type", "number"}}}}},
                 {"required", {"attributes", "value"}}}}}}}},
           {"required", {"beta"}}},
          {{"properties",
            {{"family", {{"const", "LLM"}}},
             {"beta0", {{"type", "number"}}},
             {"beta", {{"type", "array"}, {"items", {{"type", "number"}}}}}}},
           {"required", {"beta0", "beta"}}},
          {{"properties",
            {{"family", {{"const", "RRUM"}}}, {"pi", prob}, {"r", {{"type", "array"}, {"items", prob}}}}},
           {"required", {"pi", "r"}}}}}};
    json s;
    s["rlcm.theta"] = {{"type", "object"},
                       {"required", {"values"}},
                       {"properties",
                        {{"format", {{"const", "rlcm.theta"}}},
                         {"version", {{"const", kSchemaVersion}}},
                         {"J", {{"type", "integer"}, {"minimum", 1}, {"maximum", kMaxItems}}},
                         {"K", {{"type", "integer"}, {"minimum", 1}, {"maximum", kMaxAttributes}}},
                         {"column_order", order},
                         {"probability", {{"type", "boolean"}}},
                         {"values", matrix}}}};
    s["rlcm.proportions"] = {{"type", "object"},
                             {"required", {"probs"}},
                             {"properties",
                              {{"format", {{"const", "rlcm.proportions"}}},
                               {"version", {{"const", kSchemaVersion}}},
                               {"K", {{"type", "integer"}}},
                               {"column_order", order},
                               {"probs", {{"type", "array"}, {"items", prob}}}}}};
    s["rlcm.item_params"] = {{"type", "object"},
                             {"required", {"items"}},
                             {"properties",
                              {{"format", {{"const", "rlcm.item_params"}}},
                               {"version", {{"const", kSchemaVersion}}},
                               {"K", {{"type", "integer"}}},
                               {"items", {{"type", "array"}, {"items", item}}}}}};
    s["rlcm.prop2_design"] = {
        {"type", "object"},
        {"required", {"K", "items", "rho", "anchors"}},
        {"properties",
         {{"format", {{"const", "rlcm.prop2_design"}}},
          {"K", {{"type", "integer"}, {"minimum", 1}}},
          {"extra_rows", {{"type", "array"}, {"items", {{"type", "array"}, {"items", {{"enum", {0, 1}}}}}}}},
          {"items",
           {{"type", "array"},
            {"items", {{"type", "object"}, {"properties", {{"s", prob}, {"g", prob}}}, {"required", {"s", "g"}}}}}}},
          {"rho", {{"type", "number"}, {"exclusiveMinimum", 0}}},
          {"anchors", {{"type", "array"}, {"items", prob}, {"minItems", 2}, {"maxItems", 2}}},
          {"base_weights", {{"type", "array"}, {"items", {{"type", "number"}}}}}}};
    json point = {{"type", "object"},
                  {"required", {"theta", "p"}},
                  {"properties", {{"theta", matrix}, {"p", {{"type", "array"}, {"items", prob}}}}}};
    s["rlcm.pair"] = {{"type", "object"},
                      {"required", {"first", "second"}},
                      {"properties",
                       {{"format", {{"const", "rlcm.pair"}}},
                        {"J", {{"type", "integer"}}},
                        {"K", {{"type", "integer"}}},
                        {"column_order", order},
                        {"first", point},
                        {"second", point},
                        {"max_distribution_gap", {{"type", "number"}}},
                        {"parameter_distance", {{"type", "number"}}}}}};
    s["rlcm.identifiability_report"] = {
        {"type", "object"},
        {"properties",
         {{"complete", {{"type", "boolean"}}},
          {"completeness_witness", {{"type", "array"}}},
          {"c1_holds", {{"type", "boolean"}}},
          {"singleton_rows", {{"type", "array"}}},
          {"c1_blocks", {{"type", {"object", "null"}}}},
          {"c2_holds", {{"type", {"boolean", "null"}}}},
          {"c2_witness", {{"type", {"array", "null"}}}},
          {"c2_blocks", {{"type", {"object", "null"}}}},
          {"designation_search", {{"enum", {"first", "exhaustive", "first_only_limit_exceeded"}}}},
          {"three_identity_sufficient", {{"type", "boolean"}}},
          {"verdict",
           {{"enum", {"IdentifiableByTheorem1", "NotCoveredBySufficientConditions", "NonIdentifiableIncomplete"}}}},
          {"notes", {{"type", "array"}, {"items", {{"type", "string"}}}}}}}};
    s["rlcm.fit"] = {{"type", "object"},
                     {"properties",
                      {{"items", {{"type", "array"}, {"items", item}}},
                       {"theta", matrix},
                       {"p", {{"type", "array"}, {"items", prob}}},
                       {"loglik_trace", {{"type", "array"}, {"items", {{"type", "number"}}}}},
                       {"converged", {{"type", "boolean"}}},
                       {"iterations", {{"type", "integer"}}},
                       {"restarts_used", {{"type", "integer"}}},
                       {"restart_logliks", {{"type", "array"}}},
                       {"best_loglik_spread", {{"type", {"number", "null"}}}}}}};
    s["rlcm.experiment"] = {{"type", "object"},
                            {"properties",
                             {{"verdict", {{"type", "string"}}},
                              {"warnings", {{"type", "array"}}},
                              {"rows",
                               {{"type", "array"},
                                {"items",
                                 {{"type", "object"},
                                  {"properties",
                                   {{"N", {{"type", "integer"}}},
                                    {"errors", {{"type", "array"}}},
                                    {"median_error", {{"type", "number"}}},
                                    {"median_item_errors", {{"type", "array"}}},
                                    {"median_p_error", {{"type", "number"}}}}}}}}}}}};
    s["csv"] = {{"qmatrix", "J lines of K comma-separated 0/1; lines starting with '#' are comments"},
                {"responses", "N lines of J comma-separated 0/1; lines starting with '#' are comments"}};
    return s;
}

}  // namespace rlcm::io
