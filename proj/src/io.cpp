#include "wignerchaos/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wignerchaos/error.hpp"

namespace wigner::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

double finite_number(const json& j, const char* field) {
    if (!j.contains(field)) parse_fail(std::string("missing field '") + field + "'");
    const auto& v = j.at(field);
    if (!v.is_number()) parse_fail(std::string("field '") + field + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) parse_fail(std::string("field '") + field + "' is not finite");
    return x;
}

std::int64_t integer(const json& j, const char* field) {
    if (!j.contains(field)) parse_fail(std::string("missing field '") + field + "'");
    const auto& v = j.at(field);
    if (!v.is_number_integer()) parse_fail(std::string("field '") + field + "' must be an integer");
    return v.get<std::int64_t>();
}

json complex_json(Complex z) { return {{"re", round12(z.real())}, {"im", round12(z.imag())}}; }

Complex complex_from(const json& j) { return {finite_number(j, "re"), finite_number(j, "im")}; }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

Engine parse_engine(const std::string& s) {
    if (s == "free") return Engine::Free;
    if (s == "classical") return Engine::Classical;
    parse_fail("unknown engine '" + s + "'");
}

}  // namespace

double round12(double x) {
    if (!std::isfinite(x)) return x;
    return std::stod(format12(x));
}

std::string format12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_word(const std::vector<int>& word) {
    const bool single = std::all_of(word.begin(), word.end(), [](int c) { return c >= 0 && c <= 9; });
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (!single && i) out += ",";
        out += std::to_string(word[i]);
    }
    return out;
}

std::vector<int> parse_word(const std::string& text) {
    std::vector<int> out;
    if (text.find(',') != std::string::npos) {
        for (const auto& part : split(text, ',')) {
            if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
                parse_fail("bad word letter '" + part + "'");
            }
            if (part.size() > 6) parse_fail("word letter '" + part + "' too large");
            out.push_back(std::stoi(part));
        }
    } else {
        for (char ch : text) {
            if (ch < '0' || ch > '9') parse_fail(std::string("bad word letter '") + ch + "'");
            out.push_back(ch - '0');
        }
    }
    for (int letter : out) {
        if (letter < 1) parse_fail("word letters start at 1");
    }
    return out;
}

json kernel_to_json(const StepKernel& f) {
    json coeffs = json::array();
    for (std::size_t e = 0; e < f.nnz(); ++e) {
        auto idx = f.index(e);
        coeffs.push_back({{"idx", std::vector<CellIndex>(idx.begin(), idx.end())},
                          {"re", f.value(e).real()},
                          {"im", f.value(e).imag()}});
    }
    return {{"order", f.order()},
            {"grid", {{"delta", f.grid().delta}, {"cells", f.grid().cells}}},
            {"coeffs", coeffs}};
}

StepKernel kernel_from_json(const json& j) {
    if (!j.is_object()) parse_fail("kernel must be a JSON object");
    const auto order = integer(j, "order");
    if (order < 0 || order > 64) parse_fail("kernel order out of range");
    if (!j.contains("grid") || !j.at("grid").is_object()) parse_fail("missing object 'grid'");
    const double delta = finite_number(j.at("grid"), "delta");
    const auto cells = integer(j.at("grid"), "cells");
    if (cells < 1 || cells > std::numeric_limits<std::uint32_t>::max()) parse_fail("grid cells out of range");
    const Grid grid(delta, static_cast<std::uint32_t>(cells));
    if (!j.contains("coeffs") || !j.at("coeffs").is_array()) parse_fail("missing array 'coeffs'");
    std::vector<StepKernel::Entry> entries;
    for (const auto& c : j.at("coeffs")) {
        if (!c.is_object() || !c.contains("idx") || !c.at("idx").is_array()) parse_fail("coefficient needs 'idx'");
        std::vector<CellIndex> idx;
        for (const auto& v : c.at("idx")) {
            if (!v.is_number_integer()) parse_fail("indices must be integers");
            const auto x = v.get<std::int64_t>();
            if (x < 0 || x >= cells) {
                throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(x) + " outside grid");
            }
            idx.push_back(static_cast<CellIndex>(x));
        }
        entries.push_back({std::move(idx), {finite_number(c, "re"), c.contains("im") ? finite_number(c, "im") : 0.0}});
    }
    return StepKernel(static_cast<int>(order), grid, std::move(entries));
}

StepKernel read_kernel(const std::filesystem::path& path) {
    return kernel_from_json(parse_json_text(read_text(path)));
}

CovarianceMatrix covariance_from_json(const json& j) {
    const json& m = j.is_object() ? (j.contains("covariance") ? j.at("covariance") : json())
                                  : j;
    if (!m.is_array()) parse_fail("covariance must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : m) {
        if (!r.is_array()) parse_fail("covariance rows must be arrays");
        std::vector<double> row;
        for (const auto& v : r) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) parse_fail("covariance entries must be finite numbers");
            row.push_back(v.get<double>());
        }
        rows.push_back(std::move(row));
    }
    return CovarianceMatrix(std::move(rows));
}

json covariance_to_json(const CovarianceMatrix& c) { return {{"covariance", c.rows()}}; }

json pairing_to_json(const Pairing& pi) {
    json pairs = json::array();
    for (auto [a, b] : pi.pairs()) pairs.push_back({a, b});
    return pairs;
}

Pairing pairing_from_json(const json& j) {
    if (!j.is_array()) parse_fail("pairing must be an array of pairs");
    std::vector<Pairing::Pair> pairs;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) parse_fail("each pair must have two elements");
        pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
    return Pairing(std::move(pairs));
}

json moment_report_to_json(const MomentReport& r, bool with_contributions) {
    json out = {{"engine", to_string(r.engine)},
                {"word", r.word},
                {"blocks", r.block_structure.sizes()},
                {"total", complex_json(r.total)},
                {"pairings", r.contributions.size()},
                {"warnings", r.warnings}};
    if (with_contributions) {
        json list = json::array();
        for (const auto& c : r.contributions) {
            json item = complex_json(c.value);
            item["pairs"] = pairing_to_json(c.pairing);
            list.push_back(std::move(item));
        }
        out["contributions"] = std::move(list);
    }
    return out;
}

MomentReport moment_report_from_json(const json& j) {
    MomentReport r;
    r.engine = parse_engine(j.at("engine").get<std::string>());
    r.word = j.at("word").get<std::vector<int>>();
    r.block_structure = BlockStructure(j.at("blocks").get<std::vector<int>>());
    r.total = complex_from(j.at("total"));
    r.warnings = j.value("warnings", std::vector<std::string>{});
    if (j.contains("contributions")) {
        for (const auto& c : j.at("contributions")) {
            r.contributions.push_back({pairing_from_json(c.at("pairs")), complex_from(c)});
        }
    }
    return r;
}

std::string moment_report_csv_header() { return "word,engine,pairings,total_re,total_im"; }

std::string moment_report_csv_row(const MomentReport& r) {
    return format_word(r.word) + "," + to_string(r.engine) + "," + std::to_string(r.contributions.size()) +
           "," + format12(r.total.real()) + "," + format12(r.total.imag());
}

json convergence_report_to_json(const ConvergenceReport& r) {
    json per_k = json::array();
    auto round_vec = [](const std::vector<double>& v) {
        std::vector<double> out;
        for (double x : v) out.push_back(round12(x));
        return out;
    };
    auto round_mat = [&](const std::vector<std::vector<double>>& m) {
        std::vector<std::vector<double>> out;
        for (const auto& v : m) out.push_back(round_vec(v));
        return out;
    };
    for (const auto& d : r.per_k) {
        per_k.push_back({{"k", d.k},
                         {"covariance", round_mat(d.covariance)},
                         {"fourth_moments", round_vec(d.fourth_moments)},
                         {"fourth_moment_gaps", round_vec(d.fourth_moment_gaps)},
                         {"contraction_norms", round_mat(d.contraction_norms)}});
    }
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"k", row.k},
                        {"word", format_word(row.word)},
                        {"measured", round12(row.measured)},
                        {"target", round12(row.target)},
                        {"gap", round12(row.gap)},
                        {"engine", to_string(row.engine)}});
    }
    return {{"mode", r.mode},
            {"family", r.family},
            {"norm_bound", round12(r.norm_bound)},
            {"converged", r.converged},
            {"rate_note", r.rate_note},
            {"per_k", per_k},
            {"rows", rows}};
}

ConvergenceReport convergence_report_from_json(const json& j) {
    ConvergenceReport r;
    r.mode = j.at("mode").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.norm_bound = j.at("norm_bound").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.rate_note = j.at("rate_note").get<std::string>();
    for (const auto& d : j.at("per_k")) {
        KDiagnostics diag;
        diag.k = d.at("k").get<int>();
        diag.covariance = d.at("covariance").get<std::vector<std::vector<double>>>();
        diag.fourth_moments = d.at("fourth_moments").get<std::vector<double>>();
        diag.fourth_moment_gaps = d.at("fourth_moment_gaps").get<std::vector<double>>();
        diag.contraction_norms = d.at("contraction_norms").get<std::vector<std::vector<double>>>();
        r.per_k.push_back(std::move(diag));
    }
    for (const auto& row : j.at("rows")) {
        r.rows.push_back({row.at("k").get<int>(), parse_word(row.at("word").get<std::string>()),
                          row.at("measured").get<double>(), row.at("target").get<double>(),
                          row.at("gap").get<double>(), parse_engine(row.at("engine").get<std::string>())});
    }
    return r;
}

std::string convergence_report_to_csv(const ConvergenceReport& r) {
    std::string out = "k,word,measured,target,gap,engine\n";
    for (const auto& row : r.rows) {
        // Multi-digit words contain commas and are quoted.
        std::string w = format_word(row.word);
        if (w.find(',') != std::string::npos) w = "\"" + w + "\"";
        out += std::to_string(row.k) + "," + w + "," + format12(row.measured) + "," + format12(row.target) +
               "," + format12(row.gap) + "," + to_string(row.engine) + "\n";
    }
    return out;
}

std::vector<MomentRow> convergence_rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "k,word,measured,target,gap,engine") parse_fail("bad CSV header");
    std::vector<MomentRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cur;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') quoted = !quoted;
            else if (ch == ',' && !quoted) {
                cells.push_back(cur);
                cur.clear();
            } else cur += ch;
        }
        cells.push_back(cur);
        if (cells.size() != 6) parse_fail("CSV row must have 6 columns: " + line);
        rows.push_back({std::stoi(cells[0]), parse_word(cells[1]), std::stod(cells[2]), std::stod(cells[3]),
                        std::stod(cells[4]), parse_engine(cells[5])});
    }
    return rows;
}

json empirical_moments_to_json(const std::vector<EmpiricalMoment>& rows, const SimConfig& cfg) {
    json list = json::array();
    for (const auto& r : rows) {
        list.push_back({{"word", format_word(r.word)}, {"mean", round12(r.mean)}, {"stderr", round12(r.std_error)}});
    }
    return {{"dim", cfg.dim},
            {"samples", cfg.samples},
            {"seed", cfg.seed},
            {"covariance", cfg.covariance.rows()},
            {"moments", list}};
}

std::vector<EmpiricalMoment> empirical_moments_from_json(const json& j) {
    std::vector<EmpiricalMoment> out;
    for (const auto& r : j.at("moments")) {
        out.push_back({parse_word(r.at("word").get<std::string>()), r.at("mean").get<double>(),
                       r.at("stderr").get<double>()});
    }
    return out;
}

std::string empirical_moments_to_csv(const std::vector<EmpiricalMoment>& rows) {
    std::string out = "word,mean,stderr\n";
    for (const auto& r : rows) {
        std::string w = format_word(r.word);
        if (w.find(',') != std::string::npos) w = "\"" + w + "\"";
        out += w + "," + format12(r.mean) + "," + format12(r.std_error) + "\n";
    }
    return out;
}

json schemas() {
    const json complex_schema = {{"type", "object"},
                                 {"required", {"re", "im"}},
                                 {"properties", {{"re", {{"type", "number"}}}, {"im", {{"type", "number"}}}}}};
    json kernel = {
        {"$schema", "http://json-schema.org/draft-07/schema#"},
        {"title", "StepKernel"},
        {"type", "object"},
        {"required", {"order", "grid", "coeffs"}},
        {"properties",
         {{"order", {{"type", "integer"}, {"minimum", 0}}},
          {"grid",
           {{"type", "object"},
            {"required", {"delta", "cells"}},
            {"properties",
             {{"delta", {{"type", "number"}, {"exclusiveMinimum", 0}}},
              {"cells", {{"type", "integer"}, {"minimum", 1}}}}}}},
          {"coeffs",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"idx", "re"}},
              {"properties",
               {{"idx", {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 0}}}}},
                {"re", {{"type", "number"}}},
                {"im", {{"type", "number"}}}}}}}}}}}};
    json moment = {
        {"$schema", "http://json-schema.org/draft-07/schema#"},
        {"title", "MomentReport"},
        {"type", "object"},
        {"required", {"engine", "word", "blocks", "total", "pairings"}},
        {"properties",
         {{"engine", {{"enum", {"free", "classical"}}}},
          {"word", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
          {"blocks", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
          {"total", complex_schema},
          {"pairings", {{"type", "integer"}}},
          {"warnings", {{"type", "array"}, {"items", {{"type", "string"}}}}},
          {"contributions",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"pairs", "re", "im"}},
              {"properties",
               {{"pairs", {{"type", "array"}, {"items", {{"type", "array"}, {"minItems", 2}, {"maxItems", 2}}}}},
                {"re", {{"type", "number"}}},
                {"im", {{"type", "number"}}}}}}}}}}}};
    json row = {{"type", "object"},
                {"required", {"k", "word", "measured", "target", "gap", "engine"}},
                {"properties",
                 {{"k", {{"type", "integer"}}},
                  {"word", {{"type", "string"}}},
                  {"measured", {{"type", "number"}}},
                  {"target", {{"type", "number"}}},
                  {"gap", {{"type", "number"}, {"minimum", 0}}},
                  {"engine", {{"enum", {"free", "classical"}}}}}}};
    json convergence = {{"$schema", "http://json-schema.org/draft-07/schema#"},
                        {"title", "ConvergenceReport"},
                        {"type", "object"},
                        {"required", {"mode", "family", "norm_bound", "converged", "per_k", "rows"}},
                        {"properties",
                         {{"mode", {{"enum", {"component", "joint", "transfer"}}}},
                          {"family", {{"type", "string"}}},
                          {"norm_bound", {{"type", "number"}}},
                          {"converged", {{"type", "boolean"}}},
                          {"rate_note", {{"type", "string"}}},
                          {"per_k", {{"type", "array"}}},
                          {"rows", {{"type", "array"}, {"items", row}}}}}};
    json sim = {{"$schema", "http://json-schema.org/draft-07/schema#"},
                {"title", "EmpiricalMoments"},
                {"type", "object"},
                {"required", {"dim", "samples", "seed", "covariance", "moments"}},
                {"properties",
                 {{"dim", {{"type", "integer"}, {"minimum", 2}}},
                  {"samples", {{"type", "integer"}, {"minimum", 1}}},
                  {"seed", {{"type", "integer"}}},
                  {"covariance", {{"type", "array"}}},
                  {"moments",
                   {{"type", "array"},
                    {"items",
                     {{"type", "object"},
                      {"required", {"word", "mean", "stderr"}},
                      {"properties",
                       {{"word", {{"type", "string"}}},
                        {"mean", {{"type", "number"}}},
                        {"stderr", {{"type", "number"}, {"minimum", 0}}}}}}}}}}}};
    return {{"kernel", kernel}, {"moment_report", moment}, {"convergence_report", convergence}, {"sim_report", sim}};
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(e.what());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw Error(ErrorKind::InvalidArgument, "write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace wigner::io
