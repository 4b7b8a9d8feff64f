#include "wosqmc/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wosqmc/error.hpp"

namespace wosqmc {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_estimates_csv(std::ostream& out, const StudyTable& table) {
    out << "example,method,n,replicate,estimate\n";
    for (const StudyRow& r : table.rows) {
        out << r.example << ',' << r.method << ',' << r.n << ',' << r.replicate << ',' << format_number(r.estimate)
            << '\n';
    }
}

void write_variance_csv(std::ostream& out, const std::vector<CellStats>& cells) {
    out << "method,n,variance,mse\n";
    for (const CellStats& c : cells) {
        out << c.method << ',' << c.n << ',' << format_number(c.variance) << ',';
        if (c.mse) out << format_number(*c.mse);
        out << '\n';
    }
}

std::vector<CellStats> read_variance_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing-data-file", "cannot open " + path.string());
    std::vector<CellStats> cells;
    std::string line;
    std::size_t lineno = 0;
    auto bad = [&](const std::string& what) {
        throw Error("parse-error", path.string() + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line.rfind("method,n,variance", 0) != 0) bad("expected header method,n,variance,mse");
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (line.back() == ',') f.emplace_back();
        if (f.size() < 3 || f.size() > 4) bad("expected 3 or 4 fields");
        CellStats c;
        c.method = f[0];
        try {
            std::size_t used = 0;
            c.n = std::stoull(f[1], &used);
            if (used != f[1].size()) bad("bad n");
            c.variance = std::stod(f[2]);
            if (f.size() == 4 && !f[3].empty()) c.mse = std::stod(f[3]);
        } catch (const std::logic_error&) {
            bad("bad number");
        }
        cells.push_back(c);
    }
    if (cells.empty()) bad("no rows");
    return cells;
}

void write_probe_csv(std::ostream& out, const std::vector<ProbeResult>& rows) {
    out << "k,m,flagged,total,volume_estimate\n";
    for (const ProbeResult& r : rows) {
        out << r.k << ',' << r.m << ',' << r.flagged << ',' << r.total << ',' << format_number(r.volume_estimate)
            << '\n';
    }
}

nlohmann::json fit_to_json(const RegressionFit& fit) {
    return {{"method", fit.method}, {"alpha", fit.alpha}, {"beta", fit.beta},
            {"n_min", fit.n_min},   {"n_max", fit.n_max}, {"points", fit.points}};
}

RegressionFit fit_from_json(const nlohmann::json& j) {
    try {
        RegressionFit f;
        f.method = j.at("method").get<std::string>();
        f.alpha = j.at("alpha").get<double>();
        f.beta = j.at("beta").get<double>();
        f.n_min = j.value("n_min", std::uint64_t{0});
        f.n_max = j.value("n_max", std::uint64_t{0});
        f.points = j.value("points", std::size_t{0});
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config-error", std::string("bad fit entry: ") + e.what());
    }
}

nlohmann::json fits_document(const std::vector<RegressionFit>& fits) {
    nlohmann::json arr = nlohmann::json::array();
    for (const RegressionFit& f : fits) arr.push_back(fit_to_json(f));
    return {{"fits", arr}};
}

std::vector<RegressionFit> load_fits(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing-data-file", "cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config-error", path.string() + ": " + e.what());
    }
    if (!j.contains("fits") || !j.at("fits").is_array() || j.at("fits").empty()) {
        throw Error("config-error", path.string() + ": no 'fits' array");
    }
    std::vector<RegressionFit> out;
    for (const auto& f : j.at("fits")) out.push_back(fit_from_json(f));
    return out;
}

}  // namespace wosqmc
