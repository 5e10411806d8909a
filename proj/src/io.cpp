#include "qpt/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qpt::io {

std::string float17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

void write_series_csv(std::ostream& out, const SurvivalSeries& s) {
    out << "# schema: qpt-echo/series v1\n";
    out << "# model: " << s.meta.model << "\n";
    out << "# grid: " << s.meta.grid_descriptor << "\n";
    out << "# lambda: " << float17(s.meta.quench.lambda) << "\n";
    out << "# lambda_prime: " << float17(s.meta.quench.lambda_prime) << "\n";
    out << "# lambda_c: " << float17(s.meta.quench.lambda_c) << "\n";
    out << "# epsilon: " << float17(s.meta.quench.epsilon) << "\n";
    out << "# delta: " << float17(s.meta.quench.delta) << "\n";
    out << "# workers: " << s.meta.workers << "\n";
    out << "# kernel: " << s.meta.kernel_backend << "\n";
    for (const auto& [k, v] : s.meta.extra) out << "# " << k << ": " << v << "\n";
    for (const auto& w : s.meta.warnings) out << "# warning: " << w << "\n";
    out << "t,M,lnM\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
        out << float17(s.times[i]) << ',' << float17(s.m_values[i]) << ','
            << float17(s.log_m_values[i]) << "\n";
}

void write_series_csv_file(const std::string& path, const SurvivalSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_series_csv(out, series);
}

std::string series_csv_string(const SurvivalSeries& series) {
    std::ostringstream out;
    write_series_csv(out, series);
    return out.str();
}

SurvivalSeries read_series_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    SurvivalSeries s;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(": ");
            if (colon != std::string::npos) {
                const std::string key = line.substr(2, colon - 2);
                const std::string val = line.substr(colon + 2);
                if (key == "model")
                    s.meta.model = val;
                else if (key == "grid")
                    s.meta.grid_descriptor = val;
                else if (key == "lambda")
                    s.meta.quench.lambda = std::stod(val);
                else if (key == "lambda_prime")
                    s.meta.quench.lambda_prime = std::stod(val);
                else if (key == "lambda_c")
                    s.meta.quench.lambda_c = std::stod(val);
                else if (key == "epsilon")
                    s.meta.quench.epsilon = std::stod(val);
                else if (key == "delta")
                    s.meta.quench.delta = std::stod(val);
                else
                    s.meta.extra[key] = val;
            }
            continue;
        }
        if (!header_seen) {
            if (line != "t,M,lnM")
                throw std::runtime_error("series CSV: unexpected header row '" + line + "'");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
            throw std::runtime_error("series CSV: malformed row '" + line + "'");
        s.times.push_back(std::stod(a));
        s.m_values.push_back(std::stod(b));
        s.log_m_values.push_back(std::stod(c));
    }
    if (!header_seen) throw std::runtime_error("series CSV: missing header row");
    s.meta.quench.delta_lambda = s.meta.quench.delta - s.meta.quench.epsilon;
    s.meta.quench.eta = s.meta.quench.epsilon / s.meta.quench.delta_lambda;
    return s;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fit_report_json(const fitscale::FitReport& report) {
    nlohmann::json j;
    switch (report.form) {
        case fitscale::FitReport::Form::m1: j["form"] = "m1"; break;
        case fitscale::FitReport::Form::exponential: j["form"] = "exponential"; break;
        case fitscale::FitReport::Form::powerlaw_slope: j["form"] = "powerlaw-slope"; break;
    }
    j["parameters"] = report.parameters;
    j["stderr"] = report.stderrs;
    j["r_squared"] = report.r_squared;
    j["window"] = {report.window.t_min, report.window.t_max};
    j["residual_max"] = report.residual_max;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    return j.dump(2);
}

}  // namespace qpt::io
