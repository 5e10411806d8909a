#include "qpt/series.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qpt {

TimeGrid TimeGrid::parse(const std::string& descriptor) {
    TimeGrid g;
    std::istringstream in(descriptor);
    std::string kind, a, b, c;
    if (!std::getline(in, kind, ':') || !std::getline(in, a, ':') ||
        !std::getline(in, b, ':') || !std::getline(in, c))
        throw std::invalid_argument("time grid: expected kind:t_min:t_max:count, got '" +
                                    descriptor + "'");
    if (kind == "lin")
        g.kind = Kind::linear;
    else if (kind == "log")
        g.kind = Kind::logarithmic;
    else
        throw std::invalid_argument("time grid kind must be 'lin' or 'log'");
    try {
        g.t_min = std::stod(a);
        g.t_max = std::stod(b);
        g.count = std::stoi(c);
    } catch (const std::exception&) {
        throw std::invalid_argument("time grid: bad numeric field in '" + descriptor + "'");
    }
    g.validate();
    return g;
}

void TimeGrid::validate() const {
    if (count < 2) throw std::invalid_argument("time grid: count must be >= 2");
    if (!(t_max > t_min)) throw std::invalid_argument("time grid: t_max must exceed t_min");
    if (kind == Kind::logarithmic && !(t_min > 0.0))
        throw std::invalid_argument("time grid: log grid needs t_min > 0");
}

std::vector<double> TimeGrid::materialize() const {
    validate();
    std::vector<double> t(static_cast<size_t>(count));
    if (kind == Kind::linear) {
        const double step = (t_max - t_min) / (count - 1);
        for (int i = 0; i < count; ++i) t[static_cast<size_t>(i)] = t_min + step * i;
    } else {
        const double l0 = std::log(t_min);
        const double step = (std::log(t_max) - l0) / (count - 1);
        for (int i = 0; i < count; ++i) t[static_cast<size_t>(i)] = std::exp(l0 + step * i);
    }
    t.back() = t_max;
    return t;
}

std::string TimeGrid::descriptor() const {
    std::ostringstream out;
    out << (kind == Kind::linear ? "lin" : "log") << ':' << t_min << ':' << t_max << ':' << count;
    return out.str();
}

SurvivalSeries SurvivalSeries::from_log(std::vector<double> t, std::vector<double> log_m,
                                        SeriesMetadata meta) {
    if (t.size() != log_m.size())
        throw std::invalid_argument("SurvivalSeries: length mismatch");
    SurvivalSeries s;
    s.times = std::move(t);
    s.log_m_values = std::move(log_m);
    s.m_values.resize(s.log_m_values.size());
    for (size_t i = 0; i < s.log_m_values.size(); ++i)
        s.m_values[i] = std::exp(s.log_m_values[i]);
    s.meta = std::move(meta);
    return s;
}

}  // namespace qpt
