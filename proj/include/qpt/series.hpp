#pragma once

#include <map>
#include <string>
#include <vector>

#include "qpt/quench.hpp"

namespace qpt {

// time grid descriptor, parseable from "lin:t0:t1:count" / "log:t0:t1:count"
struct TimeGrid {
    enum class Kind { linear, logarithmic };
    Kind kind = Kind::linear;
    double t_min = 0.0;
    double t_max = 1.0;
    int count = 2;

    static TimeGrid parse(const std::string& descriptor);
    std::vector<double> materialize() const;
    std::string descriptor() const;
    void validate() const;
};

struct SeriesMetadata {
    std::string model;
    QuenchSpec quench{};
    std::string grid_descriptor;
    int workers = 1;
    std::string kernel_backend;
    std::vector<std::string> warnings;
    std::map<std::string, std::string> extra;  // model parameters etc., stringified
};

// M(t) and ln M(t) on a shared grid; m_values[i] == exp(log_m_values[i]) by
// construction.
struct SurvivalSeries {
    std::vector<double> times;
    std::vector<double> m_values;
    std::vector<double> log_m_values;
    SeriesMetadata meta;

    // build m from ln m, enforcing the exp() invariant
    static SurvivalSeries from_log(std::vector<double> t, std::vector<double> log_m,
                                   SeriesMetadata meta);
};

}  // namespace qpt
