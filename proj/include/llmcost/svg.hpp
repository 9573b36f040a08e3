#pragma once

#include <string>
#include <utility>
#include <vector>

namespace llmcost {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // non-finite points are skipped
};

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

/// Minimal line chart for quick looks at sweep and projection output.
std::string line_chart(const std::vector<Series>& series, const ChartOptions& options);

}  // namespace llmcost
