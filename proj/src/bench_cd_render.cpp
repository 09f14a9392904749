#include "adbench/bench/cd_render.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "adbench/bench/csv.hpp"

namespace adbench::bench {

namespace {

struct Layout {
    static constexpr double width = 800.0;
    static constexpr double margin_x = 160.0;
    static constexpr double axis_y = 60.0;
    static constexpr double bar_start_y = 80.0;
    static constexpr double bar_step = 14.0;
    static constexpr double label_step = 22.0;
};

double rank_to_x(double rank, double k) {
    // rank 1 on the left
    return Layout::margin_x +
           (rank - 1.0) / (k - 1.0) * (Layout::width - 2.0 * Layout::margin_x);
}

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

eval::CdResult render_cd(std::span<const eval::MetricRecord> records, eval::Metric metric,
                         double alpha, const std::filesystem::path& out_path) {
    const auto table = eval::rank_matrix(records, metric);
    const eval::CdResult cd = eval::cd_cliques(table, alpha);
    const std::size_t k = cd.algorithms.size();
    const double kd = static_cast<double>(k);

    // algorithms sorted by average rank, best first
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return cd.average_rank[a] < cd.average_rank[b]; });

    // multi-member cliques become the horizontal bars
    std::vector<std::pair<double, double>> bars;
    for (const auto& clique : cd.cliques) {
        if (clique.size() < 2) continue;
        double lo = 1e300, hi = -1e300;
        for (std::size_t member : clique) {
            lo = std::min(lo, cd.average_rank[member]);
            hi = std::max(hi, cd.average_rank[member]);
        }
        bars.emplace_back(lo, hi);
    }

    const std::size_t left_count = (k + 1) / 2;
    const double label_rows = static_cast<double>(left_count);
    const double height = Layout::bar_start_y + static_cast<double>(bars.size()) * Layout::bar_step +
                          label_rows * Layout::label_step + 40.0;

    std::ofstream svg(out_path, std::ios::binary);
    require(svg.good(), Err::IoError, "cannot write " + out_path.string());
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Layout::width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << Layout::width << " " << height
        << "\">\n";
    svg << "<style>text{font-family:sans-serif;font-size:12px;}line,path{stroke:#222;}"
           "</style>\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axis with integer ticks
    svg << "<line x1=\"" << rank_to_x(1, kd) << "\" y1=\"" << Layout::axis_y << "\" x2=\""
        << rank_to_x(kd, kd) << "\" y2=\"" << Layout::axis_y << "\" stroke-width=\"1.5\"/>\n";
    for (std::size_t r = 1; r <= k; ++r) {
        const double x = rank_to_x(static_cast<double>(r), kd);
        svg << "<line x1=\"" << x << "\" y1=\"" << Layout::axis_y - 5 << "\" x2=\"" << x
            << "\" y2=\"" << Layout::axis_y << "\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << Layout::axis_y - 10
            << "\" text-anchor=\"middle\">" << r << "</text>\n";
    }

    // clique bars
    double bar_y = Layout::bar_start_y;
    for (const auto& [lo, hi] : bars) {
        svg << "<line x1=\"" << rank_to_x(lo, kd) - 3 << "\" y1=\"" << bar_y << "\" x2=\""
            << rank_to_x(hi, kd) + 3 << "\" y2=\"" << bar_y
            << "\" stroke-width=\"4\" stroke=\"#444\"/>\n";
        bar_y += Layout::bar_step;
    }

    // labels: best half on the left, rest on the right, classic CD style
    const double label_base = bar_y + 16.0;
    for (std::size_t pos = 0; pos < k; ++pos) {
        const std::size_t alg = order[pos];
        const double rank_x = rank_to_x(cd.average_rank[alg], kd);
        const bool left = pos < left_count;
        const double row = static_cast<double>(left ? pos : k - 1 - pos);
        const double label_y = label_base + row * Layout::label_step;
        const double label_x = left ? Layout::margin_x - 120.0 : Layout::width - Layout::margin_x + 120.0;
        svg << "<path fill=\"none\" d=\"M " << rank_x << " " << Layout::axis_y << " V " << label_y - 4
            << " H " << (left ? label_x + 4 : label_x - 4) << "\"/>\n";
        svg << "<text x=\"" << label_x << "\" y=\"" << label_y << "\" text-anchor=\""
            << (left ? "end" : "start") << "\">" << svg_escape(cd.algorithms[alg]) << " ("
            << format_double(cd.average_rank[alg]) << ")</text>\n";
    }
    svg << "</svg>\n";
    require(svg.good(), Err::IoError, "write failed for " + out_path.string());

    // text companion
    std::filesystem::path txt_path = out_path;
    txt_path.replace_extension(".txt");
    std::ofstream txt(txt_path, std::ios::binary);
    require(txt.good(), Err::IoError, "cannot write " + txt_path.string());
    txt << "friedman_statistic " << format_double(cd.friedman_statistic) << "\n";
    txt << "friedman_p " << format_double(cd.friedman_p) << "\n";
    txt << "alpha " << format_double(cd.alpha) << "\n\n";
    txt << "ranks\n";
    for (std::size_t pos = 0; pos < k; ++pos)
        txt << cd.algorithms[order[pos]] << " " << format_double(cd.average_rank[order[pos]])
            << "\n";
    txt << "\nadjusted_p\n";
    for (std::size_t i = 0; i < k; ++i) {
        txt << cd.algorithms[i];
        for (std::size_t j = 0; j < k; ++j) txt << " " << format_double(cd.adjusted_p[i][j]);
        txt << "\n";
    }
    txt << "\ncliques\n";
    for (const auto& clique : cd.cliques) {
        for (std::size_t m = 0; m < clique.size(); ++m)
            txt << (m ? " " : "") << cd.algorithms[clique[m]];
        txt << "\n";
    }
    require(txt.good(), Err::IoError, "write failed for " + txt_path.string());
    return cd;
}

} // namespace adbench::bench
