#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ising/experiments.hpp"

namespace ising {

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

const std::map<std::string, std::string>& method_colors() {
    static const std::map<std::string, std::string> colors = {
        {"l1-lr", "#1f77b4"},   {"l1constr-lr", "#ff7f0e"}, {"l1-ise", "#2ca02c"},
        {"l0l2-lr", "#d62728"}, {"l0l2-ise", "#9467bd"},
    };
    return colors;
}

std::string color_of(const std::string& token) {
    const auto& colors = method_colors();
    const auto it = colors.find(token);
    return it != colors.end() ? it->second : "#333333";
}

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Minimal line plot: one polyline per series, ticks at the data coordinates.
void write_svg_lines(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series, double y_min, double y_max) {
    constexpr double width = 640, height = 420;
    constexpr double left = 70, right = 600, top = 50, bottom = 360;

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    std::set<double> x_ticks;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            x_ticks.insert(x);
        }
    }
    if (!std::isfinite(x_min)) return;  // nothing to plot
    if (x_max == x_min) x_max = x_min + 1;

    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
    auto sy = [&](double y) { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 40
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    svg << "<text x=\"20\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << (top + bottom) / 2 << ")\">"
        << y_label << "</text>\n";

    for (double x : x_ticks) {
        svg << "<line x1=\"" << sx(x) << "\" y1=\"" << bottom << "\" x2=\"" << sx(x)
            << "\" y2=\"" << bottom + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << sx(x) << "\" y=\"" << bottom + 18 << "\" text-anchor=\"middle\">"
            << fmt(x) << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double y = y_min + (y_max - y_min) * i / 4.0;
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(y) << "\" x2=\"" << left
            << "\" y2=\"" << sy(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">"
            << fmt(y) << "</text>\n";
    }

    double legend_y = top + 6;
    for (const Series& s : series) {
        if (s.points.empty()) continue;
        const std::string color = color_of(s.label);
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
        for (const auto& [x, y] : s.points) svg << sx(x) << ',' << sy(y) << ' ';
        svg << "\"/>\n";
        for (const auto& [x, y] : s.points) {
            svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"2.5\" fill=\""
                << color << "\"/>\n";
        }
        svg << "<line x1=\"" << right - 120 << "\" y1=\"" << legend_y << "\" x2=\""
            << right - 96 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
            << "\" stroke-width=\"1.8\"/>\n";
        svg << "<text x=\"" << right - 90 << "\" y=\"" << legend_y + 4 << "\">" << s.label
            << "</text>\n";
        legend_y += 16;
    }
    svg << "</svg>\n";

    auto out = open_out(path);
    out << svg.str();
}

}  // namespace

void emit_report(const std::vector<RunRecord>& records, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::vector<RunRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const RunRecord& a, const RunRecord& b) {
        if (a.p != b.p) return a.p < b.p;
        if (a.n != b.n) return a.n < b.n;
        if (a.repetition != b.repetition) return a.repetition < b.repetition;
        return method_token(a.method) < method_token(b.method);
    });

    {
        auto out = open_out(out_dir / "records.csv");
        out << "method,p,n,repetition,seed,recovered,l2_error\n";
        for (const RunRecord& r : sorted) {
            out << method_token(r.method) << ',' << r.p << ',' << r.n << ',' << r.repetition
                << ',' << r.seed << ',' << (r.recovered ? 1 : 0) << ',' << fmt(r.l2_error)
                << '\n';
        }
    }

    std::set<int> p_values;
    std::set<Method> methods;
    std::set<int> n_values;
    for (const RunRecord& r : sorted) {
        p_values.insert(r.p);
        methods.insert(r.method);
        n_values.insert(r.n);
    }

    for (int p : p_values) {
        std::vector<Series> series;
        for (Method m : methods) {
            Series s;
            s.label = method_token(m);
            auto csv = open_out(out_dir / ("phase_transition_" + s.label + "_" +
                                           std::to_string(p) + ".csv"));
            csv << "n,success_ratio,mean_l2,sd_l2\n";
            for (int n : n_values) {
                std::vector<double> l2;
                int total = 0, recovered = 0;
                for (const RunRecord& r : sorted) {
                    if (r.method == m && r.p == p && r.n == n) {
                        ++total;
                        recovered += r.recovered;
                        if (std::isfinite(r.l2_error)) l2.push_back(r.l2_error);
                    }
                }
                if (total == 0) continue;
                const double ratio = static_cast<double>(recovered) / total;
                double mean = 0.0, sd = 0.0;
                if (!l2.empty()) {
                    for (double v : l2) mean += v;
                    mean /= static_cast<double>(l2.size());
                    if (l2.size() > 1) {
                        for (double v : l2) sd += (v - mean) * (v - mean);
                        sd = std::sqrt(sd / static_cast<double>(l2.size() - 1));
                    }
                }
                csv << n << ',' << fmt(ratio) << ',' << (l2.empty() ? "" : fmt(mean)) << ','
                    << (l2.empty() ? "" : fmt(sd)) << '\n';
                s.points.emplace_back(n, ratio);
            }
            series.push_back(std::move(s));
        }
        if (!series.empty()) {
            write_svg_lines(out_dir / ("phase_transition_" + std::to_string(p) + ".svg"),
                            "p = " + std::to_string(p), "samples n", "success ratio", series,
                            0.0, 1.0);
        }
    }

    {
        auto out = open_out(out_dir / "complexity.csv");
        out << "p,method,m_star,n_star\n";
        std::vector<Series> series;
        for (Method m : methods) {
            std::map<int, std::optional<int>> m_star;
            for (int p : p_values) m_star[p] = sample_complexity(sorted, m, p);
            const auto n_star = cumulative_complexity(m_star);
            Series s;
            s.label = method_token(m);
            for (int p : p_values) {
                out << p << ',' << s.label << ','
                    << (m_star[p] ? std::to_string(*m_star[p]) : "") << ','
                    << (n_star.at(p) ? std::to_string(*n_star.at(p)) : "") << '\n';
                if (n_star.at(p)) s.points.emplace_back(p, *n_star.at(p));
            }
            series.push_back(std::move(s));
        }
        if (!records.empty()) {
            double y_max = 1.0;
            for (const Series& s : series) {
                for (const auto& [x, y] : s.points) y_max = std::max(y_max, y);
            }
            write_svg_lines(out_dir / "complexity.svg", "sample complexity", "nodes p",
                            "n*(p)", series, 0.0, y_max * 1.05);
        }
    }
}

}  // namespace ising
