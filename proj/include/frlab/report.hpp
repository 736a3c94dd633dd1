#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace frlab {

// Fixed-precision text for doubles so that reruns produce identical files.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string fmt(std::size_t v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(bool v) { return v ? "1" : "0"; }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    template <class... Ts>
    void add(const Ts&... cells) {
        std::vector<std::string> r;
        (r.push_back(cell(cells)), ...);
        if (r.size() != header.size()) throw std::logic_error("row width does not match header");
        rows.push_back(std::move(r));
    }

    std::string str() const {
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& v) {
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
            os << '\n';
        };
        line(header);
        for (auto& r : rows) line(r);
        return os.str();
    }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class T>
    static std::string cell(const T& v) {
        return fmt(v);
    }
};

inline void write_text(const std::filesystem::path& p, const std::string& s) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << s;
}

inline void write_csv(const std::filesystem::path& p, const Table& t) { write_text(p, t.str()); }

// Least-squares line through (log x, log y); slope with its standard error.
struct Fit {
    double slope = 0, intercept = 0, stderr_ = 0;
    std::size_t n = 0;
};

inline Fit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    Fit f;
    f.n = lx.size();
    if (f.n < 2) throw std::invalid_argument("fit needs at least two positive points");
    const double n = static_cast<double>(f.n);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < f.n; ++i) {
        mx += lx[i] / n;
        my += ly[i] / n;
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < f.n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0)) throw std::invalid_argument("fit needs distinct x values");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (f.n > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < f.n; ++i) {
            double r = ly[i] - f.intercept - f.slope * lx[i];
            rss += r * r;
        }
        f.stderr_ = std::sqrt(rss / (n - 2) / sxx);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Self-contained SVG log2-log2 plots

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
};

struct PlotBand {
    enum class Kind { none, slope, level };
    Kind kind = Kind::none;
    double lo = 0, hi = 0;  // slopes through the fit centroid, or y levels
};

struct Plot {
    std::string title, xlabel = "R", ylabel;
    std::vector<PlotSeries> series;
    bool draw_fit = false;
    Fit fit;
    PlotBand band;
};

inline std::string render_svg(const Plot& p) {
    const double W = 640, H = 440, ml = 70, mr = 150, mt = 40, mb = 55;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (auto& s : p.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
            x0 = std::min(x0, std::log2(s.x[i]));
            x1 = std::max(x1, std::log2(s.x[i]));
            y0 = std::min(y0, std::log2(s.y[i]));
            y1 = std::max(y1, std::log2(s.y[i]));
        }
    if (p.band.kind == PlotBand::Kind::level) {
        if (p.band.lo > 0) y0 = std::min(y0, std::log2(p.band.lo));
        if (p.band.hi > 0) y1 = std::max(y1, std::log2(p.band.hi));
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1) y0 -= 0.5, y1 += 0.5;
    x0 = std::floor(x0), x1 = std::ceil(x1), y0 = std::floor(y0), y1 = std::ceil(y1);
    auto sx = [&](double lx) { return ml + (lx - x0) / (x1 - x0) * (W - ml - mr); };
    auto sy = [&](double ly) { return H - mb - (ly - y0) / (y1 - y0) * (H - mt - mb); };
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", v);
        return std::string(b);
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << p.title << "</text>\n";

    // clip region for lines and bands
    o << "<clipPath id=\"plot\"><rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
      << "\" height=\"" << H - mt - mb << "\"/></clipPath>\n";

    if (p.band.kind == PlotBand::Kind::slope && p.draw_fit) {
        // wedge through the centroid of the fitted points
        double cx = 0, cy = 0;
        std::size_t n = 0;
        for (auto& s : p.series)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (s.x[i] > 0 && s.y[i] > 0) {
                    cx += std::log2(s.x[i]);
                    cy += p.fit.intercept / std::log(2.0) + p.fit.slope * std::log2(s.x[i]);
                    ++n;
                }
        cx /= n, cy /= n;
        auto at = [&](double s, double lx) { return cy + s * (lx - cx); };
        o << "<polygon clip-path=\"url(#plot)\" fill=\"#cfe3f7\" fill-opacity=\"0.6\" points=\"" << num(sx(x0))
          << "," << num(sy(at(p.band.lo, x0))) << " " << num(sx(x1)) << "," << num(sy(at(p.band.lo, x1))) << " "
          << num(sx(x1)) << "," << num(sy(at(p.band.hi, x1))) << " " << num(sx(x0)) << ","
          << num(sy(at(p.band.hi, x0))) << "\"/>\n";
    } else if (p.band.kind == PlotBand::Kind::level) {
        double lo = p.band.lo > 0 ? std::log2(p.band.lo) : y0, hi = p.band.hi > 0 ? std::log2(p.band.hi) : y1;
        o << "<rect clip-path=\"url(#plot)\" fill=\"#cfe3f7\" fill-opacity=\"0.6\" x=\"" << num(sx(x0)) << "\" y=\""
          << num(sy(hi)) << "\" width=\"" << num(sx(x1) - sx(x0)) << "\" height=\"" << num(sy(lo) - sy(hi))
          << "\"/>\n";
    }

    // axes and ticks
    o << "<g stroke=\"#333\">\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb << "\"/>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb << "\"/>\n";
    o << "</g>\n";
    const int xstep = std::max(1, static_cast<int>((x1 - x0) / 10) + 1);
    const int ystep = std::max(1, static_cast<int>((y1 - y0) / 10) + 1);
    for (int t = static_cast<int>(x0); t <= static_cast<int>(x1); t += xstep)
        o << "<text x=\"" << num(sx(t)) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\">2^" << t
          << "</text>\n";
    for (int t = static_cast<int>(y0); t <= static_cast<int>(y1); t += ystep)
        o << "<text x=\"" << ml - 8 << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">2^" << t
          << "</text>\n";
    o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << p.xlabel
      << " (log2)</text>\n";
    o << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + H - mb) / 2 << ")\">" << p.ylabel << " (log2)</text>\n";

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const auto& s = p.series[k];
        const char* c = colors[k % 7];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (s.x[i] > 0 && s.y[i] > 0) {
                double X = sx(std::log2(s.x[i])), Y = sy(std::log2(s.y[i]));
                pts += num(X) + "," + num(Y) + " ";
                o << "<circle cx=\"" << num(X) << "\" cy=\"" << num(Y) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
            }
        if (!pts.empty())
            o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.2\" points=\"" << pts << "\"/>\n";
        o << "<text x=\"" << W - mr + 12 << "\" y=\"" << mt + 16 * (k + 1) << "\" fill=\"" << c << "\">" << s.name
          << "</text>\n";
    }
    if (p.draw_fit) {
        auto fy = [&](double lx) { return (p.fit.intercept + p.fit.slope * lx * std::log(2.0)) / std::log(2.0); };
        o << "<line clip-path=\"url(#plot)\" stroke=\"black\" stroke-dasharray=\"6 4\" x1=\"" << num(sx(x0))
          << "\" y1=\"" << num(sy(fy(x0))) << "\" x2=\"" << num(sx(x1)) << "\" y2=\"" << num(sy(fy(x1)))
          << "\"/>\n";
        o << "<text x=\"" << W - mr + 12 << "\" y=\"" << mt + 16 * (p.series.size() + 1)
          << "\">fit slope " << num(p.fit.slope) << "</text>\n";
    }
    if (p.band.kind != PlotBand::Kind::none)
        o << "<text x=\"" << W - mr + 12 << "\" y=\"" << mt + 16 * (p.series.size() + 2) << "\">band ["
          << num(p.band.lo) << ", " << num(p.band.hi) << "]</text>\n";
    o << "</svg>\n";
    return o.str();
}

inline void write_svg(const std::filesystem::path& path, const Plot& p) { write_text(path, render_svg(p)); }

}  // namespace frlab
