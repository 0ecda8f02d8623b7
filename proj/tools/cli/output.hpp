#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

namespace cgcli {

// Fixed-header CSV; doubles round-trip through {:.17g}.
class Csv {
public:
    Csv(const std::filesystem::path& path, const std::vector<std::string>& header);

    template <class... T>
    void row(const T&... v) {
        std::string line;
        ((line += cell(v), line += ','), ...);
        line.back() = '\n';
        out_ << line;
    }

private:
    static std::string cell(double v) { return fmt::format("{:.17g}", v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class I>
        requires std::is_integral_v<I>
    static std::string cell(I v) {
        return fmt::format("{}", v);
    }

    std::ofstream out_;
};

// Minimal SVG plot in data coordinates. Nothing time- or locale-dependent is
// written, so equal inputs give equal bytes.
class Svg {
public:
    Svg(double xmin, double xmax, double ymin, double ymax, int width = 640, int height = 480);

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double stroke = 1.5,
                  bool dashed = false);
    void dot(double x, double y, const std::string& color, double r = 3);
    void cross(double x, double y, const std::string& color, double r = 4);
    void label(double x, double y, const std::string& text, int size = 12);
    void axes(const std::string& xlabel, const std::string& ylabel);
    void save(const std::filesystem::path& path) const;

private:
    double px(double x) const;
    double py(double y) const;

    double x0_, x1_, y0_, y1_;
    int w_, h_;
    std::string body_;
};

} // namespace cgcli
