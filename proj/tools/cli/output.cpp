#include "cli/output.hpp"

#include "cg/errors.hpp"

namespace cgcli {

namespace {
constexpr int kMargin = 50;
}

Csv::Csv(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw cg::ConfigError("cannot write " + path.string());
    std::string line;
    for (const auto& h : header) line += h + ',';
    line.back() = '\n';
    out_ << line;
}

Svg::Svg(double xmin, double xmax, double ymin, double ymax, int width, int height)
    : x0_(xmin), x1_(xmax), y0_(ymin), y1_(ymax), w_(width), h_(height) {
    if (!(x1_ > x0_)) x1_ = x0_ + 1;
    if (!(y1_ > y0_)) y1_ = y0_ + 1;
}

double Svg::px(double x) const { return kMargin + (x - x0_) / (x1_ - x0_) * (w_ - 2 * kMargin); }
double Svg::py(double y) const { return h_ - kMargin - (y - y0_) / (y1_ - y0_) * (h_ - 2 * kMargin); }

void Svg::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double stroke,
                   bool dashed) {
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt::format("{:g}", stroke) + "\"";
    if (dashed) body_ += " stroke-dasharray=\"6,4\"";
    body_ += " points=\"";
    for (auto [x, y] : pts) body_ += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
    body_.back() = '"';
    body_ += "/>\n";
}

void Svg::dot(double x, double y, const std::string& color, double r) {
    body_ += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:g}\" fill=\"{}\"/>\n", px(x), py(y), r, color);
}

void Svg::cross(double x, double y, const std::string& color, double r) {
    double X = px(x), Y = py(y);
    body_ += fmt::format("<path d=\"M{:.2f},{:.2f}L{:.2f},{:.2f}M{:.2f},{:.2f}L{:.2f},{:.2f}\" stroke=\"{}\"/>\n", X - r,
                         Y - r, X + r, Y + r, X - r, Y + r, X + r, Y - r, color);
}

void Svg::label(double x, double y, const std::string& text, int size) {
    body_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"{}\" font-family=\"sans-serif\">{}</text>\n", px(x),
                         py(y), size, text);
}

void Svg::axes(const std::string& xlabel, const std::string& ylabel) {
    double bx = kMargin, by = h_ - kMargin;
    body_ += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n", bx,
                         kMargin, w_ - 2 * kMargin, h_ - 2 * kMargin);
    body_ += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\">{}</text>\n", w_ / 2,
                         h_ - 15, xlabel);
    body_ += fmt::format(
        "<text x=\"15\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 15 {})\">{}</text>\n",
        h_ / 2, h_ / 2, ylabel);
    auto tick = [&](double v) { return fmt::format("{:.3g}", v); };
    body_ += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>\n", bx, by + 14, tick(x0_));
    body_ += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>\n", w_ - kMargin - 20, by + 14, tick(x1_));
    body_ += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>\n", 5, by, tick(y0_));
    body_ += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>\n", 5, kMargin + 4, tick(y1_));
}

void Svg::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw cg::ConfigError("cannot write " + path.string());
    out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", w_,
                       h_, w_, h_);
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" << body_ << "</svg>\n";
}

} // namespace cgcli
