#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <vector>

namespace hxz::cli {

Svg::Svg(double x0, double x1, double y0, double y1, int width_px)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), w_(width_px),
      h_(static_cast<int>(std::lround(width_px * (y1 - y0) / (x1 - x0)))) {
    body_ << std::fixed << std::setprecision(2);
}

double Svg::px(double x) const { return (x - x0_) / (x1_ - x0_) * w_; }
double Svg::py(double y) const { return (y1_ - y) / (y1_ - y0_) * h_; }

void Svg::line(std::complex<double> a, std::complex<double> b, const std::string& stroke, double width,
               double opacity) {
    body_ << "<line x1=\"" << px(a.real()) << "\" y1=\"" << py(a.imag()) << "\" x2=\"" << px(b.real()) << "\" y2=\""
          << py(b.imag()) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"";
    if (opacity < 1.0) body_ << " stroke-opacity=\"" << std::setprecision(3) << opacity << std::setprecision(2) << "\"";
    body_ << " stroke-linecap=\"round\"/>\n";
}

void Svg::polyline(const std::vector<std::complex<double>>& pts, const std::string& stroke, double width) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\" points=\"";
    for (const auto& p : pts) body_ << px(p.real()) << "," << py(p.imag()) << " ";
    body_ << "\"/>\n";
}

void Svg::dot(std::complex<double> p, double r_px, const std::string& fill, double opacity) {
    body_ << "<circle cx=\"" << px(p.real()) << "\" cy=\"" << py(p.imag()) << "\" r=\"" << r_px << "\" fill=\"" << fill
          << "\"";
    if (opacity < 1.0) body_ << " fill-opacity=\"" << opacity << "\"";
    body_ << "/>\n";
}

void Svg::triangle(std::complex<double> p, double s, const std::string& fill, const std::string& stroke) {
    double x = px(p.real()), y = py(p.imag());
    body_ << "<polygon points=\"" << x << "," << y - s << " " << x - 0.866 * s << "," << y + 0.5 * s << " "
          << x + 0.866 * s << "," << y + 0.5 * s << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
}

void Svg::rect(std::complex<double> lo, std::complex<double> hi, const std::string& fill, double opacity) {
    body_ << "<rect x=\"" << px(lo.real()) << "\" y=\"" << py(hi.imag()) << "\" width=\"" << px(hi.real()) - px(lo.real())
          << "\" height=\"" << py(lo.imag()) - py(hi.imag()) << "\" fill=\"" << fill << "\" fill-opacity=\"" << opacity
          << "\"/>\n";
}

void Svg::text(std::complex<double> p, const std::string& s, int size_px) {
    body_ << "<text x=\"" << px(p.real()) << "\" y=\"" << py(p.imag()) << "\" font-family=\"sans-serif\" font-size=\""
          << size_px << "\">" << s << "</text>\n";
}

// Liang-Barsky
bool Svg::clip(std::complex<double>& a, std::complex<double>& b) const {
    double t0 = 0.0, t1 = 1.0;
    const double dx = b.real() - a.real(), dy = b.imag() - a.imag();
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.real() - x0_, x1_ - a.real(), a.imag() - y0_, y1_ - a.imag()};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return false;
            continue;
        }
        double r = q[k] / p[k];
        if (p[k] < 0.0)
            t0 = std::max(t0, r);
        else
            t1 = std::min(t1, r);
        if (t0 > t1) return false;
    }
    std::complex<double> d(dx, dy);
    b = a + t1 * d;
    a = a + t0 * d;
    return true;
}

std::string Svg::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 " << w_
       << " " << h_ << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << body_.str();
    os << "</svg>\n";
    return os.str();
}

}  // namespace hxz::cli
