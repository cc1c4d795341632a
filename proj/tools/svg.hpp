#pragma once

#include <complex>
#include <sstream>
#include <string>
#include <vector>

namespace hxz::cli {

// Plane-coordinate canvas; y grows upward in the input and is flipped on output.
class Svg {
public:
    Svg(double x0, double x1, double y0, double y1, int width_px = 800);

    double x0() const { return x0_; }
    double x1() const { return x1_; }
    double y0() const { return y0_; }
    double y1() const { return y1_; }

    void line(std::complex<double> a, std::complex<double> b, const std::string& stroke, double width,
              double opacity = 1.0);
    void polyline(const std::vector<std::complex<double>>& pts, const std::string& stroke, double width);
    void dot(std::complex<double> p, double r_px, const std::string& fill, double opacity = 1.0);
    void triangle(std::complex<double> p, double size_px, const std::string& fill, const std::string& stroke);
    void rect(std::complex<double> lo, std::complex<double> hi, const std::string& fill, double opacity);
    void text(std::complex<double> p, const std::string& s, int size_px = 12);

    // Clips segment ab to the view box; false when nothing remains.
    bool clip(std::complex<double>& a, std::complex<double>& b) const;

    std::string str() const;

private:
    double px(double x) const;
    double py(double y) const;

    double x0_, x1_, y0_, y1_;
    int w_, h_;
    std::ostringstream body_;
};

}  // namespace hxz::cli
