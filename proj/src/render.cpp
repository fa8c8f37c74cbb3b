#include "newton_atlas/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "newton_atlas/errors.hpp"
#include "newton_atlas/io_util.hpp"

namespace newton_atlas {

Image Image::blank(int w, int h, Rgb fill) {
    Image img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < img.pixels.size(); i += 3) {
        img.pixels[i] = fill.r;
        img.pixels[i + 1] = fill.g;
        img.pixels[i + 2] = fill.b;
    }
    return img;
}

Rgb Image::get(int x, int y) const {
    size_t i = (static_cast<size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
    size_t i = (static_cast<size_t>(y) * width + x) * 3;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
}

Rgb hsv_to_rgb(double h, double s, double v) {
    h = h - std::floor(h);
    double c = v * s;
    double hp = h * 6.0;
    double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        case 5: r = c; b = x; break;
    }
    double m = v - c;
    auto q = [](double t) { return static_cast<uint8_t>(std::lround(255.0 * std::clamp(t, 0.0, 1.0))); };
    return {q(r + m), q(g + m), q(b + m)};
}

ColorScheme ColorScheme::default_for(int root_count, int petal_count) {
    ColorScheme s;
    for (int i = 0; i < root_count; ++i)
        s.root_colors.push_back(hsv_to_rgb(0.58 + static_cast<double>(i) / std::max(root_count, 1), 0.82, 0.92));
    // grays per petal, per the convention that the basin of infinity is gray
    for (int j = 0; j < petal_count; ++j) {
        double v = petal_count > 1 ? 0.78 - 0.33 * j / (petal_count - 1) : 0.66;
        s.petal_colors.push_back(hsv_to_rgb(0.0, 0.0, v));
    }
    return s;
}

Image colorize(const BasinRaster& raster, const ColorScheme& scheme) {
    Image img = Image::blank(raster.width, raster.height);
    for (int y = 0; y < raster.height; ++y) {
        for (int x = 0; x < raster.width; ++x) {
            size_t idx = raster.index(x, y);
            int16_t lab = raster.labels[idx];
            Rgb c;
            if (lab == BasinRaster::kUndecided) {
                c = scheme.undecided;
            } else {
                Rgb base = lab < raster.root_count
                               ? scheme.root_colors.at(lab)
                               : scheme.petal_colors.at(lab - raster.root_count);
                double t = raster.iterations[idx] / (raster.iterations[idx] + 48.0);
                double dim = 1.0 - scheme.shading * t;
                c = {static_cast<uint8_t>(std::lround(base.r * dim)),
                     static_cast<uint8_t>(std::lround(base.g * dim)),
                     static_cast<uint8_t>(std::lround(base.b * dim))};
            }
            img.set(x, y, c);
        }
    }
    return img;
}

namespace {

// continuous pixel coordinates of a plane point
std::pair<double, double> to_pixel(const BasinRaster& r, Complex z) {
    double fx = (z.real() - r.region.center.real() + 0.5 * r.region.width) / r.region.width * r.width;
    double fy = (r.region.center.imag() + 0.5 * r.region.height - z.imag()) / r.region.height * r.height;
    return {fx - 0.5, fy - 0.5};
}

void plot(Image& img, int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
    img.set(x, y, c);
}

void fill_dot(Image& img, double cx, double cy, int radius, Rgb c) {
    int x0 = static_cast<int>(std::lround(cx));
    int y0 = static_cast<int>(std::lround(cy));
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) plot(img, x0 + dx, y0 + dy, c);
}

void draw_segment(Image& img, double x0, double y0, double x1, double y1, Rgb c) {
    double len = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
    int steps = std::max(1, static_cast<int>(std::ceil(len)));
    // skip segments entirely outside a one-pixel margin of the image
    double margin = 1.0;
    if ((x0 < -margin && x1 < -margin) || (y0 < -margin && y1 < -margin) ||
        (x0 > img.width + margin && x1 > img.width + margin) ||
        (y0 > img.height + margin && y1 > img.height + margin))
        return;
    if (steps > 8 * (img.width + img.height)) return;  // far outside geometry
    for (int s = 0; s <= steps; ++s) {
        double f = static_cast<double>(s) / steps;
        plot(img, static_cast<int>(std::lround(x0 + (x1 - x0) * f)),
             static_cast<int>(std::lround(y0 + (y1 - y0) * f)), c);
    }
}

}  // namespace

Image overlay_points(Image image, const BasinRaster& raster, std::span<const Complex> points,
                     const OverlayStyle& style) {
    for (Complex z : points) {
        if (!raster.locate(z)) continue;
        auto [px, py] = to_pixel(raster, z);
        fill_dot(image, px, py, style.dot_radius, style.color);
    }
    return image;
}

Image overlay_polyline(Image image, const BasinRaster& raster, std::span<const Complex> points,
                       const OverlayStyle& style) {
    for (size_t i = 1; i < points.size(); ++i) {
        auto [x0, y0] = to_pixel(raster, points[i - 1]);
        auto [x1, y1] = to_pixel(raster, points[i]);
        draw_segment(image, x0, y0, x1, y1, style.color);
    }
    return image;
}

void write_ppm(const Image& image, const std::string& path) {
    if (image.width <= 0 || image.height <= 0)
        throw IOFailure("write_ppm: P6 requires positive dimensions");
    std::string payload = "P6 " + std::to_string(image.width) + " " +
                          std::to_string(image.height) + " 255\n";
    payload.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
    write_file_atomic(path, payload);
}

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOFailure("read_ppm: cannot open " + path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P6" || w <= 0 || h <= 0 || maxval != 255)
        throw IOFailure("read_ppm: not a maxval-255 P6 file: " + path);
    in.get();  // the single whitespace byte after maxval
    Image img = Image::blank(w, h);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw IOFailure("read_ppm: truncated pixel payload in " + path);
    return img;
}

}  // namespace newton_atlas
