#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "newton_atlas/dynamics.hpp"

namespace newton_atlas {

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

struct Image {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // rgb, row major, 3 bytes per pixel

    static Image blank(int w, int h, Rgb fill = {0, 0, 0});
    Rgb get(int x, int y) const;
    void set(int x, int y, Rgb c);
    bool operator==(const Image&) const = default;
};

/// Base colors per basin label. Root basins get saturated hues evenly spaced
/// around the wheel, infinity petals desaturated grays, undecided pixels a
/// near-black distinct from every basin.
struct ColorScheme {
    std::vector<Rgb> root_colors;
    std::vector<Rgb> petal_colors;
    Rgb undecided{14, 14, 20};
    double shading = 0.55;  // iteration-count dimming in [0, 1]

    static ColorScheme default_for(int root_count, int petal_count);
};

Rgb hsv_to_rgb(double h, double s, double v);

/// One pixel per raster cell; basin pixels dimmed by iteration count when
/// shading > 0, undecided pixels drawn flat.
Image colorize(const BasinRaster& raster, const ColorScheme& scheme);

struct OverlayStyle {
    Rgb color{0, 0, 0};
    int dot_radius = 3;
};

/// Filled dots at the given plane points (region-to-pixel affine transform of
/// the raster); out-of-region points are skipped.
Image overlay_points(Image image, const BasinRaster& raster, std::span<const Complex> points,
                     const OverlayStyle& style = {});

/// Polyline through the given plane points; segments are clipped to the
/// image.
Image overlay_polyline(Image image, const BasinRaster& raster, std::span<const Complex> points,
                       const OverlayStyle& style = {});

/// Binary PPM (P6, maxval 255), written atomically. Throws IOFailure on
/// zero-size images or unwritable paths.
void write_ppm(const Image& image, const std::string& path);

Image read_ppm(const std::string& path);

}  // namespace newton_atlas
