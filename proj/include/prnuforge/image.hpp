#pragma once

#include <string>

#include "prnuforge/matrix.hpp"

namespace prnuforge {

// Rec. 601 luminance on the 0-255 scale.
double luminance(double r, double g, double b);

// Decode PGM (P2/P5, 8-bit) or PNG (8-bit gray or RGB/RGBA); the format is
// sniffed from the file's magic bytes. RGB collapses to luminance.
GrayImage load_image(const std::string& path);

// Encode by extension: .pgm -> binary P5, .png -> 8-bit grayscale PNG.
// Values are clamped to [0, 255] and rounded at this point only.
void save_image(const GrayImage& img, const std::string& path);

}  // namespace prnuforge
