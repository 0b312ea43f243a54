#pragma once

#include <string>

#include "spl/image.hpp"

namespace spl {

/// Decodes a PNG (8/16-bit greyscale or RGB, no palette, no alpha) or a
/// binary PPM (P6). The result is tagged Range::Unit with samples
/// raw / max_value (255 or 65535 for PNG, the header maxval for PPM).
///
/// Throws IoError when the file cannot be read and FormatError when its
/// contents are not a supported image.
[[nodiscard]] Image load_image(const std::string& path);

/// Writes an 8-bit PNG. Symmetric samples are first mapped to [0, 1];
/// samples are then clamped and quantized as round(s * 255).
/// Throws RangeTagError for Range::Free images and IoError on write failure.
void save_image(const Image& img, const std::string& path);

}  // namespace spl
