#include "spl/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <vector>

#include "spl/error.hpp"

namespace spl {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::vector<unsigned char> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading image file: " + path);
  return bytes;
}

// ---------------------------------------------------------------------------
// PPM (P6)

class PpmHeaderReader {
 public:
  explicit PpmHeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  long next_int(const std::string& path) {
    skip_space_and_comments();
    long value = 0;
    bool any = false;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) throw FormatError("PPM header value too large: " + path);
      ++pos_;
      any = true;
    }
    if (!any) throw FormatError("malformed PPM header: " + path);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset(const std::string& path) {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw FormatError("malformed PPM header: " + path);
    }
    return pos_ + 1;
  }

  void skip(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

Image decode_ppm(const std::vector<unsigned char>& bytes, const std::string& path) {
  PpmHeaderReader header(bytes);
  header.skip(2);  // "P6"
  const long width = header.next_int(path);
  const long height = header.next_int(path);
  const long maxval = header.next_int(path);
  if (width <= 0 || height <= 0) throw FormatError("PPM has empty dimensions: " + path);
  if (maxval <= 0 || maxval > 65535) throw FormatError("PPM maxval out of range: " + path);
  const std::size_t offset = header.raster_offset(path);

  const Shape shape{static_cast<int>(height), static_cast<int>(width), 3};
  const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
  const std::size_t needed = shape.size() * bytes_per_sample;
  if (bytes.size() < offset || bytes.size() - offset < needed) {
    throw FormatError("PPM raster is truncated: " + path);
  }

  std::vector<double> data(shape.size());
  const double scale = 1.0 / static_cast<double>(maxval);
  const unsigned char* raster = bytes.data() + offset;
  for (int i = 0; i < shape.height; ++i) {
    for (int j = 0; j < shape.width; ++j) {
      for (int c = 0; c < 3; ++c) {
        const std::size_t k =
            (static_cast<std::size_t>(i) * static_cast<std::size_t>(shape.width) +
             static_cast<std::size_t>(j)) * 3 + static_cast<std::size_t>(c);
        unsigned raw = 0;
        if (bytes_per_sample == 1) {
          raw = raster[k];
        } else {
          raw = (static_cast<unsigned>(raster[2 * k]) << 8) | raster[2 * k + 1];  // big-endian
        }
        if (raw > static_cast<unsigned>(maxval)) {
          throw FormatError("PPM sample exceeds maxval: " + path);
        }
        data[(static_cast<std::size_t>(c) * static_cast<std::size_t>(shape.height) +
              static_cast<std::size_t>(i)) * static_cast<std::size_t>(shape.width) +
             static_cast<std::size_t>(j)] = raw * scale;
      }
    }
  }
  return Image(shape, std::move(data), Range::Unit);
}

// ---------------------------------------------------------------------------
// PNG

struct PngMemoryReader {
  const std::vector<unsigned char>* bytes;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
  if (reader->bytes->size() - reader->pos < count) png_error(png, "unexpected end of data");
  std::copy_n(reader->bytes->data() + reader->pos, count, out);
  reader->pos += count;
}

void png_error_to_exception(png_structp png, png_const_charp msg) {
  auto* message = static_cast<std::string*>(png_get_error_ptr(png));
  if (message) *message = msg;
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

// libpng reports errors via longjmp; the setjmp frame lives in this function
// and nothing with a non-trivial destructor is created after it.
Image decode_png(const std::vector<unsigned char>& bytes, const std::string& path) {
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message,
                                           png_error_to_exception, png_warning_ignore);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialisation failed");
  }

  PngMemoryReader reader{&bytes, 0};
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int colour_type = 0;
  std::vector<unsigned char> raster;
  std::vector<png_bytep> rows;
  std::string unsupported;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("cannot decode PNG " + path + ": " + message);
  }

  png_set_read_fn(png, &reader, png_read_from_memory);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &colour_type, nullptr, nullptr, nullptr);

  if (colour_type == PNG_COLOR_TYPE_PALETTE) {
    unsupported = "palette images are not supported";
  } else if (colour_type & PNG_COLOR_MASK_ALPHA) {
    unsupported = "alpha channels are not supported";
  } else if (bit_depth != 8 && bit_depth != 16) {
    unsupported = "unsupported bit depth " + std::to_string(bit_depth);
  }
  if (!unsupported.empty()) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("cannot decode PNG " + path + ": " + unsupported);
  }

  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  raster.resize(row_bytes * height);
  rows.resize(height);
  for (png_uint_32 i = 0; i < height; ++i) rows[i] = raster.data() + i * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const int channels = colour_type == PNG_COLOR_TYPE_GRAY ? 1 : 3;
  const Shape shape{static_cast<int>(height), static_cast<int>(width), channels};
  const double scale = bit_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
  std::vector<double> data(shape.size());
  for (int i = 0; i < shape.height; ++i) {
    const unsigned char* row = raster.data() + static_cast<std::size_t>(i) * row_bytes;
    for (int j = 0; j < shape.width; ++j) {
      for (int c = 0; c < channels; ++c) {
        const std::size_t k = static_cast<std::size_t>(j) * static_cast<std::size_t>(channels) +
                              static_cast<std::size_t>(c);
        const unsigned raw = bit_depth == 16
                                 ? (static_cast<unsigned>(row[2 * k]) << 8) | row[2 * k + 1]
                                 : row[k];
        data[(static_cast<std::size_t>(c) * static_cast<std::size_t>(shape.height) +
              static_cast<std::size_t>(i)) * static_cast<std::size_t>(shape.width) +
             static_cast<std::size_t>(j)] = raw * scale;
      }
    }
  }
  return Image(shape, std::move(data), Range::Unit);
}

void encode_png(const std::vector<unsigned char>& interleaved, int height, int width,
                int channels, const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open output file: " + path);

  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message,
                                            png_error_to_exception, png_warning_ignore);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialisation failed");
  }
  std::vector<png_const_bytep> rows(static_cast<std::size_t>(height));
  const std::size_t row_bytes = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  for (int i = 0; i < height; ++i) rows[static_cast<std::size_t>(i)] = interleaved.data() + i * row_bytes;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("cannot write PNG " + path + ": " + message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  if (std::fflush(file.get()) != 0) throw IoError("failed writing " + path);
}

}  // namespace

Image load_image(const std::string& path) {
  const std::vector<unsigned char> bytes = read_all(path);
  static constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(bytes.begin(), bytes.begin() + 8, kPngSignature)) {
    return decode_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes, path);
  }
  throw FormatError("not a PNG or binary PPM file: " + path);
}

void save_image(const Image& img, const std::string& path) {
  if (img.range() == Range::Free) {
    throw RangeTagError("save_image needs a unit or symmetric image, got a free-range buffer");
  }
  if (img.channels() != 1 && img.channels() != 3) {
    throw ChannelError("save_image writes 1 or 3 channels, got " + std::to_string(img.channels()));
  }
  const bool symmetric = img.range() == Range::Symmetric;
  const int h = img.height();
  const int w = img.width();
  const int channels = img.channels();
  std::vector<unsigned char> interleaved(img.size());
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      for (int c = 0; c < channels; ++c) {
        double s = img.at(c, i, j);
        if (symmetric) s = (s + 1.0) / 2.0;
        s = std::clamp(s, 0.0, 1.0);
        interleaved[(static_cast<std::size_t>(i) * static_cast<std::size_t>(w) +
                     static_cast<std::size_t>(j)) * static_cast<std::size_t>(channels) +
                    static_cast<std::size_t>(c)] =
            static_cast<unsigned char>(std::lround(s * 255.0));
      }
    }
  }
  encode_png(interleaved, h, w, channels, path);
}

}  // namespace spl
