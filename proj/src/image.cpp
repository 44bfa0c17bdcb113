#include "prnuforge/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "prnuforge/errors.hpp"

namespace prnuforge {
namespace {

unsigned char to_byte(double v) {
  return static_cast<unsigned char>(std::clamp<long long>(std::llround(v), 0, 255));
}

// ---- PGM ----

// Skip whitespace and '#' comments, then read one header token.
std::string next_token(std::istream& in) {
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = in.get();
  }
  std::string tok;
  while (ch != EOF && !std::isspace(ch) && ch != '#') {
    tok.push_back(char(ch));
    ch = in.get();
  }
  // Leave the terminator in the stream: after maxval exactly one whitespace
  // separates the header from binary data.
  if (ch != EOF) in.unget();
  return tok;
}

long header_int(std::istream& in, const std::string& path, const char* what) {
  const std::string tok = next_token(in);
  if (tok.empty()) throw IoError("truncated PGM header (" + std::string(what) + "): " + path);
  std::size_t pos = 0;
  long value = 0;
  try {
    value = std::stol(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size() || value < 0)
    throw FormatError("bad PGM " + std::string(what) + " '" + tok + "': " + path);
  return value;
}

GrayImage load_pgm(std::istream& in, const std::string& path) {
  char magic[2];
  in.read(magic, 2);
  const bool ascii = magic[1] == '2';
  const long width = header_int(in, path, "width");
  const long height = header_int(in, path, "height");
  const long maxval = header_int(in, path, "maxval");
  if (width < 1 || height < 1) throw FormatError("bad PGM dimensions: " + path);
  if (maxval < 1 || maxval > 255)
    throw FormatError("only 8-bit PGM supported (maxval " + std::to_string(maxval) +
                      "): " + path);
  GrayImage img{std::size_t(height), std::size_t(width)};
  if (ascii) {
    for (double& v : img.values()) {
      const long value = header_int(in, path, "pixel");
      if (value > 255) throw FormatError("PGM pixel out of range: " + path);
      v = double(value);
    }
  } else {
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) throw IoError("truncated PGM: " + path);
    std::vector<unsigned char> raw(img.size());
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size()) throw IoError("truncated PGM: " + path);
    for (std::size_t i = 0; i < raw.size(); ++i) img.values()[i] = double(raw[i]);
  }
  return img;
}

void save_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  std::vector<unsigned char> raw(img.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = to_byte(img.values()[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  if (!out) throw IoError("failed writing " + path);
}

// ---- PNG ----

struct PngReadCtx {
  FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

GrayImage load_png(const std::string& path) {
  PngReadCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw IoError("cannot open " + path);
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, ctx.fp) != 8) throw IoError("truncated PNG: " + path);
  if (png_sig_cmp(sig, 0, 8) != 0) throw FormatError("not a PNG file: " + path);
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw Error("libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw Error("libpng init failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw IoError("failed to decode PNG: " + path);
  png_init_io(ctx.png, ctx.fp);
  png_set_sig_bytes(ctx.png, 8);
  png_read_info(ctx.png, ctx.info);

  const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);
  if (bit_depth == 16) throw FormatError("16-bit PNG unsupported: " + path);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
  if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS))
    png_set_strip_alpha(ctx.png);
  png_set_interlace_handling(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const int channels = png_get_channels(ctx.png, ctx.info);
  if (channels != 1 && channels != 3)
    throw FormatError("unsupported PNG channel layout: " + path);
  const std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
  std::vector<unsigned char> data(std::size_t(height) * rowbytes);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = data.data() + std::size_t(r) * rowbytes;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  GrayImage img(height, width);
  for (png_uint_32 r = 0; r < height; ++r) {
    const unsigned char* row = rows[r];
    for (png_uint_32 c = 0; c < width; ++c) {
      if (channels == 1) {
        img(r, c) = double(row[c]);
      } else {
        img(r, c) = luminance(row[3 * c], row[3 * c + 1], row[3 * c + 2]);
      }
    }
  }
  return img;
}

struct PngWriteCtx {
  FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

void save_png(const GrayImage& img, const std::string& path) {
  PngWriteCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw IoError("cannot write " + path);
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw Error("libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw Error("libpng init failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw IoError("failed to encode PNG: " + path);
  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, png_uint_32(img.cols()), png_uint_32(img.rows()), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  std::vector<unsigned char> row(img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) row[c] = to_byte(img(r, c));
    png_write_row(ctx.png, row.data());
  }
  png_write_end(ctx.png, nullptr);
}

std::string lower_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return ext;
}

}  // namespace

double luminance(double r, double g, double b) {
  if (r == g && g == b) return r;  // gray stays exactly gray
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

GrayImage load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  if (probe.gcount() != 2) throw IoError("truncated or empty file: " + path);
  probe.seekg(0);
  if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) return load_pgm(probe, path);
  probe.close();
  if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') return load_png(path);
  throw FormatError("unsupported image format: " + path);
}

void save_image(const GrayImage& img, const std::string& path) {
  if (img.empty()) throw ParamError("save_image: empty image");
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") {
    save_pgm(img, path);
  } else if (ext == ".png") {
    save_png(img, path);
  } else {
    throw FormatError("unsupported output extension '" + ext + "': " + path);
  }
}

}  // namespace prnuforge
