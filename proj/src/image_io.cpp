#include "piv/image_io.hpp"

#include "piv/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

namespace piv {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream &in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int header_int(std::istream &in, const std::filesystem::path &path) {
  const std::string tok = header_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    throw IoError(path.string() + ": malformed PNM header field '" + tok + "'");
  }
}

} // namespace

GrayImage load_image(const std::filesystem::path &path, LoadOptions opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());

  const std::string magic = header_token(in);
  const bool color = magic == "P6";
  if (magic != "P5" && !color)
    throw IoError(path.string() + ": unsupported format '" + magic +
                  "' (binary PGM P5 expected)");
  if (color && !opts.convert_color)
    throw IoError(path.string() + ": color image given without color conversion enabled");

  const int width = header_int(in, path);
  const int height = header_int(in, path);
  const int maxval = header_int(in, path);
  if (maxval > 65535) throw IoError(path.string() + ": maxval above 65535");
  // header_token consumed exactly one whitespace byte after maxval.

  const int channels = color ? 3 : 1;
  const int bytes = maxval > 255 ? 2 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(count * bytes);
  in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw IoError(path.string() + ": truncated pixel data");

  std::vector<double> data(static_cast<std::size_t>(width) * height);
  for (std::size_t p = 0; p < data.size(); ++p) {
    unsigned acc = 0;
    for (int c = 0; c < channels; ++c) {
      const std::size_t s = (p * channels + c) * bytes;
      const unsigned k = bytes == 2 ? (unsigned(raw[s]) << 8) | raw[s + 1] : raw[s];
      acc += k;
    }
    data[p] = static_cast<double>(acc) / (static_cast<double>(maxval) * channels);
  }
  return GrayImage(width, height, std::move(data));
}

void save_pgm(const GrayImage &img, const std::filesystem::path &path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16)
    throw ParameterError("PGM bit depth must be 8 or 16");
  const unsigned maxval = bit_depth == 8 ? 255u : 65535u;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << '\n' << maxval << '\n';

  std::vector<unsigned char> raw;
  raw.reserve(img.size() * (bit_depth / 8));
  for (double v : img.pixels()) {
    const auto k = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
    if (bit_depth == 16) raw.push_back(static_cast<unsigned char>(k >> 8));
    raw.push_back(static_cast<unsigned char>(k & 0xff));
  }
  out.write(reinterpret_cast<const char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void save_ppm(const std::vector<Rgb> &rgb, int width, int height,
              const std::filesystem::path &path) {
  if (rgb.size() != static_cast<std::size_t>(width) * height)
    throw DimensionError("PPM pixel count does not match dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P6\n" << width << ' ' << height << "\n255\n";
  for (const Rgb &px : rgb) out.write(reinterpret_cast<const char *>(px.data()), 3);
  if (!out) throw IoError("failed writing " + path.string());
}

} // namespace piv
