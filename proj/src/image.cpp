// Copyright 2026 The uiqa Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uiqa/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "uiqa/error.hpp"

namespace uiqa {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

// sRGB (IEC 61966-2-1) linear RGB -> XYZ.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  if (t > delta * delta * delta) return std::cbrt(t);
  return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

ImageBuffer load_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(with_location(path.string(), 0, std::string("corrupt PNG: ") + image.message));
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw Error(with_location(path.string(), 0, "unsupported 16-bit PNG"));
  }
  const bool color = image.format & PNG_FORMAT_FLAG_COLOR;
  const bool alpha = image.format & PNG_FORMAT_FLAG_ALPHA;
  image.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB)
                       : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);
  const int stored = PNG_IMAGE_PIXEL_CHANNELS(image.format);
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    throw Error(with_location(path.string(), 0, std::string("corrupt PNG: ") + image.message));
  }
  const int channels = color ? 3 : 1;
  if (!alpha) return ImageBuffer(width, height, channels, std::move(raw));
  std::vector<std::uint8_t> data;
  data.reserve(static_cast<std::size_t>(width) * height * channels);
  for (std::size_t p = 0; p < static_cast<std::size_t>(width) * height; ++p) {
    for (int c = 0; c < channels; ++c) data.push_back(raw[p * stored + c]);
  }
  return ImageBuffer(width, height, channels, std::move(data));
}

void save_png(const ImageBuffer& img, const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.data().data(), 0, nullptr)) {
    throw Error(with_location(path.string(), 0, std::string("cannot write PNG: ") + image.message));
  }
}

// Next whitespace-separated token, skipping '#' comments.
bool next_token(std::istream& in, std::string& token) {
  token.clear();
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      if (!token.empty()) return true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) return true;
      continue;
    }
    token.push_back(c);
  }
  return !token.empty();
}

ImageBuffer load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string where = path.string();
  std::string magic;
  next_token(in, magic);
  if (magic != "P2" && magic != "P3") {
    throw Error(with_location(where, 0, "unsupported format (expected PNG or plain PGM/PPM)"));
  }
  const int channels = magic == "P3" ? 3 : 1;
  auto read_int = [&](const char* what) {
    std::string token;
    if (!next_token(in, token)) throw Error(with_location(where, 0, std::string("truncated ") + what));
    try {
      std::size_t used = 0;
      const long v = std::stol(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return v;
    } catch (const std::exception&) {
      throw Error(with_location(where, 0, std::string("bad ") + what + ": '" + token + "'"));
    }
  };
  const long width = read_int("width");
  const long height = read_int("height");
  const long maxval = read_int("maxval");
  if (width <= 0 || height <= 0) throw Error(with_location(where, 0, "zero-dimension image"));
  if (maxval != 255) throw Error(with_location(where, 0, "only maxval 255 is supported"));
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * channels);
  for (auto& v : data) {
    const long s = read_int("sample");
    if (s < 0 || s > 255) throw Error(with_location(where, 0, "sample out of range"));
    v = static_cast<std::uint8_t>(s);
  }
  return ImageBuffer(static_cast<int>(width), static_cast<int>(height), channels, std::move(data));
}

void save_pnm(const ImageBuffer& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(with_location(path.string(), 0, "cannot write file"));
  out << (img.channels() == 3 ? "P3\n" : "P2\n") << img.width() << ' ' << img.height() << "\n255\n";
  const auto data = img.data();
  const std::size_t row = static_cast<std::size_t>(img.width()) * img.channels();
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << static_cast<int>(data[i]) << (((i + 1) % row == 0) ? '\n' : ' ');
  }
  if (!out) throw Error(with_location(path.string(), 0, "write failed"));
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width < 1 || height < 1) throw Error("image: width and height must be >= 1");
  if (channels != 1 && channels != 3) throw Error("image: channels must be 1 or 3");
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error("image: data length does not match width x height x channels");
  }
}

ImageBuffer ImageBuffer::filled(int width, int height, int channels, std::uint8_t value) {
  if (width < 1 || height < 1) throw Error("image: width and height must be >= 1");
  return ImageBuffer(width, height, channels,
                     std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height *
                                                   static_cast<std::size_t>(std::max(channels, 0)),
                                               value));
}

ImageBuffer load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(with_location(path.string(), 0, "cannot open image"));
  std::uint8_t head[8] = {};
  in.read(reinterpret_cast<char*>(head), sizeof(head));
  in.close();
  if (std::equal(std::begin(head), std::end(head), std::begin(kPngSignature))) return load_png(path);
  return load_pnm(path);
}

void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
    save_pnm(img, path);
  } else {
    save_png(img, path);
  }
}

ImageBuffer to_grayscale(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  const auto src = img.data();
  std::vector<std::uint8_t> out(img.pixel_count());
  for (std::size_t p = 0; p < out.size(); ++p) {
    const double luma = 0.299 * src[3 * p] + 0.587 * src[3 * p + 1] + 0.114 * src[3 * p + 2];
    out[p] = static_cast<std::uint8_t>(std::clamp(std::floor(luma + 0.5), 0.0, 255.0));
  }
  return ImageBuffer(img.width(), img.height(), 1, std::move(out));
}

LabPlanes rgb_to_cielab(const ImageBuffer& img) {
  if (img.channels() != 3) throw Error("rgb_to_cielab: expected a 3-channel image");
  double white[3];
  for (int r = 0; r < 3; ++r) white[r] = kRgbToXyz[r][0] + kRgbToXyz[r][1] + kRgbToXyz[r][2];

  // Only 256 distinct linearized values exist.
  double linear[256];
  for (int v = 0; v < 256; ++v) linear[v] = srgb_to_linear(v / 255.0);

  LabPlanes lab;
  lab.width = img.width();
  lab.height = img.height();
  const std::size_t n = img.pixel_count();
  lab.L.resize(n);
  lab.a.resize(n);
  lab.b.resize(n);
  const auto src = img.data();
  for (std::size_t p = 0; p < n; ++p) {
    const double rgb[3] = {linear[src[3 * p]], linear[src[3 * p + 1]], linear[src[3 * p + 2]]};
    double f[3];
    for (int r = 0; r < 3; ++r) {
      const double xyz = kRgbToXyz[r][0] * rgb[0] + kRgbToXyz[r][1] * rgb[1] + kRgbToXyz[r][2] * rgb[2];
      f[r] = lab_f(xyz / white[r]);
    }
    lab.L[p] = 116.0 * f[1] - 16.0;
    lab.a[p] = 500.0 * (f[0] - f[1]);
    lab.b[p] = 200.0 * (f[1] - f[2]);
  }
  return lab;
}

std::uint8_t quantize_unit(double value) {
  const double scaled = std::floor(value * 255.0 + 0.5);
  if (!(scaled > 0.0)) return 0;  // also maps NaN to 0
  if (scaled >= 255.0) return 255;
  return static_cast<std::uint8_t>(scaled);
}

std::vector<double> to_unit(const ImageBuffer& img) {
  const auto src = img.data();
  std::vector<double> out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out[i] = src[i] / 255.0;
  return out;
}

ImageBuffer from_unit(int width, int height, int channels, std::span<const double> values) {
  std::vector<std::uint8_t> data(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) data[i] = quantize_unit(values[i]);
  return ImageBuffer(width, height, channels, std::move(data));
}

}  // namespace uiqa
