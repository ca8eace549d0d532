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

// Raster image storage, lossless I/O and the color conversions shared by the
// distortion engine and the classical metrics.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace uiqa {

// 8-bit interleaved raster with 1 (gray) or 3 (RGB) channels. Immutable once
// constructed; the constructor enforces the shape invariants.
class ImageBuffer {
 public:
  ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data);

  static ImageBuffer filled(int width, int height, int channels, std::uint8_t value);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::span<const std::uint8_t> data() const { return data_; }

  std::uint8_t at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  bool operator==(const ImageBuffer&) const = default;

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<std::uint8_t> data_;
};

// CIELAB planes (D65), one value per pixel, row-major.
struct LabPlanes {
  int width = 0;
  int height = 0;
  std::vector<double> L;
  std::vector<double> a;
  std::vector<double> b;
};

// Loads PNG (8-bit gray/RGB/palette; alpha is dropped) or plain-text
// PGM/PPM (P2/P3, maxval 255). The format is detected from the file content.
ImageBuffer load_image(const std::filesystem::path& path);

// Writes PNG unless the extension is .pgm/.ppm/.pnm (plain text).
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

// BT.601 luma, rounded half up. Gray input is returned unchanged.
ImageBuffer to_grayscale(const ImageBuffer& img);

// sRGB -> linear -> XYZ -> CIELAB. The reference white is the XYZ of sRGB
// white under the same matrix, so neutral inputs have a = b = 0.
LabPlanes rgb_to_cielab(const ImageBuffer& img);

// Unit-interval conversion helpers used by all pixel math.
std::uint8_t quantize_unit(double value);
std::vector<double> to_unit(const ImageBuffer& img);
ImageBuffer from_unit(int width, int height, int channels, std::span<const double> values);

}  // namespace uiqa
