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

// Published constants of the classical metrics, kept in one place.

#pragma once

#include <array>

namespace uiqa::metric_constants {

// PSNR / SSIM
inline constexpr double kPeak = 255.0;
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

// UCIQE = c1 * sigma_chroma + c2 * con_luminance + c3 * mu_saturation.
// Chroma and L are divided by 100; saturation is HSV S in [0, 1].
inline constexpr std::array<double, 3> kUciqeWeights = {0.4680, 0.2745, 0.2576};
inline constexpr double kUciqeContrastQuantile = 0.01;

// UIQM = c1 * UICM + c2 * UISM + c3 * UIConM on 0..255 intensities.
inline constexpr std::array<double, 3> kUiqmWeights = {0.0282, 0.2953, 3.5753};
inline constexpr double kUicmTrim = 0.1;  // alpha_L = alpha_R
inline constexpr double kUicmMeanWeight = -0.0268;
inline constexpr double kUicmSpreadWeight = 0.1586;
inline constexpr std::array<double, 3> kUismChannelWeights = {0.299, 0.587, 0.114};
inline constexpr int kUiqmBlock = 8;
inline constexpr int kUiqmMinSide = 32;

}  // namespace uiqa::metric_constants
