# Copyright 2026 The uiqa Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python access to the uiqa harness."""

from ._uiqa import (
    UiqaError,
    c0,
    fit_logistic,
    kendall,
    load_image,
    load_mos,
    load_scores,
    normal_cdf,
    normalize_manifest,
    pearson,
    psnr,
    run_cli,
    save_image,
    save_scores,
    spearman,
    ssim,
    uciqe,
    uiqm,
)

__all__ = [
    "UiqaError",
    "c0",
    "fit_logistic",
    "kendall",
    "load_image",
    "load_mos",
    "load_scores",
    "normal_cdf",
    "normalize_manifest",
    "pearson",
    "psnr",
    "run_cli",
    "save_image",
    "save_scores",
    "spearman",
    "ssim",
    "uciqe",
    "uiqm",
]
