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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "uiqa/cli.hpp"
#include "uiqa/error.hpp"
#include "uiqa/evaluation.hpp"
#include "uiqa/image.hpp"
#include "uiqa/manifest.hpp"
#include "uiqa/metrics.hpp"
#include "uiqa/stats.hpp"
#include "uiqa/subjective.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

uiqa::ImageBuffer to_image(const Array& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw uiqa::Error("expected an HxW or HxWxC uint8 array");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  return uiqa::ImageBuffer(w, h, c, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
}

Array to_array(const uiqa::ImageBuffer& img) {
  Array out(std::vector<py::ssize_t>{img.height(), img.width(), img.channels()});
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

py::dict mos_to_dict(const uiqa::MosTable& table) {
  py::dict out;
  for (const auto& [id, r] : table) {
    py::dict row;
    row["mos"] = r.mos;
    row["raw_mean"] = r.raw_mean;
    row["variance"] = r.variance;
    row["n_raters"] = r.n_raters;
    row["iqr"] = r.iqr;
    out[py::str(id)] = row;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_uiqa, m) {
  m.doc() = "Underwater image quality assessment harness";
  py::register_exception<uiqa::Error>(m, "UiqaError", PyExc_ValueError);

  m.def("load_image", [](const std::filesystem::path& p) { return to_array(uiqa::load_image(p)); }, py::arg("path"));
  m.def("save_image", [](const Array& a, const std::filesystem::path& p) { uiqa::save_image(to_image(a), p); },
        py::arg("image"), py::arg("path"));

  m.def("psnr", [](const Array& r, const Array& t) { return uiqa::psnr(to_image(r), to_image(t)); });
  m.def("ssim", [](const Array& r, const Array& t) { return uiqa::ssim(to_image(r), to_image(t)); });
  m.def("uciqe", [](const Array& a) { return uiqa::uciqe(to_image(a)); });
  m.def("uiqm", [](const Array& a) { return uiqa::uiqm(to_image(a)); });

  m.def("pearson", [](std::vector<double> x, std::vector<double> y) { return uiqa::pearson(x, y); });
  m.def("spearman", [](std::vector<double> x, std::vector<double> y) { return uiqa::spearman(x, y); });
  m.def("kendall", [](std::vector<double> x, std::vector<double> y) { return uiqa::kendall(x, y); });
  m.def("normal_cdf", &uiqa::normal_cdf, py::arg("z"));
  m.def("fit_logistic", [](std::vector<double> pred, std::vector<double> mos) {
    const uiqa::LogisticFit f = uiqa::fit_logistic(pred, mos);
    return py::make_tuple(f.beta, f.mapped, f.converged);
  });

  m.def("load_mos", [](const std::filesystem::path& p) { return mos_to_dict(uiqa::load_mos(p)); });
  m.def("load_scores", [](const std::filesystem::path& p) {
    py::dict out;
    for (const auto& t : uiqa::load_scores(p)) out[py::str(t.model_name)] = t.scores;
    return out;
  });
  m.def(
      "save_scores",
      [](const std::filesystem::path& p, const std::string& model, const std::map<std::string, double>& scores) {
        const uiqa::ScoreTable t{model, scores, true};
        uiqa::save_scores(std::span(&t, 1), p);
      },
      py::arg("path"), py::arg("model"), py::arg("scores"));
  m.def("normalize_manifest", [](const std::string& text) {
    const uiqa::DatasetManifest manifest = uiqa::manifest_from_json(text);
    manifest.validate();
    return uiqa::manifest_to_json(manifest);
  });

  m.def(
      "c0",
      [](const std::map<std::string, double>& scores, const std::filesystem::path& mos_path, bool higher_is_better) {
        const uiqa::MosTable mos = uiqa::load_mos(mos_path);
        std::vector<std::string> ids;
        for (const auto& [id, s] : scores) ids.push_back(id);
        const uiqa::ScoreTable t{"model", scores, higher_is_better};
        return uiqa::c0(t, uiqa::significant_pairs(mos, ids));
      },
      py::arg("scores"), py::arg("mos_path"), py::arg("higher_is_better") = true);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "uiqa");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = uiqa::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
