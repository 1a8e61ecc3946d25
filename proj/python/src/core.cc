// Python bindings for the command layer and trained models.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "emoxai/commands.h"
#include "emoxai/error.h"
#include "emoxai/experiment.h"
#include "emoxai/text.h"

namespace py = pybind11;
using emoxai::ExperimentConfig;

namespace {

ExperimentConfig resolve(const std::optional<std::filesystem::path>& config_path, std::optional<std::uint64_t> seed,
                         bool strict) {
  ExperimentConfig config;
  if (config_path) config = emoxai::load_experiment_config(*config_path);
  if (seed) emoxai::apply_seed(config, *seed);
  if (strict) config.schema.strict = true;
  return config;
}

emoxai::Emotion emotion_arg(const std::string& label) {
  const auto e = emoxai::parse_emotion(label);
  if (!e) throw emoxai::ConfigError("unknown label '" + label + "'");
  return *e;
}

py::list label_names(const emoxai::LabelVector& labels) {
  py::list out;
  for (emoxai::Emotion e : emoxai::kEmotions) {
    if (labels[e]) out.append(std::string(emoxai::emotion_name(e)));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bangla multi-label emotion classification core";

  py::register_exception<emoxai::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<emoxai::DataError>(m, "DataError", PyExc_RuntimeError);

  m.attr("EMOTIONS") = py::cast(std::vector<std::string>(emoxai::kEmotionNames.begin(), emoxai::kEmotionNames.end()));

  m.def("preprocess", [](const std::string& text) { return emoxai::preprocess(text); }, py::arg("text"));
  m.def("split_sentences", [](const std::string& text) { return emoxai::split_sentences(text); }, py::arg("text"));

  m.def("config_hash",
        [](const std::filesystem::path& config, std::optional<std::uint64_t> seed) {
          return resolve(config, seed, false).hash();
        },
        py::arg("config"), py::arg("seed") = py::none());

  m.def("stats",
        [](const std::filesystem::path& config, const std::filesystem::path& out,
           std::optional<std::filesystem::path> data, std::optional<std::uint64_t> seed, bool strict) {
          ExperimentConfig c = resolve(config, seed, strict);
          if (data) c.dataset = *data;
          emoxai::cmd_stats(c, out);
          return out / "stats.json";
        },
        py::arg("config"), py::arg("out"), py::arg("data") = py::none(), py::arg("seed") = py::none(),
        py::arg("strict") = false);

  m.def("split",
        [](const std::filesystem::path& config, const std::filesystem::path& out, std::optional<std::uint64_t> seed,
           bool strict) {
          emoxai::cmd_split(resolve(config, seed, strict), out);
          return out / "split.json";
        },
        py::arg("config"), py::arg("out"), py::arg("seed") = py::none(), py::arg("strict") = false);

  m.def("train",
        [](const std::filesystem::path& config, const std::filesystem::path& out, std::optional<std::string> family,
           std::optional<std::string> ngrams, std::optional<bool> pca, std::optional<std::uint64_t> seed,
           bool strict) {
          const ExperimentConfig c = resolve(config, seed, strict);
          emoxai::TrainOptions options;
          if (family) {
            options.family = emoxai::parse_family(*family);
            if (!options.family || *options.family == emoxai::Family::kConstant) {
              throw emoxai::ConfigError("unknown model family '" + *family + "'");
            }
          }
          if (ngrams) options.ngrams = emoxai::parse_ngram_range(*ngrams);
          options.pca = pca;
          py::gil_scoped_release release;
          return emoxai::cmd_train(c, options, out);
        },
        py::arg("config"), py::arg("out"), py::arg("family") = py::none(), py::arg("ngrams") = py::none(),
        py::arg("pca") = py::none(), py::arg("seed") = py::none(), py::arg("strict") = false);

  m.def("evaluate",
        [](const std::filesystem::path& config, const std::filesystem::path& model, const std::filesystem::path& out,
           const std::string& subset, std::optional<std::filesystem::path> split, std::optional<std::uint64_t> seed,
           bool strict) {
          const ExperimentConfig c = resolve(config, seed, strict);
          emoxai::EvaluateOptions options;
          options.model = model;
          options.subset = subset;
          options.split_manifest = split;
          py::gil_scoped_release release;
          emoxai::cmd_evaluate(c, options, out);
          return out / "metrics.json";
        },
        py::arg("config"), py::arg("model"), py::arg("out"), py::arg("subset") = "test",
        py::arg("split") = py::none(), py::arg("seed") = py::none(), py::arg("strict") = false);

  m.def("explain",
        [](const std::filesystem::path& model, const std::string& text, const std::string& label,
           const std::filesystem::path& out, std::optional<std::filesystem::path> config,
           std::optional<std::size_t> samples, std::optional<std::size_t> features,
           std::optional<double> kernel_width, std::optional<std::uint64_t> seed) {
          const ExperimentConfig c = resolve(config, seed, false);
          emoxai::LimeConfig lime = c.lime;
          if (samples) lime.num_samples = *samples;
          if (features) lime.num_features = *features;
          if (kernel_width) lime.kernel_width = *kernel_width;
          const emoxai::Emotion e = emotion_arg(label);
          std::ostringstream ignored;
          py::gil_scoped_release release;
          emoxai::cmd_explain(model, text, e, lime, out, ignored);
          return out / "explanation.json";
        },
        py::arg("model"), py::arg("text"), py::arg("label"), py::arg("out"), py::arg("config") = py::none(),
        py::arg("samples") = py::none(), py::arg("features") = py::none(), py::arg("kernel_width") = py::none(),
        py::arg("seed") = py::none());

  m.def("sweep",
        [](const std::filesystem::path& config, const std::filesystem::path& out, std::optional<std::size_t> jobs,
           std::optional<std::uint64_t> seed, bool strict, bool verbose) {
          ExperimentConfig c = resolve(config, seed, strict);
          if (jobs) c.jobs = *jobs;
          std::ostringstream quiet;
          py::gil_scoped_release release;
          emoxai::cmd_sweep(c, out, verbose ? static_cast<std::ostream&>(std::cerr) : quiet);
          return out / "results.json";
        },
        py::arg("config"), py::arg("out"), py::arg("jobs") = py::none(), py::arg("seed") = py::none(),
        py::arg("strict") = false, py::arg("verbose") = false);

  py::class_<emoxai::MultiLabelModel>(m, "Model")
      .def_static("load", &emoxai::MultiLabelModel::load, py::arg("path"))
      .def("predict", [](const emoxai::MultiLabelModel& model, const std::string& text) {
             return label_names(model.predict(text));
           }, py::arg("text"))
      .def("scores", [](const emoxai::MultiLabelModel& model, const std::string& text) {
             const auto s = model.decision_scores(text);
             py::dict out;
             for (emoxai::Emotion e : emoxai::kEmotions) {
               out[py::str(std::string(emoxai::emotion_name(e)))] = s[emoxai::index_of(e)];
             }
             return out;
           }, py::arg("text"));
}
