#include "gbht/model_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gbht {

namespace {

using json = nlohmann::json;

constexpr int kFormatVersion = 1;

json density_to_json(const HtDensity& f) {
  const int d = f.transform.dim();
  json rotation = json::array();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) rotation.push_back(f.transform.rotation(r, c));
  json cells = json::array();
  for (std::size_t j = 0; j < f.cell_mass.size(); ++j) {
    json idx = json::array();
    const std::int64_t* k = f.cell_mass.key(j);
    for (int i = 0; i < d; ++i) idx.push_back(k[i]);
    cells.push_back(json::array({std::move(idx), f.cell_mass.value(j)}));
  }
  return json{{"rotation", std::move(rotation)},
              {"scales", std::vector<double>(f.transform.scales.begin(),
                                             f.transform.scales.end())},
              {"translation", std::vector<double>(f.transform.translation.begin(),
                                                  f.transform.translation.end())},
              {"cell_volume", f.cell_volume},
              {"cells", std::move(cells)}};
}

[[noreturn]] void schema_fail(const std::string& what) {
  throw std::runtime_error("model file: " + what);
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    schema_fail(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double require_number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number()) schema_fail(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> require_doubles(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_array()) schema_fail(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) schema_fail(std::string("field '") + key + "' must be numeric");
    out.push_back(e.get<double>());
  }
  return out;
}

HtDensity density_from_json(const json& j) {
  HtDensity f;
  std::vector<double> scales = require_doubles(j, "scales");
  const int d = static_cast<int>(scales.size());
  if (d < 1) schema_fail("density with empty scales");
  for (double s : scales)
    if (!(s > 0.0)) schema_fail("density scales must be positive");

  std::vector<double> rot = require_doubles(j, "rotation");
  if (rot.size() != static_cast<std::size_t>(d) * d)
    schema_fail("rotation size does not match dimension");
  f.transform.rotation.resize(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      f.transform.rotation(r, c) = rot[static_cast<std::size_t>(r) * d + c];

  f.transform.scales = Eigen::Map<const Vector>(scales.data(), d);
  std::vector<double> trans = require_doubles(j, "translation");
  if (trans.size() != static_cast<std::size_t>(d))
    schema_fail("translation size does not match dimension");
  f.transform.translation = Eigen::Map<const Vector>(trans.data(), d);

  f.cell_volume = require_number(j, "cell_volume");
  if (!(f.cell_volume > 0.0)) schema_fail("cell_volume must be positive");

  const json& cells = require(j, "cells");
  if (!cells.is_array()) schema_fail("field 'cells' must be an array");
  std::vector<std::int64_t> keys;
  std::vector<double> values;
  for (const json& cell : cells) {
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_array() ||
        !cell[1].is_number())
      schema_fail("each cell must be [[index...], mass]");
    if (cell[0].size() != static_cast<std::size_t>(d))
      schema_fail("cell index length does not match dimension");
    for (const json& e : cell[0]) {
      if (!e.is_number_integer()) schema_fail("cell indices must be integers");
      keys.push_back(e.get<std::int64_t>());
    }
    values.push_back(cell[1].get<double>());
  }

  // Stored order is not part of the schema; restore the sorted invariant.
  const std::size_t m = values.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(
        keys.begin() + static_cast<std::ptrdiff_t>(a * d),
        keys.begin() + static_cast<std::ptrdiff_t>((a + 1) * d),
        keys.begin() + static_cast<std::ptrdiff_t>(b * d),
        keys.begin() + static_cast<std::ptrdiff_t>((b + 1) * d));
  });
  std::vector<std::int64_t> sorted_keys(keys.size());
  std::vector<double> sorted_values(m);
  for (std::size_t i = 0; i < m; ++i) {
    sorted_values[i] = values[order[i]];
    for (int k = 0; k < d; ++k)
      sorted_keys[i * d + k] = keys[order[i] * d + k];
  }
  for (std::size_t i = 1; i < m; ++i) {
    if (std::equal(sorted_keys.begin() + static_cast<std::ptrdiff_t>((i - 1) * d),
                   sorted_keys.begin() + static_cast<std::ptrdiff_t>(i * d),
                   sorted_keys.begin() + static_cast<std::ptrdiff_t>(i * d)))
      schema_fail("duplicate cell index");
  }
  f.cell_mass = CellTable(d, std::move(sorted_keys), std::move(sorted_values));
  return f;
}

json config_to_json(const GbhtConfig& cfg) {
  return json{{"iterations", cfg.iterations},
              {"s_min", cfg.scale_params.s_min},
              {"s_max", cfg.scale_params.s_max},
              {"reference_scale", cfg.scale_params.reference_scale},
              {"learner_mode", cfg.learner_mode == LearnerMode::kGreedyCell
                                   ? "greedy"
                                   : "weighted"},
              {"shrinkage", cfg.shrinkage},
              {"alpha_upper", cfg.alpha_upper},
              {"alpha_tolerance", cfg.alpha_tolerance},
              {"density_floor", cfg.density_floor},
              {"seed", cfg.seed}};
}

GbhtConfig config_from_json(const json& j) {
  GbhtConfig cfg;
  const json& it = require(j, "iterations");
  if (!it.is_number_integer()) schema_fail("field 'iterations' must be an integer");
  cfg.iterations = it.get<int>();
  cfg.scale_params.s_min = require_number(j, "s_min");
  cfg.scale_params.s_max = require_number(j, "s_max");
  cfg.scale_params.reference_scale = require_number(j, "reference_scale");
  const json& mode = require(j, "learner_mode");
  if (!mode.is_string()) schema_fail("field 'learner_mode' must be a string");
  const std::string m = mode.get<std::string>();
  if (m == "weighted")
    cfg.learner_mode = LearnerMode::kWeightedHistogram;
  else if (m == "greedy")
    cfg.learner_mode = LearnerMode::kGreedyCell;
  else
    schema_fail("unknown learner_mode '" + m + "'");
  cfg.shrinkage = require_number(j, "shrinkage");
  cfg.alpha_upper = require_number(j, "alpha_upper");
  cfg.alpha_tolerance = require_number(j, "alpha_tolerance");
  cfg.density_floor = require_number(j, "density_floor");
  const json& seed = require(j, "seed");
  if (!seed.is_number_integer()) schema_fail("field 'seed' must be an integer");
  cfg.seed = seed.get<std::uint64_t>();
  return cfg;
}

}  // namespace

void save_model(const GbhtModel& model, const std::string& path) {
  json components = json::array();
  for (const HtDensity& c : model.components)
    components.push_back(density_to_json(c));
  json doc{{"format", kFormatVersion},
           {"config", config_to_json(model.config)},
           {"f0", density_to_json(model.f0)},
           {"components", std::move(components)},
           {"alphas", model.alphas},
           {"mixture_weights", model.mixture_weights},
           {"train_nll_trace", model.train_nll_trace}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << doc.dump(1, '\t') << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string config_json_string(const GbhtConfig& cfg) {
  return config_to_json(cfg).dump();
}

GbhtModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    throw std::runtime_error(path + ": not valid JSON (truncated or corrupt)");

  const json& format = require(doc, "format");
  if (!format.is_number_integer() || format.get<int>() != kFormatVersion)
    throw std::runtime_error(path + ": unsupported model format version");

  GbhtModel model;
  model.config = config_from_json(require(doc, "config"));
  model.f0 = density_from_json(require(doc, "f0"));

  const json& comps = require(doc, "components");
  if (!comps.is_array()) schema_fail("field 'components' must be an array");
  for (const json& c : comps) {
    HtDensity f = density_from_json(c);
    if (f.transform.dim() != model.f0.transform.dim())
      schema_fail("component dimension does not match f0");
    model.components.push_back(std::move(f));
  }

  model.alphas = require_doubles(doc, "alphas");
  model.mixture_weights = require_doubles(doc, "mixture_weights");
  model.train_nll_trace = require_doubles(doc, "train_nll_trace");
  if (model.alphas.size() != model.components.size())
    schema_fail("alphas size does not match component count");
  if (model.mixture_weights.size() != model.components.size() + 1)
    schema_fail("mixture_weights size does not match component count");
  if (model.train_nll_trace.size() != model.components.size() + 1)
    schema_fail("train_nll_trace size does not match component count");
  return model;
}

}  // namespace gbht
