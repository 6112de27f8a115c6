#include "rcwa/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rcwa {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw ParseError(message); }

const json& require(const json& j, const std::string& key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) fail("missing key '" + key + "' in " + context);
  return *it;
}

cd parse_complex(const json& j, const std::string& context) {
  if (j.is_number()) return cd(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cd(j[0].get<double>(), j[1].get<double>());
  fail("value in " + context + " must be a number or [re, im] pair");
}

MatC parse_layer_grid(const json& rows, bool squared, const std::string& context) {
  if (!rows.is_array() || rows.empty()) fail("layer grid in " + context + " must be non-empty");
  const size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
  if (ncols == 0) fail("layer grid rows in " + context + " must be non-empty arrays");
  MatC grid(rows.size(), ncols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != ncols)
      fail("ragged layer grid in " + context);
    for (size_t c = 0; c < ncols; ++c) {
      cd v = parse_complex(rows[r][c], context);
      grid(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          squared ? v * v : v;
    }
  }
  return grid;
}

MatC parse_layer_csv(const std::string& path, bool squared) {
  std::ifstream in(path);
  if (!in) fail("cannot open raster grid file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (!rows.empty() && row.size() != rows[0].size())
      fail("ragged raster grid file '" + path + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail("empty raster grid file '" + path + "'");
  MatC grid(rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) {
      cd v(rows[r][c], 0.0);
      grid(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = squared ? v * v : v;
    }
  return grid;
}

Geometry parse_geometry(const json& g, const std::string& base_dir) {
  int sources = 0;
  sources += g.contains("raster") ? 1 : 0;
  sources += g.contains("raster_csv") ? 1 : 0;
  sources += g.contains("vector") ? 1 : 0;
  if (sources == 0) fail("geometry needs one of 'raster', 'raster_csv' or 'vector'");
  if (sources > 1) fail("conflicting geometry blocks: give exactly one of 'raster', 'raster_csv', 'vector'");

  const bool squared = g.value("raster_kind", std::string("index")) == "index";
  if (g.contains("raster")) {
    const json& layers = g["raster"];
    if (!layers.is_array()) fail("'raster' must be an array of layers");
    UCell cell;
    for (size_t z = 0; z < layers.size(); ++z)
      cell.layers.push_back(parse_layer_grid(layers[z], squared,
                                             "raster layer " + std::to_string(z)));
    if (!cell.layers.empty()) cell = new_raster(cell.layers);
    return cell;
  }
  if (g.contains("raster_csv")) {
    const json& paths = g["raster_csv"];
    if (!paths.is_array()) fail("'raster_csv' must be an array of file paths");
    UCell cell;
    for (const auto& p : paths) {
      std::filesystem::path fp(p.get<std::string>());
      if (fp.is_relative()) fp = std::filesystem::path(base_dir) / fp;
      cell.layers.push_back(parse_layer_csv(fp.string(), squared));
    }
    if (!cell.layers.empty()) cell = new_raster(cell.layers);
    return cell;
  }

  const json& v = g["vector"];
  const double px = require(v, "period_x", "vector geometry").get<double>();
  const double py = v.value("period_y", px);
  std::vector<VectorLayer> layers;
  for (const auto& jl : require(v, "layers", "vector geometry")) {
    VectorLayer layer;
    if (jl.contains("base_permittivity"))
      layer.base_eps = parse_complex(jl["base_permittivity"], "base_permittivity");
    else {
      cd n = parse_complex(require(jl, "base_index", "vector layer"), "base_index");
      layer.base_eps = n * n;
    }
    for (const auto& jr : jl.value("rectangles", json::array())) {
      const auto center = require(jr, "center", "rectangle");
      const auto lengths = require(jr, "lengths", "rectangle");
      cd eps;
      if (jr.contains("permittivity"))
        eps = parse_complex(jr["permittivity"], "rectangle permittivity");
      else {
        cd n = parse_complex(require(jr, "index", "rectangle"), "rectangle index");
        eps = n * n;
      }
      const double angle_deg = jr.value("angle_deg", 0.0);
      int nsx = 1, nsy = 1;
      if (jr.contains("n_split")) {
        nsx = jr["n_split"][0].get<int>();
        nsy = jr["n_split"][1].get<int>();
      }
      if (angle_deg == 0.0 && nsx == 1 && nsy == 1) {
        layer.rects.push_back(make_rectangle(center[0].get<double>(), center[1].get<double>(),
                                             lengths[0].get<double>(),
                                             lengths[1].get<double>(), eps));
      } else {
        auto pieces = rectangle_rotate(center[0].get<double>(), center[1].get<double>(),
                                       lengths[0].get<double>(), lengths[1].get<double>(),
                                       nsx, nsy, eps, angle_deg * pi / 180.0);
        layer.rects.insert(layer.rects.end(), pieces.begin(), pieces.end());
      }
    }
    layers.push_back(std::move(layer));
  }
  return draw(layers, px, py);
}

SimConfig parse_sim(const json& s) {
  SimConfig sim;
  sim.wavelength = require(s, "wavelength", "simulation").get<double>();
  if (s.contains("theta_rad")) sim.theta = s["theta_rad"].get<double>();
  else sim.theta = s.value("theta_deg", 0.0) * pi / 180.0;
  if (s.contains("phi_rad")) sim.phi = s["phi_rad"].get<double>();
  else sim.phi = s.value("phi_deg", 0.0) * pi / 180.0;

  const bool has_pol = s.contains("pol");
  const bool has_psi = s.contains("psi_deg") || s.contains("psi_rad");
  if (has_pol && has_psi) fail("'pol' and 'psi' are mutually exclusive");
  if (has_pol) sim.set_pol(s["pol"].get<double>());
  else if (s.contains("psi_rad")) sim.psi = s["psi_rad"].get<double>();
  else if (s.contains("psi_deg")) sim.psi = s["psi_deg"].get<double>() * pi / 180.0;

  sim.n_inc = s.value("n_inc", 1.0);
  sim.n_sub = s.value("n_sub", 1.0);

  const json& period = require(s, "period", "simulation");
  if (!period.is_array() || period.empty() || period.size() > 2)
    fail("'period' must be [px] or [px, py]");
  sim.period_x = period[0].get<double>();
  sim.period_y = period.size() == 2 ? period[1].get<double>() : sim.period_x;

  const json& fto = require(s, "fourier_order", "simulation");
  if (fto.is_number_integer()) {
    sim.order_x = fto.get<int>();
    sim.order_y = 0;
  } else if (fto.is_array() && fto.size() == 2) {
    sim.order_x = fto[0].get<int>();
    sim.order_y = fto[1].get<int>();
  } else {
    fail("'fourier_order' must be an integer or [M, N]");
  }

  sim.thickness = s.value("thickness", std::vector<double>{});
  sim.single_precision = s.value("precision", 64) == 32;
  try {
    sim.validate();
  } catch (const DomainError& e) {
    fail(std::string("invalid simulation block: ") + e.what());
  }
  return sim;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> seeds;
  for (const auto& s : j) seeds.push_back(s.get<std::uint64_t>());
  if (seeds.empty()) fail("'seeds' must be non-empty");
  return seeds;
}

json complex_json(const cd& v) { return json::array({v.real(), v.imag()}); }

} // namespace

FourierMode fourier_mode_from_name(const std::string& name) {
  if (name == "dfs") return FourierMode::DFS;
  if (name == "edfs" || name == "enhanced_dfs") return FourierMode::EnhancedDFS;
  if (name == "cfs") return FourierMode::CFS;
  throw ParseError("unknown Fourier mode: " + name);
}

std::string fourier_mode_name(FourierMode mode) {
  switch (mode) {
    case FourierMode::DFS: return "dfs";
    case FourierMode::EnhancedDFS: return "edfs";
    case FourierMode::CFS: return "cfs";
  }
  return "?";
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(),
                           std::filesystem::path(path).parent_path().string());
}

RunConfig parse_config_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig config;
  config.source_text = text;
  config.sim = parse_sim(require(j, "simulation", "config"));
  if (j.contains("geometry")) config.geometry = parse_geometry(j["geometry"], base_dir);
  config.mode = fourier_mode_from_name(j.value("mode", std::string("cfs")));
  if (j.contains("output")) config.out_dir = j["output"].value("dir", std::string("out"));

  if (j.contains("solve") && j["solve"].contains("field")) {
    const json& f = j["solve"]["field"];
    if (!f.is_array() || f.size() != 3) fail("'solve.field' must be [res_x, res_y, res_z]");
    config.field_res = {f[0].get<int>(), f[1].get<int>(), f[2].get<int>()};
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    SweepBlock block;
    for (const auto& f : require(s, "fto", "sweep")) block.fto.push_back(f.get<int>());
    if (block.fto.empty()) fail("'sweep.fto' must be non-empty");
    for (size_t i = 1; i < block.fto.size(); ++i)
      if (block.fto[i] <= block.fto[i - 1]) fail("'sweep.fto' must be ascending");
    if (s.contains("modes"))
      for (const auto& m : s["modes"])
        block.modes.push_back(fourier_mode_from_name(m.get<std::string>()));
    else
      block.modes.push_back(config.mode);
    block.deflection_order = s.value("deflection_order", 1);
    config.sweep = block;
  }

  if (j.contains("optimize")) {
    const json& o = j["optimize"];
    OptimizeBlock block;
    block.cells = o.value("cells", 64);
    block.epochs = o.value("epochs", 100);
    block.optimizer = opt_algo_from_name(o.value("optimizer", std::string("adam")));
    block.lr = o.value("lr", 0.5);
    if (o.contains("seeds")) block.seeds = parse_seeds(o["seeds"]);
    block.deflection_deg = o.value("deflection_deg", 50.0);
    block.thickness = o.value("thickness", 325.0);
    block.n_ridge = o.value("n_ridge", 3.48);
    block.n_groove = o.value("n_groove", 1.0);
    if (block.cells < 2) fail("'optimize.cells' must be >= 2");
    config.optimize = block;
  }

  if (j.contains("fit")) {
    const json& f = j["fit"];
    FitBlock block;
    const FitSetup canonical = ocd_demo_setup();
    if (f.contains("parameters")) {
      for (const auto& p : f["parameters"]) {
        FitParam param;
        param.name = require(p, "name", "fit parameter").get<std::string>();
        param.mean = require(p, "mean", "fit parameter").get<double>();
        param.stddev = require(p, "std", "fit parameter").get<double>();
        param.truth = require(p, "truth", "fit parameter").get<double>();
        block.params.push_back(param);
      }
    } else {
      block.params = canonical.params;
    }
    if (block.params.size() != canonical.params.size())
      fail("'fit.parameters' must list exactly 8 parameters");
    if (f.contains("wavelengths")) {
      const json& w = f["wavelengths"];
      block.wavelength_min = require(w, "min", "fit wavelengths").get<double>();
      block.wavelength_max = require(w, "max", "fit wavelengths").get<double>();
      block.wavelength_count = require(w, "count", "fit wavelengths").get<int>();
      if (block.wavelength_count < 2 || !(block.wavelength_min > 0.0) ||
          !(block.wavelength_max > block.wavelength_min))
        fail("invalid fit wavelength grid");
    }
    if (f.contains("optimizers")) {
      for (const auto& o : f["optimizers"]) {
        FitOptimizer fo;
        fo.algo = opt_algo_from_name(require(o, "name", "fit optimizer").get<std::string>());
        fo.lr = require(o, "lr", "fit optimizer").get<double>();
        block.optimizers.push_back(fo);
      }
    } else {
      block.optimizers = {{OptAlgo::Momentum, 1e2},
                          {OptAlgo::Adagrad, 1e0},
                          {OptAlgo::RMSProp, 1e-1},
                          {OptAlgo::Adam, 1e-1},
                          {OptAlgo::RAdam, 1e0}};
    }
    block.iterations = f.value("iterations", 200);
    if (f.contains("seeds")) block.seeds = parse_seeds(f["seeds"]);
    block.period = f.value("period", 300.0);
    block.order_x = f.value("order_x", 1);
    block.order_y = f.value("order_y", 1);
    config.fit = block;
  }

  return config;
}

std::string serialize_config(const RunConfig& config) {
  json j;
  json s;
  s["wavelength"] = config.sim.wavelength;
  s["theta_rad"] = config.sim.theta;
  s["phi_rad"] = config.sim.phi;
  s["psi_rad"] = config.sim.psi;
  s["n_inc"] = config.sim.n_inc;
  s["n_sub"] = config.sim.n_sub;
  s["period"] = {config.sim.period_x, config.sim.period_y};
  s["fourier_order"] = {config.sim.order_x, config.sim.order_y};
  s["thickness"] = config.sim.thickness;
  s["precision"] = config.sim.single_precision ? 32 : 64;
  j["simulation"] = s;

  if (config.geometry) {
    json g;
    g["raster_kind"] = "permittivity";
    if (const auto* cell = std::get_if<UCell>(&*config.geometry)) {
      json layers = json::array();
      for (const auto& layer : cell->layers) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < layer.rows(); ++r) {
          json row = json::array();
          for (Eigen::Index c = 0; c < layer.cols(); ++c)
            row.push_back(complex_json(layer(r, c)));
          rows.push_back(row);
        }
        layers.push_back(rows);
      }
      g["raster"] = layers;
    } else {
      const auto& layout = std::get<VectorLayout>(*config.geometry);
      json v;
      v["period_x"] = layout.period_x;
      v["period_y"] = layout.period_y;
      json layers = json::array();
      for (const auto& layer : layout.layers) {
        json jl;
        jl["base_permittivity"] = complex_json(layer.base_eps);
        json rects = json::array();
        for (const auto& r : layer.rects) {
          json jr;
          jr["center"] = {r.cx, r.cy};
          jr["lengths"] = {r.lx, r.ly};
          jr["permittivity"] = complex_json(r.eps);
          rects.push_back(jr);
        }
        jl["rectangles"] = rects;
        layers.push_back(jl);
      }
      v["layers"] = layers;
      g["vector"] = v;
    }
    j["geometry"] = g;
  }

  j["mode"] = fourier_mode_name(config.mode);
  j["output"] = {{"dir", config.out_dir}};
  if (config.field_res)
    j["solve"] = {{"field", {(*config.field_res)[0], (*config.field_res)[1],
                             (*config.field_res)[2]}}};
  if (config.sweep) {
    json s2;
    s2["fto"] = config.sweep->fto;
    json modes = json::array();
    for (auto m : config.sweep->modes) modes.push_back(fourier_mode_name(m));
    s2["modes"] = modes;
    s2["deflection_order"] = config.sweep->deflection_order;
    j["sweep"] = s2;
  }
  if (config.optimize) {
    const auto& o = *config.optimize;
    j["optimize"] = {{"cells", o.cells},
                     {"epochs", o.epochs},
                     {"optimizer", opt_algo_name(o.optimizer)},
                     {"lr", o.lr},
                     {"seeds", o.seeds},
                     {"deflection_deg", o.deflection_deg},
                     {"thickness", o.thickness},
                     {"n_ridge", o.n_ridge},
                     {"n_groove", o.n_groove}};
  }
  if (config.fit) {
    const auto& f = *config.fit;
    json params = json::array();
    for (const auto& p : f.params)
      params.push_back({{"name", p.name}, {"mean", p.mean}, {"std", p.stddev},
                        {"truth", p.truth}});
    json opts = json::array();
    for (const auto& o : f.optimizers)
      opts.push_back({{"name", opt_algo_name(o.algo)}, {"lr", o.lr}});
    j["fit"] = {{"parameters", params},
                {"wavelengths", {{"min", f.wavelength_min}, {"max", f.wavelength_max},
                                 {"count", f.wavelength_count}}},
                {"optimizers", opts},
                {"iterations", f.iterations},
                {"seeds", f.seeds},
                {"period", f.period},
                {"order_x", f.order_x},
                {"order_y", f.order_y}};
  }
  return j.dump(2);
}

bool operator==(const SimConfig& a, const SimConfig& b) {
  return a.wavelength == b.wavelength && a.theta == b.theta && a.phi == b.phi &&
         a.psi == b.psi && a.n_inc == b.n_inc && a.n_sub == b.n_sub &&
         a.period_x == b.period_x && a.period_y == b.period_y &&
         a.order_x == b.order_x && a.order_y == b.order_y &&
         a.thickness == b.thickness && a.single_precision == b.single_precision;
}

bool operator==(const Rectangle& a, const Rectangle& b) {
  return a.cx == b.cx && a.cy == b.cy && a.lx == b.lx && a.ly == b.ly && a.eps == b.eps;
}

bool operator==(const VectorLayer& a, const VectorLayer& b) {
  return a.base_eps == b.base_eps && a.rects == b.rects;
}

bool operator==(const VectorLayout& a, const VectorLayout& b) {
  return a.period_x == b.period_x && a.period_y == b.period_y && a.layers == b.layers;
}

bool operator==(const UCell& a, const UCell& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (size_t i = 0; i < a.layers.size(); ++i)
    if (a.layers[i] != b.layers[i]) return false;
  return true;
}

bool operator==(const SweepBlock& a, const SweepBlock& b) {
  return a.fto == b.fto && a.modes == b.modes && a.deflection_order == b.deflection_order;
}

bool operator==(const OptimizeBlock& a, const OptimizeBlock& b) {
  return a.cells == b.cells && a.epochs == b.epochs && a.optimizer == b.optimizer &&
         a.lr == b.lr && a.seeds == b.seeds && a.deflection_deg == b.deflection_deg &&
         a.thickness == b.thickness && a.n_ridge == b.n_ridge && a.n_groove == b.n_groove;
}

bool operator==(const FitOptimizer& a, const FitOptimizer& b) {
  return a.algo == b.algo && a.lr == b.lr;
}

bool operator==(const FitBlock& a, const FitBlock& b) {
  if (a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i) {
    const auto& pa = a.params[i];
    const auto& pb = b.params[i];
    if (pa.name != pb.name || pa.mean != pb.mean || pa.stddev != pb.stddev ||
        pa.truth != pb.truth)
      return false;
  }
  return a.wavelength_min == b.wavelength_min && a.wavelength_max == b.wavelength_max &&
         a.wavelength_count == b.wavelength_count && a.optimizers == b.optimizers &&
         a.iterations == b.iterations && a.seeds == b.seeds && a.period == b.period &&
         a.order_x == b.order_x && a.order_y == b.order_y;
}

bool equivalent(const RunConfig& a, const RunConfig& b) {
  if (!(a.sim == b.sim) || a.mode != b.mode || a.out_dir != b.out_dir) return false;
  if (a.geometry.has_value() != b.geometry.has_value()) return false;
  if (a.geometry && !(*a.geometry == *b.geometry)) return false;
  if (a.field_res != b.field_res) return false;
  if (a.sweep.has_value() != b.sweep.has_value()) return false;
  if (a.sweep && !(*a.sweep == *b.sweep)) return false;
  if (a.optimize.has_value() != b.optimize.has_value()) return false;
  if (a.optimize && !(*a.optimize == *b.optimize)) return false;
  if (a.fit.has_value() != b.fit.has_value()) return false;
  if (a.fit && !(*a.fit == *b.fit)) return false;
  return true;
}

} // namespace rcwa
