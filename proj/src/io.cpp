#include "rcwa/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace rcwa {

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_text_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file '" + path + "'");
  out << content;
}

std::string de_csv(const ScatterResult& result) {
  std::string out = "order_m,order_n,de_r,de_t\n";
  const int M = result.config.order_x;
  const int N = result.config.order_y;
  for (int n = -N; n <= N; ++n)
    for (int m = -M; m <= M; ++m) {
      out += std::to_string(m) + "," + std::to_string(n) + "," +
             fmt15(result.de_r_at(n, m)) + "," + fmt15(result.de_t_at(n, m)) + "\n";
    }
  return out;
}

std::string summary_json(const ScatterResult& result) {
  nlohmann::json j;
  j["total_r"] = result.total_r();
  j["total_t"] = result.total_t();
  nlohmann::json warnings = nlohmann::json::array();
  if (result.warnings.wood_anomaly) warnings.push_back("wood_anomaly");
  if (result.warnings.regularized_mode) warnings.push_back("regularized_mode");
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

std::string field_csv(const FieldCell& cell) {
  static const char* names[6] = {"Ex", "Ey", "Ez", "Hx", "Hy", "Hz"};
  std::string out = "z_index,y_index,x_index,component,real,imag\n";
  for (int z = 0; z < cell.nz; ++z)
    for (int y = 0; y < cell.ny; ++y)
      for (int x = 0; x < cell.nx; ++x)
        for (int c = 0; c < FieldCell::components; ++c) {
          const cd v = cell.at(z, y, x, c);
          out += std::to_string(z) + "," + std::to_string(y) + "," + std::to_string(x) +
                 "," + names[c] + "," + fmt15(v.real()) + "," + fmt15(v.imag()) + "\n";
        }
  return out;
}

std::string field_header_json(const FieldCell& cell) {
  nlohmann::json j;
  j["res_x"] = cell.nx;
  j["res_y"] = cell.ny;
  j["res_z"] = cell.res_z;
  j["layers"] = cell.layer_tops.size();
  j["layer_tops"] = cell.layer_tops;
  j["components"] = {"Ex", "Ey", "Ez", "Hx", "Hy", "Hz"};
  return j.dump(2) + "\n";
}

std::string coeff_csv(const CoeffGrid& grid) {
  std::string out = "order_m,order_n,real,imag\n";
  for (int n = -2 * grid.N; n <= 2 * grid.N; ++n)
    for (int m = -2 * grid.M; m <= 2 * grid.M; ++m) {
      const cd v = grid.at(n, m);
      out += std::to_string(m) + "," + std::to_string(n) + "," + fmt15(v.real()) + "," +
             fmt15(v.imag()) + "\n";
    }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "mode,fto,de_target,total,wall_ms\n";
  for (const auto& r : rows)
    out += r.mode + "," + std::to_string(r.fto) + "," + fmt15(r.de_target) + "," +
           fmt15(r.total) + "," + fmt15(r.wall_ms) + "\n";
  return out;
}

} // namespace rcwa
