#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rcwa/field.hpp"
#include "rcwa/fourier.hpp"
#include "rcwa/scattering.hpp"

namespace rcwa {

// Numbers in CSV bodies print with 15 significant digits.
std::string fmt15(double v);

std::uint64_t fnv1a(std::string_view s);

void write_text_file(const std::string& path, const std::string& content);

std::string de_csv(const ScatterResult& result);
std::string summary_json(const ScatterResult& result);

std::string field_csv(const FieldCell& cell);
std::string field_header_json(const FieldCell& cell);

std::string coeff_csv(const CoeffGrid& grid);

struct SweepRow {
  std::string mode;
  int fto = 0;
  double de_target = 0.0;
  double total = 0.0;
  double wall_ms = 0.0;
};
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace rcwa
