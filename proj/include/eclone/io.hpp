#pragma once

// Text formats shared by the CLI and the C API.
//
//   counts CSV   header `setting_a,setting_b,count,exposure`, one row per setting
//   matrix JSON  { "labels": [...], "matrix": [[[re, im], ...], ...] }
//   sweep CSV    header `R,F_local,F_distant,success_weight`, 12 significant digits
//
// Doubles in counts CSV and matrix JSON are written in shortest round-trip
// form, so export followed by import reproduces every bit.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eclone/cloner.hpp"
#include "eclone/qmath.hpp"
#include "eclone/tomography.hpp"

namespace eclone::io {

std::string counts_to_csv(std::span<const tomography::CountRecord> records);
std::vector<tomography::CountRecord> counts_from_csv(std::string_view text);

std::string matrix_to_json(const DensityMatrix& rho);
DensityMatrix matrix_from_json(std::string_view text);

std::string sweep_to_csv(std::span<const cloner::SweepPoint> points);

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);
// printf("%.12g").
std::string format_significant(double value, int digits = 12);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace eclone::io
