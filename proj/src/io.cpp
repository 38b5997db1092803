#include "eclone/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eclone/error.hpp"

namespace eclone::io {

namespace {

constexpr std::string_view kCountsHeader = "setting_a,setting_b,count,exposure";
constexpr std::string_view kSweepHeader = "R,F_local,F_distant,success_weight";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, std::size_t line_no, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": invalid " + what + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, ptr);
}

std::string format_significant(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

std::string counts_to_csv(std::span<const tomography::CountRecord> records) {
  std::string out(kCountsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += tomography::projector_name(r.setting.a);
    out += ',';
    out += tomography::projector_name(r.setting.b);
    out += ',';
    out += std::to_string(r.count);
    out += ',';
    out += format_double(r.exposure);
    out += '\n';
  }
  return out;
}

std::vector<tomography::CountRecord> counts_from_csv(std::string_view text) {
  std::vector<tomography::CountRecord> records;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCountsHeader) throw ParseError("counts CSV must start with '" + std::string(kCountsHeader) + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields");
    tomography::CountRecord r;
    r.setting.a = tomography::parse_projector(trim(fields[0]));
    r.setting.b = tomography::parse_projector(trim(fields[1]));
    r.count = parse_number<std::uint64_t>(trim(fields[2]), line_no, "count");
    r.exposure = parse_number<double>(trim(fields[3]), line_no, "exposure");
    if (!(r.exposure > 0.0)) throw ParseError("line " + std::to_string(line_no) + ": exposure must be positive");
    records.push_back(r);
  }
  if (!header_seen) throw ParseError("counts CSV is empty");
  return records;
}

std::string matrix_to_json(const DensityMatrix& rho) {
  nlohmann::json doc;
  doc["labels"] = rho.labels();
  nlohmann::json rows = nlohmann::json::array();
  const ComplexMatrix& m = rho.matrix();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  return doc.dump();
}

DensityMatrix matrix_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
  try {
    Labels labels = doc.at("labels").get<Labels>();
    const auto& rows = doc.at("matrix");
    if (!rows.is_array()) throw ParseError("matrix JSON: 'matrix' must be an array");
    const std::size_t n = rows.size();
    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != n) throw ParseError("matrix JSON: matrix must be square");
      for (const auto& z : row) {
        if (!z.is_array() || z.size() != 2) throw ParseError("matrix JSON: entries must be [re, im] pairs");
        entries.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
    }
    return DensityMatrix(std::move(labels), ComplexMatrix(n, n, std::move(entries)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
}

std::string sweep_to_csv(std::span<const cloner::SweepPoint> points) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const auto& p : points) {
    out += format_significant(p.r) + ',' + format_significant(p.fidelity_local) + ',' +
           format_significant(p.fidelity_distant) + ',' + format_significant(p.success_weight) + '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace eclone::io
