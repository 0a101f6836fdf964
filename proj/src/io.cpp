#include "lhv/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lhv/errors.hpp"

namespace lhv::io {

std::string format_double(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", value);
  return {buf, static_cast<std::size_t>(len)};
}

namespace {

double parse_double(const std::string& token, const std::filesystem::path& path, int line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw io_error(path.string() + ":" + std::to_string(line) + ": bad number '" + token + "'");
  }
  return value;
}

std::vector<double> load_value_column(const std::filesystem::path& path,
                                      const std::string& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw io_error(path.string() + ": empty file");
  if (line != expected_header) {
    throw io_error(path.string() + ":1: expected header '" + expected_header + "'");
  }
  std::vector<double> values;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw io_error(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    }
    parse_double(line.substr(0, comma), path, lineno);  // angle column, validated only
    values.push_back(parse_double(line.substr(comma + 1), path, lineno));
  }
  return values;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << '\n';
  }
  if (!out) throw io_error("write failed for " + path.string());
}

void write_profile_csv(const polarizer::TransferProfile& profile,
                       const std::filesystem::path& path) {
  const auto& grid = profile.grid();
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    rows.push_back({grid.node(j), profile.samples()[j]});
  }
  write_csv(path, {"lambda", "value"}, rows);
}

polarizer::TransferProfile load_profile_csv(const std::filesystem::path& path) {
  auto values = load_value_column(path, "lambda,value");
  const angular::AngularGrid grid(values.size());
  return polarizer::TransferProfile({grid, std::move(values)});
}

void save_malus_target(const polarizer::MalusTarget& target, const std::string& prefix,
                       const std::string& provenance) {
  const auto& grid = target.curve().grid();
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    rows.push_back({grid.node(j), target.curve()[j]});
  }
  write_csv(prefix + ".csv", {"alpha", "value"}, rows);

  const nlohmann::json header{{"epsilon", target.epsilon()},
                              {"grid_n", grid.size()},
                              {"provenance", provenance}};
  std::ofstream out(prefix + ".json", std::ios::binary);
  if (!out) throw io_error("cannot open " + prefix + ".json for writing");
  out << header.dump(2) << '\n';
  if (!out) throw io_error("write failed for " + prefix + ".json");
}

polarizer::MalusTarget load_malus_target(const std::string& prefix) {
  auto values = load_value_column(prefix + ".csv", "alpha,value");
  std::ifstream in(prefix + ".json", std::ios::binary);
  if (!in) throw io_error("cannot open " + prefix + ".json");
  nlohmann::json header;
  try {
    in >> header;
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error(prefix + ".json: " + e.what());
  }
  if (!header.contains("epsilon") || !header["epsilon"].is_number()) {
    throw io_error(prefix + ".json: missing numeric 'epsilon'");
  }
  if (header.contains("grid_n") && header["grid_n"].get<std::size_t>() != values.size()) {
    throw io_error(prefix + ".json: header grid size disagrees with the CSV");
  }
  const angular::AngularGrid grid(values.size());
  return {header["epsilon"].get<double>(),
          angular::SampledAngularFunction(grid, std::move(values))};
}

}  // namespace lhv::io
