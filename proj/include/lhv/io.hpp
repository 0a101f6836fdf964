#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lhv/polarizer.hpp"

namespace lhv::io {

/// Shortest-exact decimal form of a double (17 significant digits).
std::string format_double(double value);

/// Write a CSV file: header row, one row per record, full float precision,
/// LF line endings.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Profile serialization: CSV of (lambda, value) rows.  Values round-trip
/// bit-exactly.
void write_profile_csv(const polarizer::TransferProfile& profile,
                       const std::filesystem::path& path);
polarizer::TransferProfile load_profile_csv(const std::filesystem::path& path);

/// Target serialization: `prefix.csv` holds (alpha, value) rows and
/// `prefix.json` the header (grid size, leakage, provenance).
void save_malus_target(const polarizer::MalusTarget& target, const std::string& prefix,
                       const std::string& provenance);
polarizer::MalusTarget load_malus_target(const std::string& prefix);

}  // namespace lhv::io
