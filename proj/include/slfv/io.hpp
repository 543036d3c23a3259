#pragma once

#include "slfv/core.hpp"
#include "slfv/field.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace slfv {

inline constexpr const char* kToolVersion = "slfvlab v0.1.0";

uint64_t fnv1a64(const std::string& s);
std::string hash_hex(uint64_t h);

// Shortest decimal that round-trips a double (printf %.17g).
std::string format_g17(double v);

// "# slfvlab v0.1.0 config=<hash>"
std::string csv_header(const std::string& config_hash);

// Snapshot: header row with params and time, then one row per
// (site, type-id-or-UNIFORM, mass) triple at 17 significant digits.
void write_snapshot(const PopulationField& field, const std::string& path);
PopulationField load_snapshot(const std::string& path, const ModelParams& params, int type_capacity);

void write_profile_csv(const std::string& path, const std::string& header,
                       const std::vector<double>& values,
                       const std::vector<std::string>& extra_comments = {});

void write_matrix_csv(const std::string& path, const std::string& header, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& extra_comments = {});

std::vector<std::string> read_lines(const std::string& path);
std::vector<std::string> split(const std::string& line, char sep);

} // namespace slfv
