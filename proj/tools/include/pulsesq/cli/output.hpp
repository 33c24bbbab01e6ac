#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace pulsesq::cli {

// Shortest round-trip representation; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

struct OutputMeta {
  std::string config_hash;
  std::string version;
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const OutputMeta& meta, const std::vector<std::string>& columns);

  CsvWriter& cell(double v);
  CsvWriter& cell(int v);
  CsvWriter& cell(const std::string& v);
  void end_row();

  void row(std::initializer_list<double> values);

 private:
  std::ofstream out_;
  std::size_t n_columns_;
  std::size_t pending_ = 0;
  std::string line_;
};

// Mode or matrix columns: omega, re_0, im_0, re_1, im_1, ...
void write_columns(const std::filesystem::path& path, const OutputMeta& meta, const Eigen::VectorXd& omega,
                   const Eigen::MatrixXcd& columns);

// JSON document with the metadata block under "_meta".
void write_json(const std::filesystem::path& path, const OutputMeta& meta, nlohmann::json body);

std::string version_string();

}  // namespace pulsesq::cli
