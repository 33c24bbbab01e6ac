#include "pulsesq/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "pulsesq/errors.hpp"

#ifndef PULSESQ_VERSION
#define PULSESQ_VERSION "0.0.0"
#endif

namespace pulsesq::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string version_string() { return std::string("pulsesq ") + PULSESQ_VERSION; }

CsvWriter::CsvWriter(const std::filesystem::path& path, const OutputMeta& meta,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), n_columns_(columns.size()) {
  if (!out_) throw ConfigError("cannot write " + path.string());
  out_ << "# " << meta.version << "\n";
  out_ << "# config_hash " << meta.config_hash << "\n";
  out_ << "# file " << path.filename().string() << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }

CsvWriter& CsvWriter::cell(int v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (pending_) line_ += ',';
  line_ += v;
  ++pending_;
  return *this;
}

void CsvWriter::end_row() {
  if (pending_ != n_columns_) throw InvariantViolation("csv row has the wrong number of cells");
  line_ += '\n';
  out_ << line_;
  line_.clear();
  pending_ = 0;
}

void CsvWriter::row(std::initializer_list<double> values) {
  for (double v : values) cell(v);
  end_row();
}

void write_columns(const std::filesystem::path& path, const OutputMeta& meta, const Eigen::VectorXd& omega,
                   const Eigen::MatrixXcd& columns) {
  std::vector<std::string> names{"omega"};
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    names.push_back("re_" + std::to_string(c));
    names.push_back("im_" + std::to_string(c));
  }
  CsvWriter w(path, meta, names);
  for (Eigen::Index r = 0; r < columns.rows(); ++r) {
    w.cell(omega(r));
    for (Eigen::Index c = 0; c < columns.cols(); ++c) w.cell(columns(r, c).real()).cell(columns(r, c).imag());
    w.end_row();
  }
}

void write_json(const std::filesystem::path& path, const OutputMeta& meta, nlohmann::json body) {
  body["_meta"] = {{"version", meta.version}, {"config_hash", meta.config_hash}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << body.dump(2) << "\n";
}

}  // namespace pulsesq::cli
