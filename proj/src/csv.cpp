#include "bridgelab/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bridgelab::csv {

namespace {

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

double parse_field(const std::string& field, const std::string& path) {
  const char* begin = field.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw std::runtime_error("malformed numeric field '" + field + "' in " + path);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string distance_matrix_to_string(const walks::DistanceMatrix& dm) {
  std::string out;
  const std::size_t m = dm.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j > 0) out += ',';
      out += format_double(dm.entries(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_distance_matrix(const walks::DistanceMatrix& dm, const std::string& path) {
  write_text(distance_matrix_to_string(dm), path);
}

walks::DistanceMatrix read_distance_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open distance matrix: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(parse_field(field, path));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty distance matrix: " + path);
  const std::size_t m = rows.size();
  for (const auto& row : rows) {
    if (row.size() != m) {
      throw std::runtime_error("distance matrix is not square: " + path);
    }
  }
  walks::DistanceMatrix dm{Matrix(m, m), 1.0};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) dm.entries(i, j) = rows[i][j];
  }
  return dm;
}

std::string subordinator_to_string(const limits::SubordinatorSample& sample) {
  std::string out = "x,y\n";
  for (const limits::Atom& atom : sample.atoms) {
    out += format_double(atom.x);
    out += ',';
    out += format_double(atom.y);
    out += '\n';
  }
  return out;
}

void write_subordinator(const limits::SubordinatorSample& sample,
                        const std::string& path) {
  write_text(subordinator_to_string(sample), path);
}

std::string report_to_string(const harness::ConvergenceReport& report) {
  const harness::StudyConfig& config = report.config;
  const std::string study = harness::to_string(config.study);
  const std::string family = increments::to_string(config.family);
  const std::string alpha = config.alpha ? format_double(*config.alpha) : "";
  const std::string m = std::to_string(config.m);

  std::string out = "study,family,alpha,d,n,m,trial,statistic,value\n";
  for (const harness::TrialRecord& row : report.rows) {
    out += study;
    out += ',';
    out += family;
    out += ',';
    out += alpha;
    out += ',';
    out += std::to_string(row.d);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += m;
    out += ',';
    out += std::to_string(row.trial);
    out += ',';
    out += row.statistic;
    out += ',';
    out += format_double(row.value);
    out += '\n';
  }
  return out;
}

void write_report(const harness::ConvergenceReport& report, const std::string& path) {
  write_text(report_to_string(report), path);
}

}  // namespace bridgelab::csv
