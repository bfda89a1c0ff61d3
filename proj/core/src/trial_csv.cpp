/*
 * Copyright 2026 The mimoic Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.

*/

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mimoic/harness.hpp"

namespace mimoic::harness {

namespace {

std::string format_double(double value) {
  if (std::isnan(value)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double parse_double(const std::string& field, std::size_t line) {
  if (field.empty()) return kMissing;
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || errno == ERANGE) {
    std::ostringstream msg;
    msg << "csv line " << line << ": bad number '" << field << "'";
    throw std::runtime_error(msg.str());
  }
  return value;
}

int parse_int(const std::string& field, std::size_t line) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(field, &used);
    if (used == field.size()) return value;
  } catch (const std::exception&) {
  }
  std::ostringstream msg;
  msg << "csv line " << line << ": bad integer '" << field << "'";
  throw std::runtime_error(msg.str());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

double quantize(double value) {
  if (!std::isfinite(value)) return value;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

void write_csv(std::ostream& os, const std::vector<TrialRow>& rows) {
  os << kCsvHeader << '\n';
  for (const TrialRow& r : rows) {
    os << r.algorithm << ',' << r.mc << ',' << format_double(r.snr_db) << ',' << r.user << ','
       << r.stream << ',' << format_double(r.sinr) << ',' << format_double(r.rate) << ','
       << format_double(r.user_rate) << ',' << format_double(r.sum_rate) << ','
       << format_double(r.sum_stream_rate) << ',' << format_double(r.leakage) << ',' << r.iters
       << ',' << (r.converged ? 1 : 0) << ',' << format_double(r.wall_ms) << ',' << r.pc << ','
       << format_double(r.pc_sinr) << ',' << format_double(r.pc_rate) << '\n';
  }
}

std::vector<TrialRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::vector<TrialRow> rows;
  std::size_t number = 1;
  while (std::getline(is, line)) {
    ++number;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != 17) {
      std::ostringstream msg;
      msg << "csv line " << number << ": expected 17 fields, got " << f.size();
      throw std::runtime_error(msg.str());
    }
    TrialRow r;
    r.algorithm = f[0];
    r.mc = parse_int(f[1], number);
    r.snr_db = parse_double(f[2], number);
    r.user = parse_int(f[3], number);
    r.stream = parse_int(f[4], number);
    r.sinr = parse_double(f[5], number);
    r.rate = parse_double(f[6], number);
    r.user_rate = parse_double(f[7], number);
    r.sum_rate = parse_double(f[8], number);
    r.sum_stream_rate = parse_double(f[9], number);
    r.leakage = parse_double(f[10], number);
    r.iters = parse_int(f[11], number);
    r.converged = parse_int(f[12], number) != 0;
    r.wall_ms = parse_double(f[13], number);
    r.pc = f[14];
    r.pc_sinr = parse_double(f[15], number);
    r.pc_rate = parse_double(f[16], number);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_csv_file(const std::string& path, const std::vector<TrialRow>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(os, rows);
  if (!os) throw std::runtime_error("failed writing " + path);
}

std::vector<TrialRow> read_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_csv(is);
}

}  // namespace mimoic::harness
