// Copyright 2026 The qdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <qdc_app/output.hpp>

#include <qdc_app/config.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace qdc::app {

std::string format_number(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, result.ptr};
}

CsvTable::CsvTable(std::string hash, std::vector<std::string> columns)
    : hash_(std::move(hash)), columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw std::logic_error("csv: row width does not match the header");
  }
  rows_.push_back(cells);
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out << (i ? "," : "") << cells[i];
  }
  out << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << "# config_hash=" << hash_ << '\n';
  write_line(out, columns_);
  for (const auto& row : rows_) {
    write_line(out, row);
  }
}

ParsedCsv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  ParsedCsv csv;
  std::string line;
  const std::string prefix = "# config_hash=";
  if (!std::getline(in, line) || line.rfind(prefix, 0) != 0) {
    throw std::runtime_error(path + ": missing config hash line");
  }
  csv.hash = line.substr(prefix.size());
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": missing header");
  }
  csv.columns = split(line);
  while (std::getline(in, line)) {
    csv.rows.push_back(split(line));
  }
  return csv;
}

CsvTable metrics_table(const std::string& hash, const std::vector<IterationRecord>& trace,
                       const std::vector<double>& seconds) {
  CsvTable table(hash, kMetricsColumns);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const IterationRecord& r = trace[i];
    table.add_row({std::to_string(r.p), format_number(r.f_avg), format_number(r.f_min), format_number(r.cost),
                   format_number(r.ess), format_number(r.d_tilde), format_number(r.lambda),
                   format_number(i < seconds.size() ? seconds[i] : 0.0)});
  }
  return table;
}

nlohmann::json schedule_to_json(const ControlSchedule& schedule, Frame frame, const std::string& hash) {
  nlohmann::json pulses = nlohmann::json::array();
  for (Eigen::Index a = 0; a < schedule.n_controls(); ++a) {
    nlohmann::json channel = nlohmann::json::array();
    for (Eigen::Index k = 0; k < schedule.n_bins(); ++k) {
      channel.push_back(schedule(a, k));
    }
    pulses.push_back(std::move(channel));
  }
  const TimeGrid& g = schedule.grid();
  return {{"config_hash", hash},
          {"frame", frame == Frame::lab ? "lab" : "rotating"},
          {"grid", {{"T", g.horizon()}, {"N_T", g.n_steps()}, {"K", g.n_bins()}}},
          {"pulses", pulses}};
}

LoadedSchedule schedule_from_json(const nlohmann::json& doc) {
  try {
    const auto& g = doc.at("grid");
    const TimeGrid grid(g.at("T").get<double>(), g.at("N_T").get<int>(), g.at("K").get<int>());
    const auto& pulses = doc.at("pulses");
    if (!pulses.is_array() || pulses.empty()) {
      throw ConfigError("schedule: pulses must be a non-empty array");
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(pulses.size()), grid.n_bins());
    for (std::size_t i = 0; i < pulses.size(); ++i) {
      if (pulses[i].size() != static_cast<std::size_t>(grid.n_bins())) {
        throw ConfigError("schedule: every pulse channel needs K entries");
      }
      for (int k = 0; k < grid.n_bins(); ++k) {
        a(static_cast<Eigen::Index>(i), k) = pulses[i][static_cast<std::size_t>(k)].get<double>();
      }
    }
    const std::string frame = doc.at("frame").get<std::string>();
    if (frame != "lab" && frame != "rotating") {
      throw ConfigError("schedule: frame must be lab or rotating");
    }
    return {ControlSchedule(std::move(a), grid), frame == "lab" ? Frame::lab : Frame::rotating};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
}

LoadedSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open schedule file " + path);
  }
  try {
    return schedule_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << doc.dump(2) << '\n';
}

}  // namespace qdc::app
