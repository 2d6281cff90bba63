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

#ifndef QDC_APP_OUTPUT_HPP
#define QDC_APP_OUTPUT_HPP

#include <qdc/picontrol.hpp>
#include <qdc/problems.hpp>

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace qdc::app {

/// Shortest "%.17g" rendering; parses back to the same double.
std::string format_number(double x);

/// Comma-separated table whose first line is `# config_hash=<hash>`.
class CsvTable {
 public:
  CsvTable(std::string hash, std::vector<std::string> columns);

  void add_row(const std::vector<std::string>& cells);
  void write(const std::string& path) const;

 private:
  std::string hash_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct ParsedCsv {
  std::string hash;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

ParsedCsv read_csv(const std::string& path);

/// metrics.csv: p,F_avg,F_min,C,ESS,D_tilde,lambda,seconds.
CsvTable metrics_table(const std::string& hash, const std::vector<IterationRecord>& trace,
                       const std::vector<double>& seconds);

inline const std::vector<std::string> kMetricsColumns{"p", "F_avg", "F_min", "C", "ESS", "D_tilde", "lambda",
                                                      "seconds"};

nlohmann::json schedule_to_json(const ControlSchedule& schedule, Frame frame, const std::string& hash);

struct LoadedSchedule {
  ControlSchedule schedule;
  Frame frame = Frame::lab;
};

/// Throws ConfigError on schema violations.
LoadedSchedule schedule_from_json(const nlohmann::json& doc);
LoadedSchedule load_schedule(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace qdc::app

#endif
