// Copyright 2026 The maskq Authors.
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
#ifndef MASKQ_SVG_H_
#define MASKQ_SVG_H_

#include <string>
#include <vector>

namespace maskq {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal standalone SVG documents.
std::string LineChart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series);
std::string BarChart(const std::string& title, const std::string& y_label,
                     const std::vector<std::string>& labels, const std::vector<double>& values);

}  // namespace maskq

#endif  // MASKQ_SVG_H_
