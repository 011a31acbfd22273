// Copyright 2026 The fogres Authors
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

// Shared helpers for the test binaries.

#ifndef FOGRES_TEST_UTIL_HPP
#define FOGRES_TEST_UTIL_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "fogres/topology.hpp"

namespace fogres::test {

inline std::string data_path(const std::string& name) { return std::string(FOGRES_DATA_DIR) + "/" + name; }
inline std::string oracle_path(const std::string& name) { return std::string(FOGRES_ORACLE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const NetworkInstance& default_instance() {
  static const NetworkInstance inst = load_instance(data_path("default_instance.json"));
  return inst;
}

inline bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)}) ||
         (a == 0.0 && b == 0.0);
}

}  // namespace fogres::test

#endif  // FOGRES_TEST_UTIL_HPP
