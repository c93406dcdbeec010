#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbc/dsl.hpp"

namespace testing_support {

inline std::string models_dir() { return SBC_MODELS_DIR; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string model_path(const std::string& file) { return models_dir() + "/" + file; }

// Parses a bundled model; any diagnostic is a hard failure.
inline sbc::Model load_model(const std::string& file) {
  auto r = sbc::parse_model(read_file(model_path(file)));
  if (!r.diagnostics.empty()) {
    std::string msg = file + ":";
    for (const auto& d : r.diagnostics) msg += " " + sbc::to_string(d.loc) + " " + d.message;
    throw std::runtime_error(msg);
  }
  return r.model;
}

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> files{"counter.sbc", "atm.sbc", "iod.sbc"};
  return files;
}

}  // namespace testing_support
