#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dessins/dessin.hpp"

namespace fixture {

inline std::string path(const std::string& rel) { return std::string(DESSINS_FIXTURE_DIR) + "/" + rel; }

inline std::string read(const std::string& rel) {
  std::ifstream in(path(rel));
  if (!in)
    throw std::runtime_error("missing fixture " + rel);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline dessins::Dessin dessin(const std::string& name) {
  return dessins::parse_dessin_text(read("dessins/" + name + ".dessin"));
}

} // namespace fixture
