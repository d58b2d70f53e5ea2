#pragma once

#include <string>

namespace textknn {

struct Document {
  std::string label;
  std::string text;

  bool operator==(const Document&) const = default;
};

}  // namespace textknn
