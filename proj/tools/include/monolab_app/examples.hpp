#pragma once

#include "monolab_app/scenario.hpp"

#include <functional>
#include <string>
#include <vector>

namespace monolab::app {

struct ExampleCheck {
  bool pass = true;
  std::string detail;
};

/// A golden scenario plus the expectations on its report.
struct Example {
  std::string name;
  std::string summary;
  Json scenario;
  std::function<ExampleCheck(const Json& report)> check;
};

const std::vector<Example>& builtin_examples();

}  // namespace monolab::app
