#pragma once

#include <string>

#include <json.hpp>

namespace a2lab {

/// Suite outcome in the report schema {suite, instances, passed, failed,
/// witnesses[]}.
struct VerificationReport {
  std::string suite;
  int instances = 0;
  int passed = 0;
  int failed = 0;
  nlohmann::json witnesses = nlohmann::json::array();

  explicit VerificationReport(std::string name = "") : suite(std::move(name)) {}

  void check(bool ok, const nlohmann::json& witness_on_failure) {
    ++instances;
    if (ok) {
      ++passed;
    } else {
      ++failed;
      witnesses.push_back(witness_on_failure);
    }
  }

  bool ok() const { return failed == 0 && instances > 0; }

  nlohmann::json to_json() const {
    return nlohmann::json{{"suite", suite},
                          {"instances", instances},
                          {"passed", passed},
                          {"failed", failed},
                          {"witnesses", witnesses}};
  }
};

}  // namespace a2lab
