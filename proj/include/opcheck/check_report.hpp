#pragma once

#include <map>
#include <string>
#include <vector>

namespace opcheck {

// A failed identity, with enough parameters to replay it: which axiom
// family, and the integers (arities, slots, permutation ranks) that pin
// down the single instance that was violated.

struct Finding {
  std::string check;
  std::map<std::string, long> where;
  std::string note;
};

struct CheckReport {
  std::vector<Finding> failures;

  bool ok() const { return failures.empty(); }

  void fail(std::string check, std::map<std::string, long> where = {},
            std::string note = "") {
    failures.push_back({std::move(check), std::move(where), std::move(note)});
  }

  void merge(const CheckReport& other) {
    failures.insert(failures.end(), other.failures.begin(),
                    other.failures.end());
  }
};

}  // namespace opcheck
