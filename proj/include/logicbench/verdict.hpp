#pragma once

#include <string>

namespace logicbench {

// Outcome of one student step. Rejections never change the proof state.
struct StepVerdict {
  bool accepted = false;
  std::string reason;   // machine-readable code; empty when accepted
  std::string message;
  std::string locus;    // node / cell / pair the verdict refers to
  std::string detail;   // engine-side data for feedback, e.g. the correct resolvent

  static StepVerdict accept(std::string message, std::string locus = {}) {
    return StepVerdict{true, {}, std::move(message), std::move(locus), {}};
  }
  static StepVerdict reject(std::string reason, std::string message, std::string locus = {},
                            std::string detail = {}) {
    return StepVerdict{false, std::move(reason), std::move(message), std::move(locus), std::move(detail)};
  }

  friend bool operator==(const StepVerdict&, const StepVerdict&) = default;
};

}  // namespace logicbench
