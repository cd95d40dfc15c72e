#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string_view>

namespace onefifth {

using Fitness = std::uint64_t;

/// Fitness-evaluation accounting for one run. `charge()` refuses to go past the
/// budget, so `count() <= budget()` holds at all times.
class EvalCounter {
 public:
  static constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

  explicit EvalCounter(std::uint64_t budget = kUnbounded) : budget_(budget) {
    if (budget == 0) throw std::invalid_argument("EvalCounter: budget must be positive");
  }

  /// Charges one evaluation. Returns false (and charges nothing) when the
  /// budget is already spent.
  [[nodiscard]] bool charge() noexcept {
    if (count_ >= budget_) return false;
    ++count_;
    return true;
  }

  std::uint64_t count() const noexcept { return count_; }
  std::uint64_t budget() const noexcept { return budget_; }
  bool exhausted() const noexcept { return count_ >= budget_; }

 private:
  std::uint64_t count_ = 0;
  std::uint64_t budget_;
};

struct RunRecord {
  std::uint64_t evaluations = 0;
  bool reached_optimum = false;
  Fitness final_fitness = 0;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

enum class Outcome { improved, equal, worse };

constexpr Outcome classify(Fitness before, Fitness after) noexcept {
  if (after > before) return Outcome::improved;
  if (after == before) return Outcome::equal;
  return Outcome::worse;
}

constexpr std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::improved: return "improved";
    case Outcome::equal: return "equal";
    case Outcome::worse: return "worse";
  }
  return "?";
}

}  // namespace onefifth
