#include "hadeq/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hadeq/error.hpp"

namespace hadeq {

namespace {

[[noreturn]] void reject(const std::string& what) { throw Error(ErrorCode::kInvalidSchedule, what); }

}  // namespace

const char* to_string(Schedule::Kind kind) {
  switch (kind) {
    case Schedule::Kind::kConstant: return "constant";
    case Schedule::Kind::kGeometric: return "geometric";
    case Schedule::Kind::kHarmonic: return "harmonic";
    case Schedule::Kind::kCustom: return "custom";
  }
  return "unknown";
}

Schedule Schedule::constant(double c) {
  if (!std::isfinite(c)) reject("constant schedule value must be finite");
  return Schedule(Kind::kConstant, c, 1.0, {});
}

Schedule Schedule::geometric(double a, double q) {
  if (!std::isfinite(a) || !std::isfinite(q) || !(q > 0.0)) reject("geometric schedule needs finite a and q > 0");
  return Schedule(Kind::kGeometric, a, q, {});
}

Schedule Schedule::harmonic() { return Schedule(Kind::kHarmonic, 1.0, 1.0, {}); }

Schedule Schedule::custom(std::vector<double> values) {
  if (values.empty()) reject("custom schedule needs at least one value");
  for (double v : values) {
    if (!std::isfinite(v)) reject("custom schedule values must be finite");
  }
  return Schedule(Kind::kCustom, 0.0, 0.0, std::move(values));
}

double Schedule::at(int k) const {
  if (k < 0) throw Error(ErrorCode::kContractViolation, "schedule index must be >= 0");
  switch (kind_) {
    case Kind::kConstant: return a_;
    case Kind::kGeometric: return a_ * std::pow(q_, k);
    case Kind::kHarmonic: return 1.0 / (k + 1.0);
    case Kind::kCustom: return values_[std::min(static_cast<std::size_t>(k), values_.size() - 1)];
  }
  return 0.0;
}

double Schedule::validate_as_lambda(double theta) const {
  auto above = [&](double v, const char* what) {
    if (!(v > theta)) reject(std::string(what) + " lambda value " + std::to_string(v) + " is not above theta " + std::to_string(theta));
  };
  switch (kind_) {
    case Kind::kConstant:
      above(a_, "constant");
      return a_;
    case Kind::kGeometric:
      if (q_ > 1.0) reject("increasing geometric lambda schedule is unbounded");
      above(a_, "geometric");
      // a q^k -> 0, so for q < 1 the values only stay above theta when theta = 0.
      if (q_ < 1.0 && theta > 0.0) reject("decreasing geometric lambda schedule eventually falls below theta");
      return a_;
    case Kind::kHarmonic:
      if (theta > 0.0) reject("harmonic lambda schedule eventually falls below theta");
      return 1.0;
    case Kind::kCustom:
      for (double v : values_) above(v, "custom");
      return *std::max_element(values_.begin(), values_.end());
  }
  reject("unknown schedule kind");
}

double Schedule::validate_as_error() const {
  switch (kind_) {
    case Kind::kConstant:
      if (a_ != 0.0) reject("constant error schedule must be 0 to be summable");
      return 0.0;
    case Kind::kGeometric:
      if (a_ < 0.0) reject("error schedule must be nonnegative");
      if (!(q_ < 1.0)) reject("geometric error schedule needs q < 1 to be summable");
      return a_ / (1.0 - q_);
    case Kind::kHarmonic:
      reject("harmonic error schedule is not summable");
    case Kind::kCustom:
      for (double v : values_) {
        if (v < 0.0) reject("error schedule must be nonnegative");
      }
      if (values_.back() != 0.0) reject("custom error schedule must end in 0 (its tail repeats the last value)");
      return std::accumulate(values_.begin(), values_.end(), 0.0);
  }
  reject("unknown schedule kind");
}

void Schedule::validate_as_alpha() const {
  switch (kind_) {
    case Kind::kHarmonic: return;
    case Kind::kConstant: reject("constant alpha schedule does not vanish");
    case Kind::kGeometric: reject("geometric alpha schedule is summable");
    case Kind::kCustom: reject("custom alpha schedule cannot be certified to have a divergent sum");
  }
  reject("unknown schedule kind");
}

}  // namespace hadeq
