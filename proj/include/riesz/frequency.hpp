#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "riesz/error.hpp"

namespace riesz {

// Default cap on the number of enumerated terms (x <= ~16.8 for log n).
inline constexpr std::size_t kDefaultMaxTerms = 20'000'000;

enum class FrequencyKind { Integer, LogInteger, Explicit };

inline const char* to_string(FrequencyKind kind) {
  switch (kind) {
    case FrequencyKind::Integer: return "integer";
    case FrequencyKind::LogInteger: return "log";
    case FrequencyKind::Explicit: return "explicit";
  }
  return "?";
}

struct Term {
  std::size_t index;  // 1-based
  double lambda;

  friend bool operator==(const Term&, const Term&) = default;
};

/// A strictly increasing, non-negative sequence lambda_1 < lambda_2 < ...
///
/// Integer gives lambda_n = n - 1, LogInteger gives lambda_n = log n, and
/// Explicit holds a finite list. Indices start at 1. Immutable once built.
class Frequency {
 public:
  static Frequency integer() { return Frequency(FrequencyKind::Integer, {}); }
  static Frequency log_integer() { return Frequency(FrequencyKind::LogInteger, {}); }

  static Frequency explicit_values(std::vector<double> values) {
    if (values.empty()) throw RejectNonMonotone("explicit frequency list is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i]) || values[i] < 0.0)
        throw RejectNonMonotone("frequency " + std::to_string(i + 1) + " is negative or not finite");
      if (i > 0 && !(values[i - 1] < values[i]))
        throw RejectNonMonotone("frequencies not strictly increasing at index " + std::to_string(i + 1));
    }
    return Frequency(FrequencyKind::Explicit, std::move(values));
  }

  FrequencyKind kind() const noexcept { return kind_; }
  const std::vector<double>& values() const noexcept { return values_; }

  // Number of available terms; nullopt for the infinite kinds.
  std::optional<std::size_t> size() const noexcept {
    if (kind_ == FrequencyKind::Explicit) return values_.size();
    return std::nullopt;
  }

  double operator[](std::size_t n) const {
    if (n == 0) throw DomainError("frequency index starts at 1");
    switch (kind_) {
      case FrequencyKind::Integer: return static_cast<double>(n - 1);
      case FrequencyKind::LogInteger: return std::log(static_cast<double>(n));
      case FrequencyKind::Explicit:
        if (n > values_.size()) throw DomainError("explicit frequency has no index " + std::to_string(n));
        return values_[n - 1];
    }
    return 0.0;
  }

  // Exact number of indices with lambda_n < x.
  std::size_t count_below(double x) const {
    if (!(x > 0.0)) return kind_ == FrequencyKind::Explicit ? count_explicit(x) : 0;
    switch (kind_) {
      case FrequencyKind::Integer: {
        double c = std::ceil(x);
        return c > 1e18 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(c);
      }
      case FrequencyKind::LogInteger: {
        double e = std::exp(x);
        if (!(e < 1e18)) return static_cast<std::size_t>(-1);
        auto n = static_cast<std::size_t>(std::floor(e));
        while (std::log(static_cast<double>(n + 1)) < x) ++n;
        while (n > 0 && !(std::log(static_cast<double>(n)) < x)) --n;
        return n;
      }
      case FrequencyKind::Explicit: return count_explicit(x);
    }
    return 0;
  }

  /// Calls fn(index, lambda) for every term with lambda < x, in increasing
  /// order. Throws TermBudgetExceeded before enumerating if the count would
  /// exceed max_terms.
  template <class Fn>
  void for_each_below(double x, std::size_t max_terms, Fn&& fn) const {
    std::size_t count = count_below(x);
    if (count > max_terms) throw TermBudgetExceeded(max_terms, x);
    for (std::size_t n = 1; n <= count; ++n) fn(n, (*this)[n]);
  }

 private:
  Frequency(FrequencyKind kind, std::vector<double> values) : kind_(kind), values_(std::move(values)) {}

  std::size_t count_explicit(double x) const {
    std::size_t n = 0;
    while (n < values_.size() && values_[n] < x) ++n;
    return n;
  }

  FrequencyKind kind_;
  std::vector<double> values_;
};

inline Frequency make_frequency(FrequencyKind kind, std::optional<std::vector<double>> explicit_values = {}) {
  switch (kind) {
    case FrequencyKind::Integer: return Frequency::integer();
    case FrequencyKind::LogInteger: return Frequency::log_integer();
    case FrequencyKind::Explicit:
      if (!explicit_values) throw RejectNonMonotone("explicit frequency requires a value list");
      return Frequency::explicit_values(std::move(*explicit_values));
  }
  throw InputError("unknown frequency kind");
}

inline std::vector<Term> terms_below(const Frequency& freq, double x, std::size_t max_terms = kDefaultMaxTerms) {
  if (!(x > 0.0)) throw DomainError("cutoff x must be positive");
  if (max_terms == 0) throw DomainError("max_terms must be positive");
  std::vector<Term> out;
  freq.for_each_below(x, max_terms, [&](std::size_t n, double lambda) { out.push_back({n, lambda}); });
  return out;
}

}  // namespace riesz
