#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace freeshift {

/// Caller violated an operation's precondition (mismatched ranks, bad
/// vertex, malformed input text).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the domain where a construction is defined, e.g. a
/// run-label configuration whose cells are not run shaped.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A materialization exceeded an explicit resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A labeled edge required by a traversal is missing or not unique.
class ActionabilityError : public std::runtime_error {
 public:
  ActionabilityError(std::string vertex, std::string letter, std::size_t found)
      : std::runtime_error("network not actionable at " + vertex + " for letter " +
                           letter + " (" + std::to_string(found) + " candidate edges)"),
        vertex_(std::move(vertex)),
        letter_(std::move(letter)) {}

  const std::string& vertex() const { return vertex_; }
  const std::string& letter() const { return letter_; }

 private:
  std::string vertex_;
  std::string letter_;
};

/// A bracket or run scan walked `budget` steps without finding its partner.
/// Signals either an astronomically long excursion or a budget that is too
/// small; the scan never truncates silently.
class ScanBudgetExceeded : public std::runtime_error {
 public:
  ScanBudgetExceeded(std::string site, int direction, std::int64_t budget)
      : std::runtime_error("scan budget of " + std::to_string(budget) +
                           " steps exhausted from " + site + " in direction " +
                           (direction > 0 ? "+" : "-")),
        site_(std::move(site)),
        direction_(direction),
        budget_(budget) {}

  const std::string& site() const { return site_; }
  int direction() const { return direction_; }
  std::int64_t budget() const { return budget_; }

 private:
  std::string site_;
  int direction_;
  std::int64_t budget_;
};

/// An orbit witness search found no (or more than one) candidate.
class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace freeshift
