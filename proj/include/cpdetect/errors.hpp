#pragma once

#include <stdexcept>
#include <string>

namespace cpdetect {

/// Malformed or inconsistent input (empty series, bad CSV, out-of-range time).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A parameter outside the support of a density or intensity.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Intensity evaluated where it diverges (t = 0 with a decreasing power law).
class SingularityError : public std::domain_error {
public:
    explicit SingularityError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace cpdetect
