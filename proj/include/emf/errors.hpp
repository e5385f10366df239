#pragma once

#include <stdexcept>
#include <string>

namespace emf {

/// Singular geometry or an argument outside a formula's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UnknownProfileError : public std::invalid_argument {
public:
    explicit UnknownProfileError(const std::string& name)
        : std::invalid_argument("unknown built-in profile: '" + name + "'") {}
};

/// A spec or profile that fails validation; thrown before any computation runs.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MetricMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exposure stays above the limit over the whole search bracket.
class BracketExhaustedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace emf
