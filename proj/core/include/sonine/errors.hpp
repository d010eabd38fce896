#pragma once

#include <stdexcept>
#include <string>

namespace sonine {

// Argument outside the mathematical domain (poles, nonpositive orders, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Argument inside the domain but outside what the implementation covers.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

// Quadrature or iteration did not reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double where = 0.0)
        : std::runtime_error(what), where_(where) {}
    double where() const noexcept { return where_; }

private:
    double where_;
};

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested data was not retained by the producer.
class UnavailableError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& file, int line, const std::string& msg);
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace sonine
