#ifndef ADLIFT_ERRORS_HPP
#define ADLIFT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adlift {

// Argument outside the mathematical domain of a routine (|u| > 1, rate <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed or inconsistent input data. Base of the loader error family.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing minute in a visit series. Carries the first missing timestamp.
class GapError : public DataError {
public:
    GapError(const std::string& msg, std::string first_missing)
        : DataError(msg), first_missing_(std::move(first_missing)) {}

    const std::string& first_missing() const noexcept { return first_missing_; }

private:
    std::string first_missing_;
};

// Invalid field value. Carries the 1-based data row number (header excluded).
class ValueError : public DataError {
public:
    ValueError(const std::string& msg, std::size_t row) : DataError(msg), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_ = 0;
};

// Record outside the span covered by the series.
class RangeError : public DataError {
public:
    using DataError::DataError;
};

// Bad run configuration (missing file, unknown key, unparsable value).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure in an estimation stage.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace adlift

#endif
