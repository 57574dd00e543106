#pragma once

#include <stdexcept>
#include <string>

namespace pentimento {

/// A caller broke a documented precondition (negative duration, bad config).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data is malformed or does not fit the expected schema.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

class ScheduleError : public DataError {
public:
    using DataError::DataError;
};

/// Base for failures of the simulated instrument or the model itself.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CalibrationError : public ModelError {
public:
    CalibrationError(const std::string& route_id, const std::string& what)
        : ModelError("calibration failed for route '" + route_id + "': " + what),
          route_id_(route_id) {}

    const std::string& route_id() const noexcept { return route_id_; }

private:
    std::string route_id_;
};

class MeasurementError : public ModelError {
public:
    MeasurementError(const std::string& route_id, const std::string& what)
        : ModelError("measurement failed for route '" + route_id + "': " + what),
          route_id_(route_id) {}

    const std::string& route_id() const noexcept { return route_id_; }

private:
    std::string route_id_;
};

} // namespace pentimento
