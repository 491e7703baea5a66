#pragma once

#include <stdexcept>
#include <string>

namespace pptqmc {

/// Invalid run or sequence configuration (bad base, malformed config file, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain of a map (cube coordinate out of [0,1),
/// zero eigenvalue handed to a monotone density, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sizes that do not fit together.
class DimensionError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Requested quantity does not exist for this setup (e.g. pooling with N = M).
class NotApplicable : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pptqmc
