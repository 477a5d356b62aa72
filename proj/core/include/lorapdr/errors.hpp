#pragma once

#include <stdexcept>
#include <string>

namespace lorapdr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (bad SF, airtime >= period, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

/// Inputs fall outside the domain where an analytic model is defined.
class ModelDomainError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

class ProtocolError : public Error {
public:
    using Error::Error;
};

class ConnectivityError : public Error {
public:
    using Error::Error;
};

class RosterError : public Error {
public:
    using Error::Error;
};

class OrchestrationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class UndefinedPdrError : public Error {
public:
    using Error::Error;
};

}  // namespace lorapdr
