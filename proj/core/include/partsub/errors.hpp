#pragma once

#include <stdexcept>
#include <string>

namespace partsub {

// Error taxonomy shared by every module. The CLI maps these onto process exit
// codes (config -> 2, io -> 3, everything else surfaces as a failure -> 1).
enum class ErrorKind {
    Domain,     // argument outside the documented precondition
    Config,     // inconsistent or infeasible parameters
    Resource,   // work would exceed a configured budget (grid too large, ...)
    Budget,     // per-round query budget exceeded
    Integrity,  // an oracle returned non-matroidal / inconsistent answers
    Io,         // file read/write problems
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(ErrorKind::Domain, m) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorKind::Config, m) {}
};
struct ResourceError : Error {
    explicit ResourceError(const std::string& m) : Error(ErrorKind::Resource, m) {}
};
struct BudgetError : Error {
    explicit BudgetError(const std::string& m) : Error(ErrorKind::Budget, m) {}
};
struct IntegrityError : Error {
    explicit IntegrityError(const std::string& m) : Error(ErrorKind::Integrity, m) {}
};
struct IoError : Error {
    explicit IoError(const std::string& m) : Error(ErrorKind::Io, m) {}
};

}  // namespace partsub
