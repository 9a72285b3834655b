#pragma once

#include <stdexcept>
#include <string>

namespace levilab {

// Base for every error the library raises. Callers that only care about
// the exit-code class use is_validation_error().
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed user input: expression syntax, scenario files, bad settings.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t column, int line = 0)
        : ValidationError(what + " (column " + std::to_string(column) + ")", line),
          column_(column) {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

// Numeric evaluation left the domain of an elementary function.
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::string subtree)
        : Error(what + " in `" + subtree + "`"), subtree_(std::move(subtree)) {}
    const std::string& subtree() const noexcept { return subtree_; }

private:
    std::string subtree_;
};

class SingularPointError : public Error {
public:
    using Error::Error;
};

class NotInHError : public Error {
public:
    using Error::Error;
};

class OffSurfaceError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class NonEntireError : public Error {
public:
    using Error::Error;
};

inline bool is_validation_error(const std::exception& e) {
    return dynamic_cast<const ValidationError*>(&e) != nullptr;
}

}  // namespace levilab
