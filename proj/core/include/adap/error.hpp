#pragma once

#include <stdexcept>
#include <string>

namespace adap {

enum class ErrorKind {
    Parse,       // malformed input file or manifest
    Degenerate,  // data admits no meaningful similarity scale
    Contract,    // caller violated a precondition
    Undefined,   // quantity is mathematically undefined for the input
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace adap
