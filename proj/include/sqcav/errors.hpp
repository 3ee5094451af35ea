// errors.hpp: exception hierarchy shared by every sqcav module

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqcav {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class HermiticityViolation : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class TruncationTooSmall : public Error {
public:
    using Error::Error;
};

class InvalidTarget : public Error {
public:
    using Error::Error;
};

// The idle-free carrier/red protocol cannot produce the requested relative
// phase. level() is the photon level whose merge failed.
class PhaseUnreachable : public Error {
public:
    PhaseUnreachable(std::size_t level, const std::string& what)
        : Error(what), level_(level) {}
    std::size_t level() const noexcept { return level_; }

private:
    std::size_t level_;
};

class NotAPhysicalKnob : public Error {
public:
    using Error::Error;
};

class StepTooLarge : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace sqcav
