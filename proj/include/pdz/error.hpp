#pragma once

#include <stdexcept>
#include <string>

namespace pdz {

// Base of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke a precondition (bad parameter, zero probability where
// positive ones are required, length mismatch, ...).
class invalid_argument : public error {
public:
    using error::error;
};

// Text input could not be read as a distribution.
class parse_error : public error {
public:
    using error::error;
};

// p_i > 0 against q_i = 0.
class infinite_divergence : public error {
public:
    using error::error;
};

// Encoded data (payload bits or container bytes) is malformed.
class corrupt_data : public error {
public:
    using error::error;
};

}  // namespace pdz
