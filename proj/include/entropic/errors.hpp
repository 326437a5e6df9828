#ifndef ENTROPIC_ERRORS_HPP
#define ENTROPIC_ERRORS_HPP

#include <stdexcept>

namespace entropic {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySampleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace entropic

#endif
