#ifndef BEAMLAB_ERRORS_HPP
#define BEAMLAB_ERRORS_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace beamlab {

/// Error raised when inputs violate a documented precondition or when a
/// computation must abort (instability, boundary contamination, ...).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace beamlab

// Throws beamlab::Error with a streamed message when cond is false.
#define BEAMLAB_REQUIRE(cond, msg)                  \
    do {                                            \
        if (!(cond)) {                              \
            std::ostringstream beamlab_oss_;        \
            beamlab_oss_ << msg;                    \
            throw beamlab::Error(beamlab_oss_.str()); \
        }                                           \
    } while (0)

#endif
