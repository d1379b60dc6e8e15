#ifndef EFIMOV4_ERRORS_HPP
#define EFIMOV4_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace efimov4 {

/// invalid configuration or argument value
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// input outside the mathematical domain of an operation
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// iterative scheme failed to bracket or converge
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// result accuracy cannot be guaranteed (cancellation, grid resolution, ...)
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// operation requires a model mode that is not active (e.g. finite a_AA)
struct mode_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// parameter family outside the implemented special-function cases
struct unsupported_case_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// malformed config text; carries the 1-based line number
struct parse_error : std::runtime_error {
    int line;
    parse_error(const std::string& msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

} // namespace efimov4

#endif
