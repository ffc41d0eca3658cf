#pragma once

#include <stdexcept>
#include <string>

namespace mpjc {

// Machine-readable failure categories. Every error thrown by the engine
// carries one of these so the CLI can map it to a stable exit code and a
// structured JSON diagnostic.
enum class errc {
    invalid_parameter,    // caller violated a documented precondition
    case_mismatch,        // analytic routine called for the wrong ladder case
    analytic_domain,      // parameters outside an analytic branch's validity
    coupling_overflow,    // a ladder coupling factor is not representable
    hermiticity_violation,// an internally-Hermitian quantity drifted
    quadrature_failure,   // adaptive quadrature failed to reach tolerance
    integrator_failure,   // adaptive ODE step control failed / trace drifted
    truncation_overflow,  // strict mode: population leaked into the cutoff band
    eigensolver_failure,  // Eigen backend reported non-convergence
    config_error,         // scenario/config text could not be parsed or validated
    io_error,             // output files could not be written
};

// Stable identifier string for an error category (used in CLI JSON output).
const char* errc_name(errc kind) noexcept;

// Process exit code the CLI uses for an error category:
//   2 = configuration / validation, 3 = numerical failure, 4 = strict truncation.
int errc_exit_code(errc kind) noexcept;

// Engine exception type: a runtime_error tagged with a category.
class error : public std::runtime_error {
  public:
    error(errc kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    errc kind() const noexcept { return kind_; }

  private:
    errc kind_;
};

// Convenience: throw error{kind, message} after streaming-style formatting
// has already happened at the call site.
[[noreturn]] inline void fail(errc kind, const std::string& message) {
    throw error(kind, message);
}

// Precondition helper: throws invalid_parameter unless cond holds.
inline void require(bool cond, const std::string& message) {
    if (!cond) fail(errc::invalid_parameter, message);
}

}  // namespace mpjc
