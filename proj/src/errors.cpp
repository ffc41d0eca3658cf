#include "mpjc/errors.hpp"

namespace mpjc {

const char* errc_name(errc kind) noexcept {
    switch (kind) {
        case errc::invalid_parameter: return "invalid_parameter";
        case errc::case_mismatch: return "case_mismatch";
        case errc::analytic_domain: return "analytic_domain";
        case errc::coupling_overflow: return "coupling_overflow";
        case errc::hermiticity_violation: return "hermiticity_violation";
        case errc::quadrature_failure: return "quadrature_failure";
        case errc::integrator_failure: return "integrator_failure";
        case errc::truncation_overflow: return "truncation_overflow";
        case errc::eigensolver_failure: return "eigensolver_failure";
        case errc::config_error: return "config_error";
        case errc::io_error: return "io_error";
    }
    return "unknown";
}

int errc_exit_code(errc kind) noexcept {
    switch (kind) {
        case errc::invalid_parameter:
        case errc::case_mismatch:
        case errc::analytic_domain:
        case errc::config_error:
        case errc::io_error:
            return 2;
        case errc::coupling_overflow:
        case errc::hermiticity_violation:
        case errc::quadrature_failure:
        case errc::integrator_failure:
        case errc::eigensolver_failure:
            return 3;
        case errc::truncation_overflow:
            return 4;
    }
    return 3;
}

}  // namespace mpjc
