#pragma once

#include <stdexcept>
#include <string>

namespace opseq {

enum class Errc {
    invalid_argument,
    ring_mismatch,
    not_a_submodule,
    project_undefined,
    lift_failed,
    preimage_failed,
    closure_violation,
    well_definedness_violation,
    arity_out_of_range,
    unsupported_arity,
    unsupported,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace opseq
