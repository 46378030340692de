#pragma once

#include <string>

namespace opseq {

/// Outcome of an axiom check. Empty law means the check passed.
struct CheckReport {
    std::string law;
    std::string detail;

    bool ok() const noexcept { return law.empty(); }
    explicit operator bool() const noexcept { return ok(); }
    std::string to_string() const { return ok() ? "ok" : law + ": " + detail; }

    static CheckReport pass() { return {}; }
    static CheckReport fail(std::string law, std::string detail) { return {std::move(law), std::move(detail)}; }
};

} // namespace opseq
