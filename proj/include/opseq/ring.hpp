#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace opseq {

using Integer = mpz_class;
using Scalar = mpq_class;

enum class RingKind { prime_field, rationals, integers };

/// Coefficient ring k. Scalars are stored as exact rationals; over 𝔽_p they
/// are kept as canonical representatives in [0, p), over ℤ as integers.
class Ring {
public:
    static Ring prime_field(std::uint64_t p);
    static Ring rationals() { return Ring(RingKind::rationals, 0); }
    static Ring integers() { return Ring(RingKind::integers, 0); }

    /// Accepts "F<p>", "Q" or "Z".
    static Ring parse(std::string_view text);

    RingKind kind() const noexcept { return kind_; }
    std::uint64_t characteristic() const noexcept { return p_; }
    bool is_field() const noexcept { return kind_ != RingKind::integers; }
    bool is_integers() const noexcept { return kind_ == RingKind::integers; }
    std::string name() const;

    Scalar reduce(const Scalar& x) const;
    Scalar from_int(long v) const { return reduce(Scalar(v)); }
    Scalar add(const Scalar& a, const Scalar& b) const { return reduce(a + b); }
    Scalar sub(const Scalar& a, const Scalar& b) const { return reduce(a - b); }
    Scalar mul(const Scalar& a, const Scalar& b) const { return reduce(a * b); }
    Scalar neg(const Scalar& a) const { return reduce(-a); }
    /// Multiplicative inverse; throws on non-units.
    Scalar inverse(const Scalar& a) const;
    bool is_unit(const Scalar& a) const;

    /// Bit-exact string forms: decimal integers, "a/b" in lowest terms, field
    /// representatives in [0, p).
    std::string format(const Scalar& x) const;
    Scalar parse_scalar(std::string_view text) const;

    bool operator==(const Ring& other) const noexcept { return kind_ == other.kind_ && p_ == other.p_; }

private:
    Ring(RingKind kind, std::uint64_t p)
        : kind_(kind), p_(p), modulus_(static_cast<unsigned long>(p))
    {
    }

    RingKind kind_;
    std::uint64_t p_;
    Integer modulus_;
};

/// Koszul sign helper: (-1)^n as a scalar.
inline Scalar sign_of(long n) { return (n % 2 == 0) ? Scalar(1) : Scalar(-1); }

} // namespace opseq
