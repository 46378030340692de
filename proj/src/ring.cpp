#include "opseq/ring.hpp"

#include <fmt/core.h>

#include "opseq/error.hpp"

namespace opseq {

namespace {

bool is_prime(std::uint64_t p)
{
    if (p < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

} // namespace

Ring Ring::prime_field(std::uint64_t p)
{
    if (!is_prime(p))
        throw Error(Errc::invalid_argument, fmt::format("{} is not prime", p));
    if (p >= (std::uint64_t(1) << 61))
        throw Error(Errc::invalid_argument, "prime fields require p < 2^61");
    return Ring(RingKind::prime_field, p);
}

Ring Ring::parse(std::string_view text)
{
    if (text == "Q")
        return rationals();
    if (text == "Z")
        return integers();
    if (text.size() >= 2 && text[0] == 'F') {
        std::uint64_t p = 0;
        for (char c : text.substr(1)) {
            if (c < '0' || c > '9')
                throw Error(Errc::invalid_argument, fmt::format("bad ring descriptor '{}'", text));
            p = p * 10 + std::uint64_t(c - '0');
            if (p >= (std::uint64_t(1) << 61))
                throw Error(Errc::invalid_argument, "prime fields require p < 2^61");
        }
        return prime_field(p);
    }
    throw Error(Errc::invalid_argument, fmt::format("bad ring descriptor '{}'", text));
}

std::string Ring::name() const
{
    switch (kind_) {
    case RingKind::prime_field: return fmt::format("F{}", p_);
    case RingKind::rationals: return "Q";
    case RingKind::integers: return "Z";
    }
    return "?";
}

Scalar Ring::reduce(const Scalar& x) const
{
    switch (kind_) {
    case RingKind::rationals:
        return x;
    case RingKind::integers:
        if (x.get_den() != 1)
            throw Error(Errc::invalid_argument, "non-integral value over Z: " + x.get_str());
        return x;
    case RingKind::prime_field: {
        const Integer& p = modulus_;
        Integer num = x.get_num() % p;
        if (num < 0)
            num += p;
        if (x.get_den() == 1)
            return Scalar(num);
        Integer den = x.get_den() % p;
        Integer inv;
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
            throw Error(Errc::invalid_argument, "denominator divisible by the characteristic");
        Integer r = (num * inv) % p;
        return Scalar(r);
    }
    }
    return x;
}

bool Ring::is_unit(const Scalar& a) const
{
    if (a == 0)
        return false;
    if (kind_ == RingKind::integers)
        return a == 1 || a == -1;
    return true;
}

Scalar Ring::inverse(const Scalar& a) const
{
    if (!is_unit(a))
        throw Error(Errc::invalid_argument, "not a unit: " + a.get_str());
    if (kind_ == RingKind::integers)
        return a;
    return reduce(Scalar(1) / a);
}

std::string Ring::format(const Scalar& x) const
{
    Scalar r = reduce(x);
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Scalar Ring::parse_scalar(std::string_view text) const
{
    auto bad = [&]() { return Error(Errc::invalid_argument, fmt::format("bad number '{}'", text)); };
    auto parse_int = [&](std::string_view s) {
        if (s.empty())
            throw bad();
        std::size_t start = (s[0] == '-') ? 1 : 0;
        if (start == s.size())
            throw bad();
        for (std::size_t i = start; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                throw bad();
        return Integer(std::string(s));
    };
    auto slash = text.find('/');
    Scalar v;
    if (slash == std::string_view::npos) {
        v = Scalar(parse_int(text));
    } else {
        Integer num = parse_int(text.substr(0, slash));
        Integer den = parse_int(text.substr(slash + 1));
        if (den <= 0)
            throw bad();
        v = Scalar(num, den);
        v.canonicalize();
        if (kind_ == RingKind::rationals && (v.get_num() != num || v.get_den() != den))
            throw Error(Errc::invalid_argument, fmt::format("rational '{}' not in lowest terms", text));
    }
    if (kind_ == RingKind::prime_field) {
        if (slash != std::string_view::npos || v < 0 || v >= Scalar(modulus_))
            throw Error(Errc::invalid_argument, fmt::format("'{}' is not a canonical element of {}", text, name()));
    }
    return reduce(v);
}

} // namespace opseq
