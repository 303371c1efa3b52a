#include "ecstore/gf256.hpp"

#include "ecstore/errors.hpp"

#include <vector>

namespace ecstore::gf {

namespace {

Tables build_tables() {
    Tables t;
    t.log[0] = 0xFF; // sentinel, log(0) is undefined
    std::uint16_t x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[i] = static_cast<std::uint8_t>(x);
        t.log[t.exp[i]] = static_cast<std::uint8_t>(i);
        x <<= 1;
        if (x & 0x100) x ^= kReducingPoly;
    }
    for (int i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
    return t;
}

// Full 256x256 product table; row c holds c*x for all x.
const std::uint8_t* full_mul_table() {
    static const std::vector<std::uint8_t> table = [] {
        std::vector<std::uint8_t> m(256 * 256, 0);
        for (unsigned a = 1; a < 256; ++a)
            for (unsigned b = 1; b < 256; ++b)
                m[a * 256 + b] = mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
        return m;
    }();
    return table.data();
}

} // namespace

const Tables& tables() {
    static const Tables t = build_tables();
    return t;
}

std::uint8_t inv(std::uint8_t a) {
    if (a == 0) throw Error(Errc::invalid_params, "gf256: inverse of zero");
    const Tables& t = tables();
    return t.exp[(255 - t.log[a]) % 255];
}

std::uint8_t div(std::uint8_t a, std::uint8_t b) {
    if (b == 0) throw Error(Errc::invalid_params, "gf256: division by zero");
    if (a == 0) return 0;
    const Tables& t = tables();
    return t.exp[(255 + t.log[a] - t.log[b]) % 255];
}

std::uint8_t pow(std::uint8_t base, unsigned exponent) {
    if (exponent == 0) return 1;
    if (base == 0) return 0;
    // base^e = alpha^(log(base) * e); the multiplicative group has order 255.
    const Tables& t = tables();
    return t.exp[(static_cast<std::size_t>(t.log[base]) * exponent) % 255];
}

const std::uint8_t* mul_row(std::uint8_t c) {
    return full_mul_table() + static_cast<std::size_t>(c) * 256;
}

void mul_add(std::span<std::byte> out, std::span<const std::byte> in, std::uint8_t c) {
    const std::size_t n = out.size() < in.size() ? out.size() : in.size();
    if (c == 0 || n == 0) return;
    const std::uint8_t* row = mul_row(c);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        out[i + 0] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i + 0])]);
        out[i + 1] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i + 1])]);
        out[i + 2] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i + 2])]);
        out[i + 3] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i + 3])]);
        out[i + 4] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i + 4])]);
        out[i + 5] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i + 5])]);
        out[i + 6] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i + 6])]);
        out[i + 7] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i + 7])]);
    }
    for (; i < n; ++i)
        out[i] ^= static_cast<std::byte>(row[static_cast<std::uint8_t>(in[i])]);
}

} // namespace ecstore::gf
