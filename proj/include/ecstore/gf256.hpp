#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace ecstore::gf {

// GF(2^8) with reducing polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D),
// generator alpha = 2. Same field as common FEC codecs, including zfec.
inline constexpr std::uint16_t kReducingPoly = 0x11D;

// exp[i] = alpha^i, duplicated over [255, 510) so mul can skip the mod 255.
// log[0] holds a sentinel and must never be read.
struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<std::uint8_t, 256> log{};
};

// Built once at first use, immutable afterwards; safe for concurrent readers.
const Tables& tables();

inline std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const Tables& t = tables();
    return t.exp[static_cast<unsigned>(t.log[a]) + t.log[b]];
}

// Multiplicative inverse; rejects 0.
std::uint8_t inv(std::uint8_t a);

// a / b; rejects b == 0.
std::uint8_t div(std::uint8_t a, std::uint8_t b);

std::uint8_t pow(std::uint8_t base, unsigned exponent);

// 256-entry row r with r[x] == c * x. Backed by one shared 64 KiB table.
const std::uint8_t* mul_row(std::uint8_t c);

// out[i] ^= c * in[i] for the common length of the two spans.
void mul_add(std::span<std::byte> out, std::span<const std::byte> in, std::uint8_t c);

} // namespace ecstore::gf
