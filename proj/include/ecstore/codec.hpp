#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecstore {

inline constexpr std::uint8_t kChunkFormatVersion = 1;

/// On-disk chunk header is 8 bytes:
/// version:u8, k:u8, m:u8, index:u8, pad_length:u32 big-endian.
inline constexpr std::size_t kChunkHeaderSize = 8;

/// k data chunks, m total chunks (m - k of them coding). 1 <= k <= m <= 255;
/// m == k is plain splitting with zero resilience.
struct CodingParams {
    unsigned k = 1;
    unsigned m = 1;

    void validate() const; // throws Errc::invalid_params
    unsigned coding_chunks() const { return m - k; }
    bool operator==(const CodingParams&) const = default;
};

struct ChunkHeader {
    std::uint8_t format_version = kChunkFormatVersion;
    std::uint8_t k = 1;
    std::uint8_t m = 1;
    std::uint8_t chunk_index = 0;
    std::uint32_t pad_length = 0;

    bool operator==(const ChunkHeader&) const = default;
};

/// One share of an encoded file. Chunks with index < k carry verbatim slices
/// of the padded input; higher indices carry coding payloads. All m chunks
/// from one encode have identical payload length ceil(size / k).
struct Chunk {
    ChunkHeader header;
    std::vector<std::byte> payload;
};

/// m x k generator matrix over GF(256), row-major. Rows < k form the
/// identity; any k distinct rows are invertible.
struct CodingMatrix {
    unsigned rows = 0;
    unsigned cols = 0;
    std::vector<std::uint8_t> cells;

    std::uint8_t at(unsigned r, unsigned c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
    std::span<const std::uint8_t> row(unsigned r) const {
        return {cells.data() + static_cast<std::size_t>(r) * cols, cols};
    }
};

/// Systematic generator: a Vandermonde matrix on distinct points alpha^i,
/// column-reduced so the top k x k block is the identity.
CodingMatrix build_coding_matrix(CodingParams params);

std::vector<Chunk> encode(std::span<const std::byte> data, CodingParams params);

struct DecodeResult {
    std::vector<std::byte> data;
    /// True when all of chunks 0..k-1 were available and reconstruction was
    /// pure concatenation, with no matrix inversion.
    bool fast_path = false;
    /// Number of data chunks rebuilt from coding chunks (0 on the fast path).
    unsigned reconstructed_chunks = 0;
};

/// Reconstructs the original bytes from any >= k chunks with distinct
/// indices and consistent headers. Throws Errc::insufficient_shares below k
/// and Errc::format on header disagreement.
DecodeResult decode(std::span<const Chunk* const> chunks);
DecodeResult decode(std::span<const Chunk> chunks);

std::array<std::byte, kChunkHeaderSize> serialize_header(const ChunkHeader& header);
ChunkHeader parse_header(std::span<const std::byte> bytes); // throws Errc::format

/// Header followed by raw payload; documented bit-exactly in docs/FORMATS.md.
std::vector<std::byte> serialize_chunk(const Chunk& chunk);
Chunk parse_chunk(std::span<const std::byte> bytes);

/// zfec-style share name: `<base>.<index>_<m>.fec`. base must be non-empty
/// and free of path separators.
std::string chunk_filename(std::string_view base, const ChunkHeader& header);

struct ParsedChunkName {
    std::string base;
    unsigned chunk_index = 0;
    unsigned total = 0; // m

    bool operator==(const ParsedChunkName&) const = default;
};

/// Inverse of chunk_filename. Accepts zero-padded digit runs in the share
/// suffix (the reference zfec tool pads the index). Throws Errc::format.
ParsedChunkName parse_chunk_filename(std::string_view name);

/// Payload length for a given input size: ceil(size / k); 0 when empty.
std::size_t chunk_payload_length(std::size_t data_size, CodingParams params);

} // namespace ecstore
