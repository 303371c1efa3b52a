#include "ecstore/codec.hpp"

#include "ecstore/errors.hpp"
#include "ecstore/gf256.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <optional>

namespace ecstore {

namespace {

// Gauss-Jordan inversion of a k x k matrix over GF(256) via an augmented
// identity; replaces `a` with its inverse.
void invert_matrix(std::vector<std::uint8_t>& a, unsigned k) {
    std::vector<std::uint8_t> inv(static_cast<std::size_t>(k) * k, 0);
    for (unsigned i = 0; i < k; ++i) inv[static_cast<std::size_t>(i) * k + i] = 1;

    auto row_of = [k](std::vector<std::uint8_t>& mat, unsigned r) {
        return mat.data() + static_cast<std::size_t>(r) * k;
    };

    for (unsigned col = 0; col < k; ++col) {
        // Any non-zero entry works as a pivot in a field.
        unsigned pivot = col;
        while (pivot < k && row_of(a, pivot)[col] == 0) ++pivot;
        if (pivot == k) throw Error(Errc::format, "codec: singular matrix");
        if (pivot != col) {
            std::swap_ranges(row_of(a, pivot), row_of(a, pivot) + k, row_of(a, col));
            std::swap_ranges(row_of(inv, pivot), row_of(inv, pivot) + k, row_of(inv, col));
        }

        const std::uint8_t* scale = gf::mul_row(gf::inv(row_of(a, col)[col]));
        for (unsigned j = 0; j < k; ++j) {
            row_of(a, col)[j] = scale[row_of(a, col)[j]];
            row_of(inv, col)[j] = scale[row_of(inv, col)[j]];
        }

        for (unsigned r = 0; r < k; ++r) {
            if (r == col) continue;
            const std::uint8_t factor = row_of(a, r)[col];
            if (factor == 0) continue;
            const std::uint8_t* mul_f = gf::mul_row(factor);
            for (unsigned j = 0; j < k; ++j) {
                row_of(a, r)[j] ^= mul_f[row_of(a, col)[j]];
                row_of(inv, r)[j] ^= mul_f[row_of(inv, col)[j]];
            }
        }
    }
    a = std::move(inv);
}

void store_u32_be(std::byte* out, std::uint32_t v) {
    out[0] = static_cast<std::byte>((v >> 24) & 0xFF);
    out[1] = static_cast<std::byte>((v >> 16) & 0xFF);
    out[2] = static_cast<std::byte>((v >> 8) & 0xFF);
    out[3] = static_cast<std::byte>(v & 0xFF);
}

std::uint32_t load_u32_be(const std::byte* in) {
    return (static_cast<std::uint32_t>(in[0]) << 24) | (static_cast<std::uint32_t>(in[1]) << 16) |
           (static_cast<std::uint32_t>(in[2]) << 8) | static_cast<std::uint32_t>(in[3]);
}

std::optional<unsigned> parse_digits(std::string_view s) {
    if (s.empty()) return std::nullopt;
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

} // namespace

void CodingParams::validate() const {
    if (k < 1 || m < k || m > 255)
        throw Error(Errc::invalid_params,
                    "coding params: need 1 <= k <= m <= 255, got k=" + std::to_string(k) +
                        " m=" + std::to_string(m));
}

CodingMatrix build_coding_matrix(CodingParams params) {
    params.validate();
    const unsigned k = params.k;
    const unsigned m = params.m;

    CodingMatrix out;
    out.rows = m;
    out.cols = k;
    out.cells.assign(static_cast<std::size_t>(m) * k, 0);

    // Vandermonde rows on distinct points x_i = alpha^i (i < m <= 255 keeps
    // them distinct): V[i][j] = x_i^j.
    std::vector<std::uint8_t> vdm(static_cast<std::size_t>(m) * k);
    for (unsigned i = 0; i < m; ++i) {
        const std::uint8_t x = gf::tables().exp[i];
        std::uint8_t acc = 1;
        for (unsigned j = 0; j < k; ++j) {
            vdm[static_cast<std::size_t>(i) * k + j] = acc;
            acc = gf::mul(acc, x);
        }
    }

    // Right-multiply by the inverse of the top k x k block; any k-row
    // submatrix stays invertible and the top block becomes the identity.
    std::vector<std::uint8_t> top(vdm.begin(), vdm.begin() + static_cast<std::size_t>(k) * k);
    invert_matrix(top, k);

    for (unsigned i = 0; i < k; ++i) out.cells[static_cast<std::size_t>(i) * k + i] = 1;
    for (unsigned r = k; r < m; ++r) {
        for (unsigned c = 0; c < k; ++c) {
            std::uint8_t acc = 0;
            for (unsigned i = 0; i < k; ++i)
                acc ^= gf::mul(vdm[static_cast<std::size_t>(r) * k + i], top[static_cast<std::size_t>(i) * k + c]);
            out.cells[static_cast<std::size_t>(r) * k + c] = acc;
        }
    }
    return out;
}

std::size_t chunk_payload_length(std::size_t data_size, CodingParams params) {
    params.validate();
    return (data_size + params.k - 1) / params.k;
}

std::vector<Chunk> encode(std::span<const std::byte> data, CodingParams params) {
    params.validate();
    const unsigned k = params.k;
    const unsigned m = params.m;
    const std::size_t share_len = chunk_payload_length(data.size(), params);
    const std::uint32_t pad = static_cast<std::uint32_t>(share_len * k - data.size());

    std::vector<Chunk> chunks(m);
    for (unsigned i = 0; i < m; ++i) {
        chunks[i].header = ChunkHeader{kChunkFormatVersion, static_cast<std::uint8_t>(k),
                                       static_cast<std::uint8_t>(m), static_cast<std::uint8_t>(i), pad};
    }

    // Data chunks: contiguous byte slices of the input, last one zero-padded.
    for (unsigned i = 0; i < k; ++i) {
        auto& payload = chunks[i].payload;
        payload.assign(share_len, std::byte{0});
        const std::size_t begin = static_cast<std::size_t>(i) * share_len;
        if (begin < data.size()) {
            const std::size_t n = std::min(share_len, data.size() - begin);
            std::memcpy(payload.data(), data.data() + begin, n);
        }
    }

    if (m > k && share_len > 0) {
        const CodingMatrix matrix = build_coding_matrix(params);
        for (unsigned r = k; r < m; ++r) {
            auto& payload = chunks[r].payload;
            payload.assign(share_len, std::byte{0});
            for (unsigned j = 0; j < k; ++j)
                gf::mul_add(payload, chunks[j].payload, matrix.at(r, j));
        }
    } else {
        for (unsigned r = k; r < m; ++r) chunks[r].payload.assign(share_len, std::byte{0});
    }
    return chunks;
}

DecodeResult decode(std::span<const Chunk* const> chunks) {
    if (chunks.empty()) throw Error(Errc::insufficient_shares, "decode: no chunks supplied");

    const ChunkHeader& first = chunks[0]->header;
    if (first.format_version != kChunkFormatVersion)
        throw Error(Errc::format, "decode: unsupported chunk format version " +
                                      std::to_string(first.format_version));
    const unsigned k = first.k;
    const unsigned m = first.m;
    CodingParams params{k, m};
    params.validate();
    const std::size_t share_len = chunks[0]->payload.size();

    std::vector<const Chunk*> by_index(m, nullptr);
    for (const Chunk* c : chunks) {
        const ChunkHeader& h = c->header;
        if (h.format_version != first.format_version || h.k != first.k || h.m != first.m ||
            h.pad_length != first.pad_length)
            throw Error(Errc::format, "decode: inconsistent chunk headers");
        if (c->payload.size() != share_len)
            throw Error(Errc::format, "decode: chunk payload lengths differ");
        if (h.chunk_index >= m) throw Error(Errc::format, "decode: chunk index out of range");
        if (by_index[h.chunk_index] != nullptr)
            throw Error(Errc::format, "decode: duplicate chunk index " + std::to_string(h.chunk_index));
        by_index[h.chunk_index] = c;
    }
    if (share_len == 0 && first.pad_length != 0)
        throw Error(Errc::format, "decode: pad length inconsistent with empty payloads");
    if (share_len > 0 && first.pad_length >= k)
        throw Error(Errc::format, "decode: pad length must be below k");

    unsigned available = 0;
    for (const Chunk* c : by_index)
        if (c) ++available;
    if (available < k)
        throw Error(Errc::insufficient_shares, "decode: have " + std::to_string(available) +
                                                   " distinct chunks, need " + std::to_string(k));

    const std::size_t original_size = static_cast<std::size_t>(share_len) * k - first.pad_length;

    DecodeResult result;
    result.data.resize(original_size);

    // Slot i prefers data chunk i; missing data slots borrow coding chunks.
    std::vector<const Chunk*> slot(k, nullptr);
    std::vector<unsigned> slot_index(k, 0);
    bool missing_data = false;
    unsigned next_coding = k;
    for (unsigned i = 0; i < k; ++i) {
        if (by_index[i]) {
            slot[i] = by_index[i];
            slot_index[i] = i;
            continue;
        }
        missing_data = true;
        while (next_coding < m && by_index[next_coding] == nullptr) ++next_coding;
        slot[i] = by_index[next_coding];
        slot_index[i] = next_coding;
        ++next_coding;
    }

    auto emit = [&](unsigned data_index, std::span<const std::byte> payload) {
        const std::size_t begin = static_cast<std::size_t>(data_index) * share_len;
        if (begin >= original_size) return;
        const std::size_t n = std::min(share_len, original_size - begin);
        std::memcpy(result.data.data() + begin, payload.data(), n);
    };

    if (!missing_data) {
        for (unsigned i = 0; i < k; ++i) emit(i, slot[i]->payload);
        result.fast_path = true;
        return result;
    }

    // Invert the k x k generator submatrix for the chunks we actually hold,
    // then rebuild only the missing data rows.
    const CodingMatrix matrix = build_coding_matrix(params);
    std::vector<std::uint8_t> sub(static_cast<std::size_t>(k) * k, 0);
    for (unsigned i = 0; i < k; ++i) {
        const auto row = matrix.row(slot_index[i]);
        std::copy(row.begin(), row.end(), sub.begin() + static_cast<std::size_t>(i) * k);
    }
    invert_matrix(sub, k);

    std::vector<std::byte> rebuilt(share_len);
    for (unsigned i = 0; i < k; ++i) {
        if (slot_index[i] == i) {
            emit(i, slot[i]->payload);
            continue;
        }
        std::fill(rebuilt.begin(), rebuilt.end(), std::byte{0});
        for (unsigned j = 0; j < k; ++j)
            gf::mul_add(rebuilt, slot[j]->payload, sub[static_cast<std::size_t>(i) * k + j]);
        emit(i, rebuilt);
        ++result.reconstructed_chunks;
    }
    return result;
}

DecodeResult decode(std::span<const Chunk> chunks) {
    std::vector<const Chunk*> ptrs;
    ptrs.reserve(chunks.size());
    for (const Chunk& c : chunks) ptrs.push_back(&c);
    return decode(std::span<const Chunk* const>(ptrs));
}

std::array<std::byte, kChunkHeaderSize> serialize_header(const ChunkHeader& header) {
    std::array<std::byte, kChunkHeaderSize> out{};
    out[0] = static_cast<std::byte>(header.format_version);
    out[1] = static_cast<std::byte>(header.k);
    out[2] = static_cast<std::byte>(header.m);
    out[3] = static_cast<std::byte>(header.chunk_index);
    store_u32_be(out.data() + 4, header.pad_length);
    return out;
}

ChunkHeader parse_header(std::span<const std::byte> bytes) {
    if (bytes.size() < kChunkHeaderSize)
        throw Error(Errc::format, "chunk header: need " + std::to_string(kChunkHeaderSize) +
                                      " bytes, got " + std::to_string(bytes.size()));
    ChunkHeader h;
    h.format_version = static_cast<std::uint8_t>(bytes[0]);
    h.k = static_cast<std::uint8_t>(bytes[1]);
    h.m = static_cast<std::uint8_t>(bytes[2]);
    h.chunk_index = static_cast<std::uint8_t>(bytes[3]);
    h.pad_length = load_u32_be(bytes.data() + 4);
    if (h.format_version != kChunkFormatVersion)
        throw Error(Errc::format, "chunk header: unsupported format version " +
                                      std::to_string(h.format_version));
    if (h.k < 1 || h.m < h.k) throw Error(Errc::format, "chunk header: invalid coding params");
    if (h.chunk_index >= h.m) throw Error(Errc::format, "chunk header: index out of range");
    return h;
}

std::vector<std::byte> serialize_chunk(const Chunk& chunk) {
    const auto head = serialize_header(chunk.header);
    std::vector<std::byte> out;
    out.reserve(head.size() + chunk.payload.size());
    out.insert(out.end(), head.begin(), head.end());
    out.insert(out.end(), chunk.payload.begin(), chunk.payload.end());
    return out;
}

Chunk parse_chunk(std::span<const std::byte> bytes) {
    Chunk c;
    c.header = parse_header(bytes);
    c.payload.assign(bytes.begin() + kChunkHeaderSize, bytes.end());
    return c;
}

std::string chunk_filename(std::string_view base, const ChunkHeader& header) {
    if (base.empty()) throw Error(Errc::invalid_params, "chunk_filename: empty base name");
    if (base.find('/') != std::string_view::npos || base.find('\\') != std::string_view::npos)
        throw Error(Errc::invalid_params, "chunk_filename: base must not contain path separators");
    std::string out(base);
    out += '.';
    out += std::to_string(header.chunk_index);
    out += '_';
    out += std::to_string(header.m);
    out += ".fec";
    return out;
}

ParsedChunkName parse_chunk_filename(std::string_view name) {
    constexpr std::string_view suffix = ".fec";
    if (name.size() <= suffix.size() || !name.ends_with(suffix))
        throw Error(Errc::format, "chunk name: missing .fec suffix in '" + std::string(name) + "'");
    const std::string_view stem = name.substr(0, name.size() - suffix.size());

    const std::size_t dot = stem.rfind('.');
    if (dot == std::string_view::npos || dot == 0)
        throw Error(Errc::format, "chunk name: no share suffix in '" + std::string(name) + "'");
    const std::string_view share = stem.substr(dot + 1);

    const std::size_t underscore = share.find('_');
    if (underscore == std::string_view::npos)
        throw Error(Errc::format, "chunk name: malformed share suffix in '" + std::string(name) + "'");

    const auto index = parse_digits(share.substr(0, underscore));
    const auto total = parse_digits(share.substr(underscore + 1));
    if (!index || !total || *total < 1 || *total > 255 || *index >= *total)
        throw Error(Errc::format, "chunk name: malformed share suffix in '" + std::string(name) + "'");

    return ParsedChunkName{std::string(stem.substr(0, dot)), *index, *total};
}

} // namespace ecstore
