#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecstore {

/// Failure categories surfaced by the library. The CLI maps each to a
/// distinct exit code (see docs/FORMATS.md).
enum class Errc {
    config,
    invalid_params,
    format,
    insufficient_shares,
    not_found,
    already_exists,
    transfer_failed,
    upload_failed,
    download_failed,
    corruption,
    no_alternative,
    io,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

} // namespace ecstore
