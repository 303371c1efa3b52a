#include "ecstore/errors.hpp"

namespace ecstore {

std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::config: return "config";
        case Errc::invalid_params: return "invalid_params";
        case Errc::format: return "format";
        case Errc::insufficient_shares: return "insufficient_shares";
        case Errc::not_found: return "not_found";
        case Errc::already_exists: return "already_exists";
        case Errc::transfer_failed: return "transfer_failed";
        case Errc::upload_failed: return "upload_failed";
        case Errc::download_failed: return "download_failed";
        case Errc::corruption: return "corruption";
        case Errc::no_alternative: return "no_alternative";
        case Errc::io: return "io";
    }
    return "unknown";
}

} // namespace ecstore
