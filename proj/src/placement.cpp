#include "ecstore/placement.hpp"

#include "ecstore/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace ecstore {

EndpointVector::EndpointVector(std::vector<std::string> ids) : ids_(std::move(ids)) {
    std::unordered_set<std::string> seen;
    for (const auto& id : ids_) {
        if (id.empty()) throw Error(Errc::config, "endpoint vector: empty endpoint id");
        if (!seen.insert(id).second)
            throw Error(Errc::config, "endpoint vector: duplicate endpoint id '" + id + "'");
    }
}

std::size_t EndpointVector::position_of(const std::string& endpoint_id) const {
    const auto it = std::find(ids_.begin(), ids_.end(), endpoint_id);
    if (it == ids_.end())
        throw Error(Errc::config, "endpoint vector: unknown endpoint id '" + endpoint_id + "'");
    return static_cast<std::size_t>(it - ids_.begin());
}

PlacementPlan round_robin(unsigned chunk_count, const EndpointVector& endpoints) {
    if (endpoints.empty()) throw Error(Errc::config, "placement: endpoint vector is empty");
    if (chunk_count < 1) throw Error(Errc::config, "placement: chunk count must be positive");

    PlacementPlan plan;
    plan.assignments.reserve(chunk_count);
    const std::size_t s = endpoints.size();
    for (unsigned n = 0; n < chunk_count; ++n)
        plan.assignments.push_back({n, endpoints.at(n % s)});
    return plan;
}

std::string retry_target(unsigned chunk_index, const std::string& failed_endpoint_id,
                         const EndpointVector& endpoints, unsigned attempt) {
    if (endpoints.empty()) throw Error(Errc::config, "placement: endpoint vector is empty");
    if (attempt < 1) throw Error(Errc::config, "placement: retry attempt must be >= 1");
    endpoints.position_of(failed_endpoint_id); // validate the failed id exists
    const std::size_t s = endpoints.size();
    if (s == 1)
        throw Error(Errc::no_alternative,
                    "placement: no alternative endpoint for chunk " + std::to_string(chunk_index));
    return endpoints.at((chunk_index % s + attempt) % s);
}

} // namespace ecstore
