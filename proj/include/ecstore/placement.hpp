#pragma once

#include <string>
#include <vector>

namespace ecstore {

/// Ordered storage endpoint ids, as configuration returned them. Order is
/// significant: chunk n goes to position n mod size().
class EndpointVector {
public:
    EndpointVector() = default;
    explicit EndpointVector(std::vector<std::string> ids); // throws on duplicates

    const std::vector<std::string>& ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    const std::string& at(std::size_t position) const { return ids_.at(position); }

    /// Position of an id; throws Errc::config when absent.
    std::size_t position_of(const std::string& endpoint_id) const;

private:
    std::vector<std::string> ids_;
};

struct PlacementPlan {
    struct Assignment {
        unsigned chunk_index = 0;
        std::string endpoint_id;

        bool operator==(const Assignment&) const = default;
    };

    std::vector<Assignment> assignments; // length m, ordered by chunk index

    bool operator==(const PlacementPlan&) const = default;
};

/// Round-robin: chunk n -> endpoint at position n mod s. Earlier endpoints
/// carry the surplus when s does not divide m. Pure and deterministic.
PlacementPlan round_robin(unsigned chunk_count, const EndpointVector& endpoints);

/// Retry rotation: the attempt'th retry of a chunk targets vector position
/// (original position + attempt) mod s, so the original endpoint recurs only
/// after every alternative has been tried. Throws Errc::no_alternative when
/// the vector has a single entry.
std::string retry_target(unsigned chunk_index, const std::string& failed_endpoint_id,
                         const EndpointVector& endpoints, unsigned attempt);

} // namespace ecstore
