#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecstore {

enum class BackendKind { local_dir, simulated };

enum class OpKind { store, fetch };

struct SimParams {
    double setup_latency_s = 0.0;
    /// Bytes per second; infinity means the transfer term is free.
    double bandwidth_bps = std::numeric_limits<double>::infinity();
    double failure_probability = 0.0;
    std::uint64_t rng_seed = 0;
};

struct EndpointDescriptor {
    std::string endpoint_id;
    BackendKind backend = BackendKind::simulated;
    std::filesystem::path root; // local_dir only
    SimParams sim;              // simulated only

    void validate() const; // throws Errc::config
};

/// Virtual time shared by every simulated endpoint in one run. Monotone
/// non-decreasing; all updates are serialized through one internal lock.
class SimClock {
public:
    double now() const;
    /// Serial accounting: now += seconds. Returns the new time.
    double advance(double seconds);
    /// Overlap accounting for parallel schedules: now = max(now, t).
    void advance_to(double t);

private:
    mutable std::mutex mutex_;
    double now_s_ = 0.0;
};

/// Whole-object archive endpoint: store/fetch/delete/exists, no partial IO.
class StorageEndpoint {
public:
    virtual ~StorageEndpoint() = default;

    const std::string& id() const { return id_; }
    virtual BackendKind backend() const = 0;

    /// Stores a whole object atomically; a failed store leaves no object.
    /// `attempt` is the retry ordinal (0 for the first try).
    virtual std::size_t store(std::string_view object, std::span<const std::byte> data,
                              unsigned attempt = 0) = 0;
    virtual std::vector<std::byte> fetch(std::string_view object, unsigned attempt = 0) = 0;
    virtual void remove(std::string_view object) = 0;
    virtual bool exists(std::string_view object) const = 0;
    virtual std::vector<std::string> list_objects() const = 0;

protected:
    explicit StorageEndpoint(std::string id) : id_(std::move(id)) {}

    std::string id_;
};

/// Flat directory of objects, one file per object name.
class LocalDirEndpoint final : public StorageEndpoint {
public:
    LocalDirEndpoint(std::string id, std::filesystem::path root);

    BackendKind backend() const override { return BackendKind::local_dir; }
    std::size_t store(std::string_view object, std::span<const std::byte> data,
                      unsigned attempt = 0) override;
    std::vector<std::byte> fetch(std::string_view object, unsigned attempt = 0) override;
    void remove(std::string_view object) override;
    bool exists(std::string_view object) const override;
    std::vector<std::string> list_objects() const override;

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path object_path(std::string_view object) const;

    std::filesystem::path root_;
};

/// Deterministic in-memory endpoint with an affine cost model and hash-drawn
/// failures. store/fetch advance the shared SimClock by exactly
/// setup_latency + size/bandwidth, on failure as well as success; exists,
/// remove and the *_raw accessors are free of clock and failure effects.
class SimulatedEndpoint final : public StorageEndpoint {
public:
    SimulatedEndpoint(std::string id, SimParams params, std::shared_ptr<SimClock> clock);

    BackendKind backend() const override { return BackendKind::simulated; }
    std::size_t store(std::string_view object, std::span<const std::byte> data,
                      unsigned attempt = 0) override;
    std::vector<std::byte> fetch(std::string_view object, unsigned attempt = 0) override;
    void remove(std::string_view object) override;
    bool exists(std::string_view object) const override;
    std::vector<std::string> list_objects() const override;

    const SimParams& params() const { return params_; }
    std::shared_ptr<SimClock> clock() const { return clock_; }

    /// setup_latency + size / bandwidth, in virtual seconds.
    double cost_for(std::size_t size_bytes) const;

    /// Deterministic failure draw for one (operation, object, attempt)
    /// triple; independent of call order, so parallel schedules reproduce.
    bool draw_failure(OpKind op, std::string_view object, unsigned attempt) const;

    /// Raw object access used by the virtual-time scheduler, which accounts
    /// for cost and failures itself.
    std::size_t store_raw(std::string_view object, std::span<const std::byte> data);
    std::size_t store_raw(std::string_view object, std::vector<std::byte>&& data);
    std::vector<std::byte> fetch_raw(std::string_view object) const;
    std::size_t object_size(std::string_view object) const; // throws not_found

private:
    SimParams params_;
    std::shared_ptr<SimClock> clock_;
    mutable std::mutex mutex_;
    std::map<std::string, std::vector<std::byte>, std::less<>> objects_;
};

/// Rejects names that would escape a flat namespace. Throws Errc::config.
void validate_object_name(std::string_view object);

std::shared_ptr<StorageEndpoint> make_endpoint(const EndpointDescriptor& descriptor,
                                               std::shared_ptr<SimClock> clock);

/// JSON endpoint configuration file: an array of descriptors. Schema in
/// docs/FORMATS.md.
std::vector<EndpointDescriptor> load_endpoint_config(const std::filesystem::path& path);

} // namespace ecstore
