#include "ecstore/endpoint.hpp"

#include "ecstore/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ecstore {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace

void EndpointDescriptor::validate() const {
    if (endpoint_id.empty()) throw Error(Errc::config, "endpoint: missing id");
    if (backend == BackendKind::local_dir) {
        if (root.empty())
            throw Error(Errc::config, "endpoint '" + endpoint_id + "': local backend needs a root path");
        return;
    }
    if (sim.setup_latency_s < 0)
        throw Error(Errc::config, "endpoint '" + endpoint_id + "': setup latency must be >= 0");
    if (!(sim.bandwidth_bps > 0))
        throw Error(Errc::config, "endpoint '" + endpoint_id + "': bandwidth must be positive");
    if (sim.failure_probability < 0 || sim.failure_probability > 1)
        throw Error(Errc::config, "endpoint '" + endpoint_id + "': failure probability must be in [0, 1]");
}

double SimClock::now() const {
    std::lock_guard lock(mutex_);
    return now_s_;
}

double SimClock::advance(double seconds) {
    if (seconds < 0) throw Error(Errc::config, "sim clock: cannot advance by a negative interval");
    std::lock_guard lock(mutex_);
    now_s_ += seconds;
    return now_s_;
}

void SimClock::advance_to(double t) {
    std::lock_guard lock(mutex_);
    if (t > now_s_) now_s_ = t;
}

void validate_object_name(std::string_view object) {
    if (object.empty()) throw Error(Errc::config, "object name must not be empty");
    if (object == "." || object == "..")
        throw Error(Errc::config, "object name must not be a dot path");
    if (object.find('/') != std::string_view::npos || object.find('\\') != std::string_view::npos)
        throw Error(Errc::config, "object name must not contain path separators: '" +
                                      std::string(object) + "'");
}

LocalDirEndpoint::LocalDirEndpoint(std::string id, std::filesystem::path root)
    : StorageEndpoint(std::move(id)), root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec)
        throw Error(Errc::io, "endpoint '" + id_ + "': cannot create root '" + root_.string() +
                                  "': " + ec.message());
}

std::filesystem::path LocalDirEndpoint::object_path(std::string_view object) const {
    validate_object_name(object);
    return root_ / std::filesystem::path(std::string(object));
}

std::size_t LocalDirEndpoint::store(std::string_view object, std::span<const std::byte> data,
                                    unsigned) {
    const std::filesystem::path target = object_path(object);
    const std::filesystem::path tmp = target.string() + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.is_open())
            throw Error(Errc::io, "endpoint '" + id_ + "': cannot open '" + tmp.string() + "'");
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        if (!out.good()) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error(Errc::io, "endpoint '" + id_ + "': short write for object '" +
                                      std::string(object) + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(Errc::io, "endpoint '" + id_ + "': commit failed for object '" +
                                  std::string(object) + "': " + ec.message());
    }
    return data.size();
}

std::vector<std::byte> LocalDirEndpoint::fetch(std::string_view object, unsigned) {
    const std::filesystem::path source = object_path(object);
    std::ifstream in(source, std::ios::binary | std::ios::ate);
    if (!in.is_open())
        throw Error(Errc::not_found,
                    "endpoint '" + id_ + "': no object '" + std::string(object) + "'");
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<std::byte> data(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(data.data()), size);
    if (!in.good() && size != 0)
        throw Error(Errc::io, "endpoint '" + id_ + "': read failed for object '" +
                                  std::string(object) + "'");
    return data;
}

void LocalDirEndpoint::remove(std::string_view object) {
    const std::filesystem::path target = object_path(object);
    std::error_code ec;
    if (!std::filesystem::remove(target, ec) || ec)
        throw Error(Errc::not_found,
                    "endpoint '" + id_ + "': no object '" + std::string(object) + "'");
}

bool LocalDirEndpoint::exists(std::string_view object) const {
    return std::filesystem::is_regular_file(object_path(object));
}

std::vector<std::string> LocalDirEndpoint::list_objects() const {
    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(root_))
        if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

SimulatedEndpoint::SimulatedEndpoint(std::string id, SimParams params, std::shared_ptr<SimClock> clock)
    : StorageEndpoint(std::move(id)), params_(params), clock_(std::move(clock)) {
    if (!clock_) throw Error(Errc::config, "endpoint '" + id_ + "': simulated backend needs a clock");
}

double SimulatedEndpoint::cost_for(std::size_t size_bytes) const {
    if (std::isinf(params_.bandwidth_bps)) return params_.setup_latency_s;
    return params_.setup_latency_s + static_cast<double>(size_bytes) / params_.bandwidth_bps;
}

bool SimulatedEndpoint::draw_failure(OpKind op, std::string_view object, unsigned attempt) const {
    if (params_.failure_probability <= 0) return false;
    std::uint64_t h = splitmix64(params_.rng_seed ^ fnv1a(object));
    h = splitmix64(h ^ (op == OpKind::store ? 0x53ULL : 0x46ULL));
    h = splitmix64(h ^ attempt);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53; // uniform in [0, 1)
    return u < params_.failure_probability;
}

std::size_t SimulatedEndpoint::store(std::string_view object, std::span<const std::byte> data,
                                     unsigned attempt) {
    validate_object_name(object);
    const bool fail = draw_failure(OpKind::store, object, attempt);
    clock_->advance(cost_for(data.size()));
    if (fail)
        throw Error(Errc::transfer_failed, "endpoint '" + id_ + "': simulated store failure for '" +
                                               std::string(object) + "'");
    return store_raw(object, data);
}

std::vector<std::byte> SimulatedEndpoint::fetch(std::string_view object, unsigned attempt) {
    validate_object_name(object);
    std::size_t size = 0;
    {
        std::lock_guard lock(mutex_);
        const auto it = objects_.find(object);
        if (it == objects_.end()) {
            // Channel setup is still paid before the absence is discovered.
            clock_->advance(cost_for(0));
            throw Error(Errc::not_found,
                        "endpoint '" + id_ + "': no object '" + std::string(object) + "'");
        }
        size = it->second.size();
    }
    const bool fail = draw_failure(OpKind::fetch, object, attempt);
    clock_->advance(cost_for(size));
    if (fail)
        throw Error(Errc::transfer_failed, "endpoint '" + id_ + "': simulated fetch failure for '" +
                                               std::string(object) + "'");
    return fetch_raw(object);
}

void SimulatedEndpoint::remove(std::string_view object) {
    std::lock_guard lock(mutex_);
    const auto it = objects_.find(object);
    if (it == objects_.end())
        throw Error(Errc::not_found,
                    "endpoint '" + id_ + "': no object '" + std::string(object) + "'");
    objects_.erase(it);
}

bool SimulatedEndpoint::exists(std::string_view object) const {
    std::lock_guard lock(mutex_);
    return objects_.count(std::string(object)) > 0;
}

std::vector<std::string> SimulatedEndpoint::list_objects() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> names;
    names.reserve(objects_.size());
    for (const auto& [name, data] : objects_) names.push_back(name);
    return names;
}

std::size_t SimulatedEndpoint::store_raw(std::string_view object, std::span<const std::byte> data) {
    validate_object_name(object);
    std::lock_guard lock(mutex_);
    auto& slot = objects_[std::string(object)];
    slot.assign(data.begin(), data.end());
    return slot.size();
}

std::size_t SimulatedEndpoint::store_raw(std::string_view object, std::vector<std::byte>&& data) {
    validate_object_name(object);
    std::lock_guard lock(mutex_);
    const std::size_t size = data.size();
    objects_[std::string(object)] = std::move(data);
    return size;
}

std::vector<std::byte> SimulatedEndpoint::fetch_raw(std::string_view object) const {
    std::lock_guard lock(mutex_);
    const auto it = objects_.find(object);
    if (it == objects_.end())
        throw Error(Errc::not_found,
                    "endpoint '" + id_ + "': no object '" + std::string(object) + "'");
    return it->second;
}

std::size_t SimulatedEndpoint::object_size(std::string_view object) const {
    std::lock_guard lock(mutex_);
    const auto it = objects_.find(object);
    if (it == objects_.end())
        throw Error(Errc::not_found,
                    "endpoint '" + id_ + "': no object '" + std::string(object) + "'");
    return it->second.size();
}

std::shared_ptr<StorageEndpoint> make_endpoint(const EndpointDescriptor& descriptor,
                                               std::shared_ptr<SimClock> clock) {
    descriptor.validate();
    if (descriptor.backend == BackendKind::local_dir)
        return std::make_shared<LocalDirEndpoint>(descriptor.endpoint_id, descriptor.root);
    return std::make_shared<SimulatedEndpoint>(descriptor.endpoint_id, descriptor.sim, std::move(clock));
}

std::vector<EndpointDescriptor> load_endpoint_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open())
        throw Error(Errc::config, "endpoint config: cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(Errc::config, "endpoint config: cannot parse " + path.string() + ": " + e.what());
    }
    if (!doc.is_array())
        throw Error(Errc::config, "endpoint config: expected a JSON array of endpoints");

    std::vector<EndpointDescriptor> out;
    for (const auto& e : doc) {
        EndpointDescriptor d;
        d.endpoint_id = e.value("id", "");
        const std::string backend = e.value("backend", "");
        if (backend == "local") {
            d.backend = BackendKind::local_dir;
            d.root = e.value("root", "");
        } else if (backend == "simulated") {
            d.backend = BackendKind::simulated;
            d.sim.setup_latency_s = e.value("setup_latency_s", 0.0);
            if (e.contains("bandwidth_bps")) d.sim.bandwidth_bps = e.at("bandwidth_bps").get<double>();
            d.sim.failure_probability = e.value("failure_probability", 0.0);
            d.sim.rng_seed = e.value("seed", std::uint64_t{0});
        } else {
            throw Error(Errc::config, "endpoint config: unknown backend '" + backend +
                                          "' (expected 'local' or 'simulated')");
        }
        d.validate();
        out.push_back(std::move(d));
    }
    if (out.empty()) throw Error(Errc::config, "endpoint config: no endpoints defined");
    return out;
}

} // namespace ecstore
