// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crudwalk/rng.hpp"
#include "crudwalk/runtime/http.hpp"

namespace crudwalk::runtime {

struct GeneratorConfig {
    std::uint64_t seed = 0;
    std::size_t min_string = 1, max_string = 12;
    std::int64_t min_integer = 0, max_integer = 1000;
    double min_number = 0, max_number = 1000;
    std::size_t min_items = 0, max_items = 3;
    /// First value handed out by next_id() in every id space.
    std::int64_t id_base = 1;
};

class UnsupportedSchema : public InputError {
  public:
    using InputError::InputError;
};

/// Random values for the supported schema subset: object, array, string, integer,
/// number, boolean, enum, const, required, minimum/maximum (and exclusive forms),
/// minLength/maxLength, minItems/maxItems. Anything else throws UnsupportedSchema.
class Generator {
  public:
    explicit Generator(const GeneratorConfig& config);

    /// When `key_field` names a top-level property, it receives next_id(id_space).
    Json generate(const Json& schema, std::string_view key_field = {}, std::string_view id_space = {});

    /// Monotone per id space, starting at config.id_base.
    std::int64_t next_id(std::string_view id_space);

  private:
    Json value(const Json& schema, const std::string& where);

    GeneratorConfig config_;
    Rng rng_;
    std::map<std::string, std::int64_t, std::less<>> counters_;
};

/// First violation of `schema` by `value`, if any (same subset as Generator).
std::optional<std::string> validate(const Json& value, const Json& schema);

struct EmulatedEntry {
    std::string resource;  // collection path, e.g. "/players"
    Json data;
    Json id;  // data[key field]
};

/// The tester's picture of what it created, keyed by model value ("p1").
class EmulatedState {
  public:
    /// Throws InternalError when `tla_id` is already present.
    void add(const std::string& tla_id, const std::string& resource, const Json& data, const std::string& key_field);
    /// Throws InternalError when absent.
    void remove(const std::string& tla_id);
    void update(const std::string& tla_id, const Json& data);
    /// Stored entry, or nullopt (the empty marker). Does not remove it.
    std::optional<EmulatedEntry> recycle(const std::string& tla_id) const;
    void reset();

    std::size_t size() const { return entries_.size(); }
    /// Model values in creation order.
    std::vector<std::string> creation_order() const { return order_; }

  private:
    std::map<std::string, EmulatedEntry> entries_;
    std::vector<std::string> order_;
    std::map<std::string, std::string> key_fields_;
};

struct Snapshot {
    std::optional<HttpResponse> response;
    std::string error;  // set when response is empty
};

/// Values captured before an operation runs, keyed by the resolved GET path.
class SnapshotStore {
  public:
    /// Write-once per path; throws InternalError on a second write.
    void put(const std::string& path, HttpResponse response);
    void put_error(const std::string& path, const std::string& reason);
    const Snapshot* get(const std::string& path) const;
    bool contains(const std::string& path) const { return items_.count(path) != 0; }
    void clear() { items_.clear(); }
    std::size_t size() const { return items_.size(); }

  private:
    std::map<std::string, Snapshot> items_;
};

}  // namespace crudwalk::runtime
