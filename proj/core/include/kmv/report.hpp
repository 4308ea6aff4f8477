#pragma once

#include <optional>
#include <string>

#include "kmv/vplus.hpp"

namespace kmv {

inline constexpr const char* kSchema = "kmv/1";

std::string vplus_report_json(const VPlusReport& rep, u64 seed);
std::string vplus_report_table(const VPlusReport& rep, u64 seed);
std::string bernoulli_json(u32 p);
std::string bernoulli_text(u32 p, bool csv);
std::string missed_json(const VPlusReport& rep);

// content-addressed result cache; location from KMV_CACHE_DIR, disabled when unset
std::string cache_key(const std::string& canonical);
std::optional<std::string> cache_lookup(const std::string& key);
void cache_store(const std::string& key, const std::string& payload);

}  // namespace kmv
