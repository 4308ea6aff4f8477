#include "kmv/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kmv/bernoulli.hpp"
#include "kmv/errors.hpp"

namespace kmv {

using nlohmann::ordered_json;

namespace {

const char* model_name(Model m) { return m == Model::km ? "km" : "tower"; }

ordered_json missed_obj(const VPlusReport& rep) {
    ordered_json m = ordered_json::object();
    for (auto& [strip, places] : rep.missed) m[std::to_string(strip)] = places;
    return m;
}

}  // namespace

std::string vplus_report_json(const VPlusReport& rep, u64 seed) {
    ordered_json j;
    j["schema"] = kSchema;
    j["command"] = "vplus";
    j["p"] = rep.p;
    j["n"] = rep.n;
    j["model"] = model_name(rep.model);
    j["seed"] = seed;
    j["cyclic_orders"] = rep.cyclic_orders;
    j["r"] = rep.r;
    j["missed"] = missed_obj(rep);
    j["saturated"] = rep.saturated;
    j["family_exhausted"] = rep.family_exhausted;
    j["generators_used"] = rep.generators_used;
    ordered_json derived;
    derived["note"] = "conditional identification of the quotient with the class group";
    derived["class_group"] = rep.class_group;
    ordered_json pic = ordered_json::array();
    for (auto& [o, m] : rep.pic_orders) pic.push_back(ordered_json::array({o, m}));
    derived["pic_orders"] = pic;
    derived["pic_formula"] = rep.pic_formula;
    j["derived"] = derived;
    return j.dump();
}

std::string vplus_report_table(const VPlusReport& rep, u64 seed) {
    std::ostringstream os;
    os << "p=" << rep.p << " n=" << rep.n << " model=" << model_name(rep.model) << " seed=" << seed
       << "\n";
    os << "group: ";
    if (rep.cyclic_orders.empty()) os << "trivial";
    for (std::size_t i = 0; i < rep.cyclic_orders.size(); ++i)
        os << (i ? " x " : "") << "Z/" << rep.cyclic_orders[i];
    os << "\nr: [";
    for (std::size_t i = 0; i < rep.r.size(); ++i) os << (i ? "," : "") << rep.r[i];
    os << "]\nmissed:";
    for (auto& [strip, places] : rep.missed) {
        os << " strip" << strip << "={";
        for (std::size_t i = 0; i < places.size(); ++i) os << (i ? "," : "") << places[i];
        os << "}";
    }
    os << "\nsaturated=" << (rep.saturated ? "yes" : "NO") << " exhausted="
       << (rep.family_exhausted ? "yes" : "no") << " generators=" << rep.generators_used << "\n";
    os << "derived (conditional): class group as above; Pic " << rep.pic_formula << "\n";
    return os.str();
}

std::string bernoulli_json(u32 p) {
    auto idx = irregular_indices(p);
    ordered_json j;
    j["schema"] = kSchema;
    j["command"] = "bernoulli";
    j["p"] = p;
    j["r"] = idx.size();
    j["indices"] = idx;
    return j.dump();
}

std::string bernoulli_text(u32 p, bool csv) {
    auto idx = irregular_indices(p);
    std::ostringstream os;
    if (csv) {
        os << "p,r,indices\n" << p << "," << idx.size() << ",";
        for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? ";" : "") << idx[i];
        os << "\n";
    } else {
        os << "p=" << p << " r=" << idx.size() << " indices=[";
        for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
        os << "]\n";
    }
    return os.str();
}

std::string missed_json(const VPlusReport& rep) { return missed_obj(rep).dump(); }

std::string cache_key(const std::string& canonical) {
    u64 h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

namespace {

std::optional<std::filesystem::path> cache_dir() {
    const char* d = std::getenv("KMV_CACHE_DIR");
    if (!d || !*d) return std::nullopt;
    return std::filesystem::path(d);
}

}  // namespace

std::optional<std::string> cache_lookup(const std::string& key) {
    auto dir = cache_dir();
    if (!dir) return std::nullopt;
    std::ifstream in(*dir / (key + ".json"), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void cache_store(const std::string& key, const std::string& payload) {
    auto dir = cache_dir();
    if (!dir) return;
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    auto tmp = *dir / (key + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;
        out << payload;
    }
    std::filesystem::rename(tmp, *dir / (key + ".json"), ec);
}

}  // namespace kmv
