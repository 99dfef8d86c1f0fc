#include "clsc/instance.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace clsc {

using json = nlohmann::ordered_json;

double Instance::total_usage() const {
    double s = 0.0;
    for (const auto& h : hospitals) s += h.usage;
    return s;
}

ValidationError::ValidationError(std::vector<Violation> v)
    : std::runtime_error([&v] {
          std::string msg = "instance validation failed:";
          for (const auto& viol : v) msg += "\n  " + viol.path + ": " + viol.message;
          return msg;
      }()),
      violations(std::move(v)) {}

namespace {

void check_unique_ids(const std::vector<std::string>& ids, const std::string& list_name,
                      std::vector<Violation>& out) {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto [it, inserted] = seen.emplace(ids[i], i);
        if (!inserted) {
            out.push_back({list_name + "[" + std::to_string(it->second) + "," +
                               std::to_string(i) + "].id",
                           "duplicate id '" + ids[i] + "'"});
        }
    }
}

void check_coords(double lat, double lon, const std::string& path, std::vector<Violation>& out) {
    if (!(lat >= -90.0 && lat <= 90.0))
        out.push_back({path + ".lat", "latitude must be in [-90, 90]"});
    if (!(lon >= -180.0 && lon <= 180.0))
        out.push_back({path + ".lon", "longitude must be in [-180, 180]"});
}

void check_nonneg(double v, const std::string& path, std::vector<Violation>& out) {
    if (!(v >= 0.0)) out.push_back({path, "must be non-negative"});
}

void check_matrix(const std::vector<std::vector<double>>& m, std::size_t rows, std::size_t cols,
                  const std::string& path, std::vector<Violation>& out) {
    if (m.size() != rows) {
        out.push_back({path, "expected " + std::to_string(rows) + " rows, got " +
                                 std::to_string(m.size())});
        return;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != cols) {
            out.push_back({path + "[" + std::to_string(i) + "]",
                           "expected " + std::to_string(cols) + " columns, got " +
                               std::to_string(m[i].size())});
            continue;
        }
        for (std::size_t j = 0; j < m[i].size(); ++j)
            if (!(m[i][j] >= 0.0))
                out.push_back({path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                               "distance must be non-negative"});
    }
}

}  // namespace

std::vector<Violation> validate(const Instance& inst) {
    std::vector<Violation> out;

    for (std::size_t i = 0; i < inst.hospitals.size(); ++i) {
        const auto& h = inst.hospitals[i];
        const std::string p = "hospitals[" + std::to_string(i) + "]";
        check_coords(h.lat, h.lon, p, out);
        if (!(h.usage >= 0.0)) out.push_back({p + ".usage", "must be non-negative"});
    }
    for (std::size_t j = 0; j < inst.sites.size(); ++j) {
        const auto& s = inst.sites[j];
        const std::string p = "sites[" + std::to_string(j) + "]";
        check_coords(s.lat, s.lon, p, out);
        check_nonneg(s.fixed_cost_collection, p + ".fixed_cost_collection", out);
        check_nonneg(s.fixed_cost_reprocessing, p + ".fixed_cost_reprocessing", out);
        check_nonneg(s.unit_cost_collection, p + ".unit_cost_collection", out);
        check_nonneg(s.unit_cost_reprocessing, p + ".unit_cost_reprocessing", out);
        check_nonneg(s.fixed_emission_collection, p + ".fixed_emission_collection", out);
        check_nonneg(s.fixed_emission_reprocessing, p + ".fixed_emission_reprocessing", out);
        check_nonneg(s.unit_emission_collection, p + ".unit_emission_collection", out);
        check_nonneg(s.unit_emission_reprocessing, p + ".unit_emission_reprocessing", out);
        if (s.jobs_collection < 0) out.push_back({p + ".jobs_collection", "must be non-negative"});
        if (s.jobs_reprocessing < 0)
            out.push_back({p + ".jobs_reprocessing", "must be non-negative"});
    }
    if (inst.disposal_sites.empty())
        out.push_back({"disposal_sites", "at least one disposal site is required"});
    for (std::size_t m = 0; m < inst.disposal_sites.size(); ++m) {
        const auto& d = inst.disposal_sites[m];
        const std::string p = "disposal_sites[" + std::to_string(m) + "]";
        check_nonneg(d.unit_cost, p + ".unit_cost", out);
        check_nonneg(d.unit_emission, p + ".unit_emission", out);
    }

    const auto& gp = inst.params;
    if (!(gp.alpha >= 0.0 && gp.alpha <= 1.0))
        out.push_back({"params.alpha", "must be in [0, 1]"});
    if (!(gp.beta >= 0.0 && gp.beta <= 1.0)) out.push_back({"params.beta", "must be in [0, 1]"});
    check_nonneg(gp.price, "params.price", out);
    check_nonneg(gp.production_emission, "params.production_emission", out);
    check_nonneg(gp.transport_cost_per_km, "params.transport_cost_per_km", out);
    check_nonneg(gp.truck_emission_per_km, "params.truck_emission_per_km", out);
    check_nonneg(gp.budget, "params.budget", out);

    {
        std::vector<std::string> ids;
        for (const auto& h : inst.hospitals) ids.push_back(h.id);
        check_unique_ids(ids, "hospitals", out);
        ids.clear();
        for (const auto& s : inst.sites) ids.push_back(s.id);
        check_unique_ids(ids, "sites", out);
        ids.clear();
        for (const auto& d : inst.disposal_sites) ids.push_back(d.id);
        check_unique_ids(ids, "disposal_sites", out);
    }

    if (inst.distance_override) {
        check_matrix(inst.distance_override->hospital_site, inst.hospitals.size(),
                     inst.sites.size(), "distance_override.hospital_site", out);
        check_matrix(inst.distance_override->site_site, inst.sites.size(), inst.sites.size(),
                     "distance_override.site_site", out);
    }
    return out;
}

namespace {

double get_num(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ParseError(path + "." + key + ": missing field");
    if (!j.at(key).is_number()) throw ParseError(path + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

long get_int(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ParseError(path + "." + key + ": missing field");
    if (!j.at(key).is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
    return j.at(key).get<long>();
}

std::string get_str(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ParseError(path + "." + key + ": missing field");
    if (!j.at(key).is_string()) throw ParseError(path + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

std::vector<std::vector<double>> get_matrix(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path + ": expected an array of arrays");
    std::vector<std::vector<double>> m;
    for (const auto& row : j) {
        if (!row.is_array()) throw ParseError(path + ": expected an array of arrays");
        m.emplace_back();
        for (const auto& v : row) {
            if (!v.is_number()) throw ParseError(path + ": matrix entries must be numbers");
            m.back().push_back(v.get<double>());
        }
    }
    return m;
}

}  // namespace

Instance load_instance(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("instance document must be an object");

    Instance inst;
    if (!doc.contains("hospitals") || !doc["hospitals"].is_array())
        throw ParseError("hospitals: missing or not an array");
    for (std::size_t i = 0; i < doc["hospitals"].size(); ++i) {
        const auto& h = doc["hospitals"][i];
        const std::string p = "hospitals[" + std::to_string(i) + "]";
        Hospital out;
        out.id = get_str(h, "id", p);
        out.name = h.contains("name") ? get_str(h, "name", p) : std::string();
        out.lat = get_num(h, "lat", p);
        out.lon = get_num(h, "lon", p);
        out.usage = get_num(h, "usage", p);
        inst.hospitals.push_back(std::move(out));
    }
    if (!doc.contains("sites") || !doc["sites"].is_array())
        throw ParseError("sites: missing or not an array");
    for (std::size_t j = 0; j < doc["sites"].size(); ++j) {
        const auto& s = doc["sites"][j];
        const std::string p = "sites[" + std::to_string(j) + "]";
        CandidateSite out;
        out.id = get_str(s, "id", p);
        out.lat = get_num(s, "lat", p);
        out.lon = get_num(s, "lon", p);
        out.fixed_cost_collection = get_num(s, "fixed_cost_collection", p);
        out.fixed_cost_reprocessing = get_num(s, "fixed_cost_reprocessing", p);
        out.unit_cost_collection = get_num(s, "unit_cost_collection", p);
        out.unit_cost_reprocessing = get_num(s, "unit_cost_reprocessing", p);
        out.fixed_emission_collection = get_num(s, "fixed_emission_collection", p);
        out.fixed_emission_reprocessing = get_num(s, "fixed_emission_reprocessing", p);
        out.unit_emission_collection = get_num(s, "unit_emission_collection", p);
        out.unit_emission_reprocessing = get_num(s, "unit_emission_reprocessing", p);
        out.jobs_collection = get_int(s, "jobs_collection", p);
        out.jobs_reprocessing = get_int(s, "jobs_reprocessing", p);
        inst.sites.push_back(std::move(out));
    }
    if (!doc.contains("disposal_sites") || !doc["disposal_sites"].is_array())
        throw ParseError("disposal_sites: missing or not an array");
    for (std::size_t m = 0; m < doc["disposal_sites"].size(); ++m) {
        const auto& d = doc["disposal_sites"][m];
        const std::string p = "disposal_sites[" + std::to_string(m) + "]";
        DisposalSite out;
        out.id = get_str(d, "id", p);
        out.unit_cost = get_num(d, "unit_cost", p);
        out.unit_emission = get_num(d, "unit_emission", p);
        inst.disposal_sites.push_back(std::move(out));
    }
    if (!doc.contains("params") || !doc["params"].is_object())
        throw ParseError("params: missing or not an object");
    {
        const auto& g = doc["params"];
        inst.params.price = get_num(g, "price", "params");
        inst.params.production_emission = get_num(g, "production_emission", "params");
        inst.params.transport_cost_per_km = get_num(g, "transport_cost_per_km", "params");
        inst.params.truck_emission_per_km = get_num(g, "truck_emission_per_km", "params");
        inst.params.budget = get_num(g, "budget", "params");
        inst.params.alpha = get_num(g, "alpha", "params");
        inst.params.beta = get_num(g, "beta", "params");
    }
    if (doc.contains("distance_override")) {
        const auto& o = doc["distance_override"];
        if (!o.is_object() || !o.contains("hospital_site") || !o.contains("site_site"))
            throw ParseError("distance_override: needs hospital_site and site_site matrices");
        DistanceOverride ov;
        ov.hospital_site = get_matrix(o["hospital_site"], "distance_override.hospital_site");
        ov.site_site = get_matrix(o["site_site"], "distance_override.site_site");
        inst.distance_override = std::move(ov);
    }

    auto violations = validate(inst);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open instance file: " + path);
    return load_instance(in);
}

void save_instance(const Instance& inst, std::ostream& out) {
    json doc;
    doc["hospitals"] = json::array();
    for (const auto& h : inst.hospitals) {
        json e;
        e["id"] = h.id;
        e["name"] = h.name;
        e["lat"] = h.lat;
        e["lon"] = h.lon;
        e["usage"] = h.usage;
        doc["hospitals"].push_back(std::move(e));
    }
    doc["sites"] = json::array();
    for (const auto& s : inst.sites) {
        json e;
        e["id"] = s.id;
        e["lat"] = s.lat;
        e["lon"] = s.lon;
        e["fixed_cost_collection"] = s.fixed_cost_collection;
        e["fixed_cost_reprocessing"] = s.fixed_cost_reprocessing;
        e["unit_cost_collection"] = s.unit_cost_collection;
        e["unit_cost_reprocessing"] = s.unit_cost_reprocessing;
        e["fixed_emission_collection"] = s.fixed_emission_collection;
        e["fixed_emission_reprocessing"] = s.fixed_emission_reprocessing;
        e["unit_emission_collection"] = s.unit_emission_collection;
        e["unit_emission_reprocessing"] = s.unit_emission_reprocessing;
        e["jobs_collection"] = s.jobs_collection;
        e["jobs_reprocessing"] = s.jobs_reprocessing;
        doc["sites"].push_back(std::move(e));
    }
    doc["disposal_sites"] = json::array();
    for (const auto& d : inst.disposal_sites) {
        json e;
        e["id"] = d.id;
        e["unit_cost"] = d.unit_cost;
        e["unit_emission"] = d.unit_emission;
        doc["disposal_sites"].push_back(std::move(e));
    }
    {
        json g;
        g["price"] = inst.params.price;
        g["production_emission"] = inst.params.production_emission;
        g["transport_cost_per_km"] = inst.params.transport_cost_per_km;
        g["truck_emission_per_km"] = inst.params.truck_emission_per_km;
        g["budget"] = inst.params.budget;
        g["alpha"] = inst.params.alpha;
        g["beta"] = inst.params.beta;
        doc["params"] = std::move(g);
    }
    if (inst.distance_override) {
        json o;
        o["hospital_site"] = inst.distance_override->hospital_site;
        o["site_site"] = inst.distance_override->site_site;
        doc["distance_override"] = std::move(o);
    }
    out << doc.dump(2) << "\n";
}

void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    save_instance(inst, out);
}

namespace {

// splitmix64; the generator contract is a fixed value stream per seed.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, 1), 53-bit mantissa
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double in_range(const Range& r) { return r.lo + uniform() * (r.hi - r.lo); }
    long in_int_range(const IntRange& r) {
        double v = std::floor(static_cast<double>(r.lo) +
                              uniform() * static_cast<double>(r.hi - r.lo + 1));
        long out = static_cast<long>(v);
        if (out > r.hi) out = r.hi;
        return out;
    }
};

double round6(double v) { return std::round(v * 1e6) / 1e6; }

void check_range(const Range& r, const char* name) {
    if (r.lo > r.hi)
        throw RangeError(std::string("range ") + name + ": min > max");
}

}  // namespace

Instance generate_synthetic(std::uint64_t seed, std::size_t n_hospitals, std::size_t n_sites,
                            std::size_t n_disposal, const RangeConfig& ranges) {
    if (n_hospitals < 1 || n_sites < 1 || n_disposal < 1)
        throw RangeError("counts must be >= 1");
    check_range(ranges.usage, "usage");
    check_range(ranges.fixed_cost_collection, "fixed_cost_collection");
    check_range(ranges.fixed_cost_reprocessing, "fixed_cost_reprocessing");
    check_range(ranges.unit_cost_collection, "unit_cost_collection");
    check_range(ranges.unit_cost_reprocessing, "unit_cost_reprocessing");
    check_range(ranges.fixed_emission_collection, "fixed_emission_collection");
    check_range(ranges.fixed_emission_reprocessing, "fixed_emission_reprocessing");
    check_range(ranges.unit_emission_collection, "unit_emission_collection");
    check_range(ranges.unit_emission_reprocessing, "unit_emission_reprocessing");
    check_range(ranges.disposal_cost_fraction, "disposal_cost_fraction");
    check_range(ranges.disposal_emission, "disposal_emission");
    check_range(ranges.lat_box, "lat_box");
    check_range(ranges.lon_box, "lon_box");
    if (ranges.jobs_collection.lo > ranges.jobs_collection.hi)
        throw RangeError("range jobs_collection: min > max");
    if (ranges.jobs_reprocessing.lo > ranges.jobs_reprocessing.hi)
        throw RangeError("range jobs_reprocessing: min > max");

    SplitMix64 rng(seed);
    Instance inst;
    inst.params = ranges.params;

    // Draw order is part of the format contract: hospitals, then sites,
    // then disposal sites, fields in declaration order.
    for (std::size_t i = 0; i < n_hospitals; ++i) {
        Hospital h;
        h.id = "H" + std::to_string(i + 1);
        h.name = "Hospital " + std::to_string(i + 1);
        h.lat = round6(rng.in_range(ranges.lat_box));
        h.lon = round6(rng.in_range(ranges.lon_box));
        h.usage = std::floor(rng.in_range(ranges.usage) + 0.5);  // whole masks
        inst.hospitals.push_back(std::move(h));
    }
    for (std::size_t j = 0; j < n_sites; ++j) {
        CandidateSite s;
        s.id = "S" + std::to_string(j + 1);
        s.lat = round6(rng.in_range(ranges.lat_box));
        s.lon = round6(rng.in_range(ranges.lon_box));
        s.fixed_cost_collection = round6(rng.in_range(ranges.fixed_cost_collection));
        s.fixed_cost_reprocessing = round6(rng.in_range(ranges.fixed_cost_reprocessing));
        s.unit_cost_collection = round6(rng.in_range(ranges.unit_cost_collection));
        s.unit_cost_reprocessing = round6(rng.in_range(ranges.unit_cost_reprocessing));
        s.fixed_emission_collection = round6(rng.in_range(ranges.fixed_emission_collection));
        s.fixed_emission_reprocessing = round6(rng.in_range(ranges.fixed_emission_reprocessing));
        s.unit_emission_collection = round6(rng.in_range(ranges.unit_emission_collection));
        s.unit_emission_reprocessing = round6(rng.in_range(ranges.unit_emission_reprocessing));
        s.jobs_collection = rng.in_int_range(ranges.jobs_collection);
        s.jobs_reprocessing = rng.in_int_range(ranges.jobs_reprocessing);
        inst.sites.push_back(std::move(s));
    }
    for (std::size_t m = 0; m < n_disposal; ++m) {
        DisposalSite d;
        d.id = "D" + std::to_string(m + 1);
        d.unit_cost = round6(rng.in_range(ranges.disposal_cost_fraction) * inst.params.price);
        d.unit_emission = round6(rng.in_range(ranges.disposal_emission));
        inst.disposal_sites.push_back(std::move(d));
    }
    return inst;
}

}  // namespace clsc
