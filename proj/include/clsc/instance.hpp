#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clsc {

struct Hospital {
    std::string id;
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
    double usage = 0.0;  // masks per planning period
};

struct CandidateSite {
    std::string id;
    double lat = 0.0;
    double lon = 0.0;
    double fixed_cost_collection = 0.0;      // F_j, CAD
    double fixed_cost_reprocessing = 0.0;    // F_k, CAD
    double unit_cost_collection = 0.0;       // CC_j, CAD/mask
    double unit_cost_reprocessing = 0.0;     // RC_k, CAD/mask
    double fixed_emission_collection = 0.0;  // kg CO2
    double fixed_emission_reprocessing = 0.0;
    double unit_emission_collection = 0.0;  // kg CO2/mask
    double unit_emission_reprocessing = 0.0;
    long jobs_collection = 0;
    long jobs_reprocessing = 0;
};

struct DisposalSite {
    std::string id;
    double unit_cost = 0.0;      // CAD/mask
    double unit_emission = 0.0;  // kg CO2/mask
};

struct GlobalParams {
    double price = 0.0;                 // CAD/mask
    double production_emission = 0.0;   // kg CO2/mask
    double transport_cost_per_km = 0.0; // CAD/km
    double truck_emission_per_km = 0.0; // kg CO2/km
    double budget = 0.0;                // CAD
    double alpha = 0.0;                 // collected fraction of used masks
    double beta = 0.0;                  // reprocessable fraction at collection centres
};

struct DistanceOverride {
    std::vector<std::vector<double>> hospital_site;  // km, |hospitals| x |sites|
    std::vector<std::vector<double>> site_site;      // km, |sites| x |sites|
};

struct Instance {
    std::vector<Hospital> hospitals;
    std::vector<CandidateSite> sites;
    std::vector<DisposalSite> disposal_sites;
    GlobalParams params;
    std::optional<DistanceOverride> distance_override;

    double total_usage() const;
};

struct Violation {
    std::string path;  // e.g. "hospitals[3].usage"
    std::string message;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by load_instance when the parsed document violates invariants.
struct ValidationError : std::runtime_error {
    std::vector<Violation> violations;
    explicit ValidationError(std::vector<Violation> v);
};

std::vector<Violation> validate(const Instance& inst);

Instance load_instance(std::istream& in);
Instance load_instance_file(const std::string& path);
void save_instance(const Instance& inst, std::ostream& out);
void save_instance_file(const Instance& inst, const std::string& path);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};
struct IntRange {
    long lo = 0;
    long hi = 0;
};

// Ranges for the synthetic generator. Disposal cost is drawn as a fraction
// of the mask price (default 20%-30%); coordinates inside the bounding box
// (default Vancouver Island).
struct RangeConfig {
    Range usage{200000, 500000};
    Range fixed_cost_collection{50000, 150000};
    Range fixed_cost_reprocessing{100000, 300000};
    Range unit_cost_collection{0.05, 0.15};
    Range unit_cost_reprocessing{0.20, 0.50};
    Range fixed_emission_collection{5000, 20000};
    Range fixed_emission_reprocessing{10000, 40000};
    Range unit_emission_collection{0.002, 0.010};
    Range unit_emission_reprocessing{0.005, 0.020};
    IntRange jobs_collection{2, 5};
    IntRange jobs_reprocessing{5, 10};
    Range disposal_cost_fraction{0.20, 0.30};
    Range disposal_emission{0.005, 0.012};
    Range lat_box{48.3, 50.8};
    Range lon_box{-128.5, -123.2};
    GlobalParams params{2.00, 0.05, 1.50, 0.30, 2000000.0, 0.80, 0.95};
};

struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic synthetic instance (splitmix64 value stream; identical
// output for identical arguments on any platform).
Instance generate_synthetic(std::uint64_t seed, std::size_t n_hospitals, std::size_t n_sites,
                            std::size_t n_disposal, const RangeConfig& ranges = {});

}  // namespace clsc
