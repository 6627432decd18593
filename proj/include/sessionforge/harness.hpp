#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sessionforge/checker.hpp"

namespace sf {

// SplitMix64 (Steele, Lea, Flood 2014). split() derives an independent stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    // Uniform in [0, n).
    std::size_t below(std::size_t n);
    bool chance(double p);
    SplitMix64 split() { return SplitMix64(next()); }

private:
    std::uint64_t state_;
};

// Seed for case i of a run started from `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::size_t i);

struct GenConfig {
    std::uint64_t seed = 1;
    int max_depth = 4;   // derivation depth, >= 1
    int type_depth = 2;  // >= 1
    std::vector<std::string> labels = {"a", "b"};
    System system = System::ULL;
    bool mix = false;
};

Type gen_type(SplitMix64& rng, int depth, const std::vector<std::string>& labels);

// A derivation valid by construction, built by forward application of the
// rules of cfg.system. CLL derivations are the classical images of generated
// ULL derivations; ILL derivations are generated from the starred rules.
Derivation gen_derivation(const GenConfig& cfg);

// A ULL derivation of  . ; . |- P :: z:1  whose process is a tree of cuts
// between producers and consumers of generated session types.
Derivation gen_closed(const GenConfig& cfg);

// Rules of cfg.system (with mix/empty when cfg.mix) that occur in none of
// `samples` derivations generated from consecutive case seeds.
std::vector<std::string> coverage_holes(const GenConfig& cfg, std::size_t samples);

class BudgetOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleLimits {
    std::size_t max_processes = 1000000;
    std::vector<Name> free_pool = {"x", "y", "z"};
    std::vector<std::string> labels = {"a"};
    long infer_steps = 20000;
    // Without mix, 0 and bare parallel composition have no typing rule and
    // are left out of the enumeration.
    bool mix = false;
};

struct OracleEntry {
    Process process;
    Judgment judgment;
};

struct OracleResult {
    std::vector<Process> processes;       // everything enumerated
    std::vector<OracleEntry> typable;     // one entry per typable (process, judgment)
    std::vector<std::string> typable_keys;  // alpha keys of processes with some judgment
};

// Every process of size <= size_bound over the free name pool, up to renaming
// of free names, typed against every region assignment with types from the
// universe closed under duality.
OracleResult exhaustive_oracle(std::size_t size_bound, const std::vector<Type>& universe,
                               System system, const OracleLimits& limits = {});

std::vector<Process> enumerate_processes(std::size_t size_bound, const OracleLimits& limits);

struct PropertyFailure {
    std::uint64_t seed;
    std::string message;
    std::string counterexample;  // minimized
};

struct PropertyReport {
    std::string name;
    std::size_t cases = 0;
    std::vector<PropertyFailure> failures;
    double wall_ms = 0;

    bool ok() const { return failures.empty(); }
    std::string json() const;
};

const std::vector<std::string>& property_names();

// Throws std::invalid_argument on an unknown suite name.
PropertyReport run_property(const std::string& name, const GenConfig& cfg, std::size_t cases);

}  // namespace sf
