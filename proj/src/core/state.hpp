#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "core/expr.hpp"
#include "core/value.hpp"

namespace aoi {

enum class Origin { InitTest, DeficiencyFp, DeficiencyFn, Validation };

std::string origin_name(Origin o);
Origin origin_from_name(const std::string& name); // SchemaError on unknown tag

struct StateMeta {
    Origin origin = Origin::InitTest;
    std::string input;  // input fingerprint, e.g. "x=0.3"
    std::string mutant; // empty for correct states
    bool faulted = false;
    bool operator==(const StateMeta&) const = default;
};

// One deduplicated program state: values aligned to the repo signature plus
// the metadata of its first ingestion.
struct StoredState {
    std::vector<Value> values;
    StateMeta meta;
    long long multiplicity = 1;
    bool operator==(const StoredState&) const = default;
};

// Labeled collections of correct and incorrect program states. States are
// rounded to `precision` decimal digits at ingestion and deduplicated on the
// variable map (identical maps accumulate multiplicity).
class StateRepo {
public:
    StateRepo() = default;
    StateRepo(VarSignature sig, int precision = 9);

    const VarSignature& signature() const { return sig_; }
    int precision() const { return precision_; }
    const std::vector<StoredState>& positives() const { return pos_; }
    const std::vector<StoredState>& negatives() const { return neg_; }
    long long positive_weight() const; // total multiplicity
    long long negative_weight() const;

    // Values must be aligned to the signature. Throws SchemaError on type
    // mismatch, non-finite numbers, or a label/mutant-id inconsistency
    // (negatives carry a mutant id, positives do not).
    void ingest(std::span<const Value> values, const StateMeta& meta, bool positive);

    // Name-keyed variant; every signature variable must be present exactly
    // once. Throws SchemaError on unknown/missing names.
    void ingest_map(const std::vector<std::pair<std::string, Value>>& vars,
                    const StateMeta& meta, bool positive);

    nlohmann::ordered_json to_json() const;
    static StateRepo from_json(const nlohmann::ordered_json& j);
    void save(const std::string& path) const;
    static StateRepo load(const std::string& path);

    bool operator==(const StateRepo& other) const;

private:
    static StateRepo from_json_checked(const nlohmann::ordered_json& j);
    std::string key_of(std::span<const Value> values) const;

    VarSignature sig_;
    int precision_ = 9;
    std::vector<StoredState> pos_, neg_;
    std::unordered_map<std::string, std::size_t> pos_index_, neg_index_;
};

} // namespace aoi
