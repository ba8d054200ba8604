#include "core/state.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "core/errors.hpp"

namespace aoi {

using nlohmann::ordered_json;

std::string origin_name(Origin o) {
    switch (o) {
    case Origin::InitTest: return "init-test";
    case Origin::DeficiencyFp: return "deficiency-fp";
    case Origin::DeficiencyFn: return "deficiency-fn";
    case Origin::Validation: return "validation";
    }
    return "init-test";
}

Origin origin_from_name(const std::string& name) {
    if (name == "init-test") return Origin::InitTest;
    if (name == "deficiency-fp") return Origin::DeficiencyFp;
    if (name == "deficiency-fn") return Origin::DeficiencyFn;
    if (name == "validation") return Origin::Validation;
    throw SchemaError("unknown origin tag '" + name + "'");
}

StateRepo::StateRepo(VarSignature sig, int precision)
    : sig_(std::move(sig)), precision_(precision) {
    if (precision < 0) throw std::invalid_argument("StateRepo: negative precision");
}

long long StateRepo::positive_weight() const {
    long long w = 0;
    for (const auto& s : pos_) w += s.multiplicity;
    return w;
}

long long StateRepo::negative_weight() const {
    long long w = 0;
    for (const auto& s : neg_) w += s.multiplicity;
    return w;
}

std::string StateRepo::key_of(std::span<const Value> values) const {
    std::string key;
    key.reserve(values.size() * 9);
    for (const auto& v : values) {
        if (value_type(v) == Type::Boolean) {
            key.push_back('b');
            key.push_back(std::get<bool>(v) ? '1' : '0');
        } else {
            key.push_back('n');
            double d = std::get<double>(v);
            char raw[sizeof(double)];
            std::memcpy(raw, &d, sizeof raw);
            key.append(raw, sizeof raw);
        }
    }
    return key;
}

void StateRepo::ingest(std::span<const Value> values, const StateMeta& meta, bool positive) {
    if (static_cast<int>(values.size()) != sig_.size())
        throw SchemaError("state does not match signature: wrong variable count");
    if (positive && !meta.mutant.empty())
        throw SchemaError("correct state must not carry a mutant id");
    if (!positive && meta.mutant.empty())
        throw SchemaError("incorrect state must carry a mutant id");

    std::vector<Value> rounded(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& decl = sig_.at(static_cast<int>(i));
        if (value_type(values[i]) != decl.type)
            throw SchemaError("state variable '" + decl.name + "' has wrong type");
        if (decl.type == Type::Number) {
            double d = std::get<double>(values[i]);
            if (!std::isfinite(d))
                throw SchemaError("state variable '" + decl.name + "' is not finite");
            rounded[i] = round_value(d, precision_);
        } else {
            rounded[i] = values[i];
        }
    }

    auto& list = positive ? pos_ : neg_;
    auto& index = positive ? pos_index_ : neg_index_;
    std::string key = key_of(rounded);
    auto it = index.find(key);
    if (it != index.end()) {
        list[it->second].multiplicity += 1;
        return;
    }
    index.emplace(std::move(key), list.size());
    list.push_back(StoredState{std::move(rounded), meta, 1});
}

void StateRepo::ingest_map(const std::vector<std::pair<std::string, Value>>& vars,
                           const StateMeta& meta, bool positive) {
    if (static_cast<int>(vars.size()) != sig_.size())
        throw SchemaError("state does not match signature: wrong variable count");
    std::vector<Value> aligned(static_cast<std::size_t>(sig_.size()), Value{0.0});
    std::vector<bool> seen(static_cast<std::size_t>(sig_.size()), false);
    for (const auto& [name, value] : vars) {
        auto idx = sig_.index_of(name);
        if (!idx) throw SchemaError("state variable '" + name + "' not in signature");
        if (seen[static_cast<std::size_t>(*idx)])
            throw SchemaError("state variable '" + name + "' appears twice");
        seen[static_cast<std::size_t>(*idx)] = true;
        aligned[static_cast<std::size_t>(*idx)] = value;
    }
    ingest(aligned, meta, positive);
}

namespace {

ordered_json state_to_json(const VarSignature& sig, const StoredState& s, bool positive) {
    ordered_json vars = ordered_json::object();
    for (int i = 0; i < sig.size(); ++i) {
        const auto& v = s.values[static_cast<std::size_t>(i)];
        if (value_type(v) == Type::Boolean) vars[sig.at(i).name] = std::get<bool>(v);
        else vars[sig.at(i).name] = std::get<double>(v);
    }
    ordered_json j;
    j["vars"] = std::move(vars);
    j["origin"] = origin_name(s.meta.origin);
    j["input"] = s.meta.input;
    if (!positive) j["mutant"] = s.meta.mutant;
    if (s.meta.faulted) j["faulted"] = true;
    j["multiplicity"] = s.multiplicity;
    return j;
}

const ordered_json& require_field(const ordered_json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw SchemaError(std::string("missing field '") + name + "'");
    return *it;
}

void load_states(StateRepo& repo, const ordered_json& arr, bool positive) {
    if (!arr.is_array()) throw SchemaError("state list must be an array");
    for (const auto& item : arr) {
        if (!item.is_object()) throw SchemaError("state entry must be an object");
        for (auto it = item.begin(); it != item.end(); ++it) {
            const std::string& k = it.key();
            if (k != "vars" && k != "origin" && k != "input" && k != "mutant" &&
                k != "faulted" && k != "multiplicity")
                throw SchemaError("unknown state field '" + k + "'");
        }
        const auto& vars = require_field(item, "vars");
        if (!vars.is_object()) throw SchemaError("'vars' must be an object");
        std::vector<std::pair<std::string, Value>> pairs;
        for (auto it = vars.begin(); it != vars.end(); ++it) {
            if (it->is_boolean()) pairs.emplace_back(it.key(), Value{it->get<bool>()});
            else if (it->is_number()) pairs.emplace_back(it.key(), Value{it->get<double>()});
            else throw SchemaError("variable '" + it.key() + "' must be boolean or number");
        }
        StateMeta meta;
        meta.origin = origin_from_name(require_field(item, "origin").get<std::string>());
        meta.input = require_field(item, "input").get<std::string>();
        if (item.contains("mutant")) meta.mutant = item["mutant"].get<std::string>();
        if (item.contains("faulted")) meta.faulted = item["faulted"].get<bool>();
        long long mult = require_field(item, "multiplicity").get<long long>();
        if (mult < 1) throw SchemaError("multiplicity must be >= 1");
        repo.ingest_map(pairs, meta, positive);
        // Re-apply the remaining multiplicity without re-counting the first.
        for (long long k = 1; k < mult; ++k) repo.ingest_map(pairs, meta, positive);
    }
}

} // namespace

ordered_json StateRepo::to_json() const {
    ordered_json sig = ordered_json::array();
    for (const auto& v : sig_.vars())
        sig.push_back(ordered_json{{"name", v.name}, {"type", type_name(v.type)}});

    ordered_json pos = ordered_json::array();
    for (const auto& s : pos_) pos.push_back(state_to_json(sig_, s, true));
    ordered_json neg = ordered_json::array();
    for (const auto& s : neg_) neg.push_back(state_to_json(sig_, s, false));

    ordered_json j;
    j["signature"] = std::move(sig);
    j["precision"] = precision_;
    j["positives"] = std::move(pos);
    j["negatives"] = std::move(neg);
    return j;
}

StateRepo StateRepo::from_json(const ordered_json& j) {
    try {
        return from_json_checked(j);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("repository schema violation: ") + e.what());
    }
}

StateRepo StateRepo::from_json_checked(const ordered_json& j) {
    if (!j.is_object()) throw SchemaError("repository file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "signature" && k != "precision" && k != "positives" && k != "negatives")
            throw SchemaError("unknown repository field '" + k + "'");
    }
    const auto& sig_json = require_field(j, "signature");
    if (!sig_json.is_array()) throw SchemaError("'signature' must be an array");
    std::vector<VarDecl> decls;
    for (const auto& item : sig_json) {
        if (!item.is_object() || !item.contains("name") || !item.contains("type"))
            throw SchemaError("signature entries must have 'name' and 'type'");
        const std::string type = item["type"].get<std::string>();
        if (type != "number" && type != "boolean")
            throw SchemaError("unknown variable type '" + type + "'");
        decls.push_back({item["name"].get<std::string>(),
                         type == "number" ? Type::Number : Type::Boolean});
    }
    int precision = 9;
    if (j.contains("precision")) {
        precision = j["precision"].get<int>();
        if (precision < 0) throw SchemaError("'precision' must be >= 0");
    }

    StateRepo repo;
    try {
        repo = StateRepo(VarSignature(std::move(decls)), precision);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    load_states(repo, require_field(j, "positives"), true);
    load_states(repo, require_field(j, "negatives"), false);
    return repo;
}

void StateRepo::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot open '" + path + "' for writing");
    out << to_json().dump(2) << "\n";
    if (!out) throw SchemaError("failed writing '" + path + "'");
}

StateRepo StateRepo::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("malformed JSON in '" + path + "': " + e.what());
    }
    return from_json(j);
}

bool StateRepo::operator==(const StateRepo& other) const {
    return sig_ == other.sig_ && precision_ == other.precision_ && pos_ == other.pos_ &&
           neg_ == other.neg_;
}

} // namespace aoi
