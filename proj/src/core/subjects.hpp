#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core/rng.hpp"
#include "core/state.hpp"

namespace aoi {

struct ParamSpec {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    bool integral = false;
};

// Executes one implementation over the state frame. The frame is aligned to
// the subject signature: old_-prefixed parameter copies, then the parameters,
// then the locals (pre-initialized to 0). The body reads parameters from the
// frame and writes parameters and locals as of the assertion point. Returns
// true if the execution faulted (the frame then holds values as of the
// fault).
using BodyFn = std::function<bool(std::span<double>)>;

struct Mutant {
    std::string id;
    BodyFn body;
};

// A program under analysis: reference implementation, seeded-fault variants,
// parameter ranges for the input sampler, and the default initial assertion.
class Subject {
public:
    Subject(std::string name, std::vector<ParamSpec> params, std::vector<std::string> locals,
            std::string initial_assertion, BodyFn reference, std::vector<Mutant> mutants);

    const std::string& name() const { return name_; }
    const std::vector<ParamSpec>& params() const { return params_; }
    const VarSignature& signature() const { return signature_; }
    const std::string& initial_assertion() const { return initial_assertion_; }
    const BodyFn& reference() const { return reference_; }
    const std::vector<Mutant>& mutants() const { return mutants_; }
    std::vector<std::string> mutant_ids() const;

    // Copy restricted to the given mutants (registration order preserved).
    Subject with_mutants(std::span<const std::string> ids) const;

private:
    std::string name_;
    std::vector<ParamSpec> params_;
    std::vector<std::string> locals_;
    VarSignature signature_;
    std::string initial_assertion_;
    BodyFn reference_;
    std::vector<Mutant> mutants_;
};

struct CapturedState {
    std::vector<Value> values; // aligned to the subject signature, rounded
    bool faulted = false;
};

struct CapturedRun {
    std::string fingerprint;
    CapturedState reference;
    std::vector<std::pair<std::string, CapturedState>> mutants;
};

const std::vector<Subject>& builtin_subjects();
const Subject* find_subject(std::string_view name); // nullptr if absent
nlohmann::ordered_json subjects_json();

std::string input_fingerprint(const Subject& subject, std::span<const double> input);

// Boundary-enriched sampling over the declared ranges: uniform draws mixed
// with 0, +-1, range endpoints, and integral points. Deterministic under the
// generator state.
std::vector<double> sample_input(const Subject& subject, Rng& rng);
std::vector<std::vector<double>> sample_inputs(const Subject& subject, int n, Rng& rng);

// Reference state only; throws std::logic_error if the reference faults.
CapturedState run_reference(const Subject& subject, std::span<const double> input, int precision);

// Reference plus one state per mutant.
CapturedRun run_and_capture(const Subject& subject, std::span<const double> input, int precision);

// Correct states of n sampled inputs; incorrect states are the mutant states
// that differ from the corresponding correct state in at least one variable.
StateRepo init_repo(const Subject& subject, int n, Rng& rng, int precision = 9);

} // namespace aoi
