#include "core/subjects.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"

namespace aoi {

Subject::Subject(std::string name, std::vector<ParamSpec> params, std::vector<std::string> locals,
                 std::string initial_assertion, BodyFn reference, std::vector<Mutant> mutants)
    : name_(std::move(name)),
      params_(std::move(params)),
      locals_(std::move(locals)),
      initial_assertion_(std::move(initial_assertion)),
      reference_(std::move(reference)),
      mutants_(std::move(mutants)) {
    std::vector<VarDecl> decls;
    for (const auto& p : params_) decls.push_back({"old_" + p.name, Type::Number});
    for (const auto& p : params_) decls.push_back({p.name, Type::Number});
    for (const auto& l : locals_) decls.push_back({l, Type::Number});
    signature_ = VarSignature(std::move(decls));
}

std::vector<std::string> Subject::mutant_ids() const {
    std::vector<std::string> ids;
    for (const auto& m : mutants_) ids.push_back(m.id);
    return ids;
}

Subject Subject::with_mutants(std::span<const std::string> ids) const {
    Subject copy = *this;
    copy.mutants_.clear();
    for (const auto& m : mutants_)
        if (std::find(ids.begin(), ids.end(), m.id) != ids.end()) copy.mutants_.push_back(m);
    if (copy.mutants_.size() != ids.size())
        throw std::invalid_argument("with_mutants: unknown mutant id for subject '" + name_ + "'");
    return copy;
}

// --- built-in subjects ---
//
// Frame layout per subject: old_<p>... , <p>... , locals... (result last).
// Indexes below are written against that layout.

namespace {

std::vector<Subject> build_subjects() {
    std::vector<Subject> out;

    // fast_floor: truncation-based floor with a correction branch for
    // negative non-integral inputs. Frame: [old_x, x, y, result].
    {
        BodyFn ref = [](std::span<double> v) {
            double x = v[1];
            double y = std::trunc(x);
            if (x < 0 && y != x) y -= 1;
            v[2] = y;
            v[3] = y;
            return false;
        };
        std::vector<Mutant> mutants;
        mutants.push_back({"M1", [](std::span<double> v) { // cast result off by one
                               double x = v[1];
                               double y = std::trunc(x) - 1;
                               if (x < 0 && y != x) y -= 1;
                               v[2] = y;
                               v[3] = y;
                               return false;
                           }});
        mutants.push_back({"M2", [](std::span<double> v) { // correction guard inverted
                               double x = v[1];
                               double y = std::trunc(x);
                               if (x > 0 && y != x) y -= 1;
                               v[2] = y;
                               v[3] = y;
                               return false;
                           }});
        mutants.push_back({"M3", [](std::span<double> v) { // correction sign flipped
                               double x = v[1];
                               double y = std::trunc(x);
                               if (x < 0 && y != x) y += 1;
                               v[2] = y;
                               v[3] = y;
                               return false;
                           }});
        mutants.push_back({"M4", [](std::span<double> v) { // result off by one
                               double x = v[1];
                               double y = std::trunc(x);
                               if (x < 0 && y != x) y -= 1;
                               v[2] = y;
                               v[3] = y + 1;
                               return false;
                           }});
        mutants.push_back({"M5", [](std::span<double> v) { // correction guard weakened
                               double x = v[1];
                               double y = std::trunc(x);
                               if (x < 0) y -= 1;
                               v[2] = y;
                               v[3] = y;
                               return false;
                           }});
        mutants.push_back({"M6", [](std::span<double> v) { // cast result plus one
                               double x = v[1];
                               double y = std::trunc(x) + 1;
                               if (x < 0 && y != x) y -= 1;
                               v[2] = y;
                               v[3] = y;
                               return false;
                           }});
        out.emplace_back("fast_floor", std::vector<ParamSpec>{{"x", -100.0, 100.0}},
                         std::vector<std::string>{"y", "result"},
                         "(y == result) && (x > result)", ref, std::move(mutants));
    }

    // abs: absolute value. Frame: [old_x, x, result].
    {
        BodyFn ref = [](std::span<double> v) {
            double x = v[1];
            v[2] = x < 0 ? -x : x;
            return false;
        };
        std::vector<Mutant> mutants;
        mutants.push_back({"M1", [](std::span<double> v) { v[2] = v[1]; return false; }});
        mutants.push_back({"M2", [](std::span<double> v) { v[2] = -v[1]; return false; }});
        mutants.push_back({"M3", [](std::span<double> v) {
                               double x = v[1];
                               v[2] = (x < 0 ? -x : x) + 1;
                               return false;
                           }});
        mutants.push_back({"M4", [](std::span<double> v) {
                               double x = v[1];
                               v[2] = x < 0 ? x : -x;
                               return false;
                           }});
        mutants.push_back({"M5", [](std::span<double> v) {
                               double x = v[1];
                               v[2] = x * x;
                               return false;
                           }});
        mutants.push_back({"M6", [](std::span<double> v) { // threshold constant corrupted
                               double x = v[1];
                               v[2] = x < 10 ? -x : x;
                               return false;
                           }});
        out.emplace_back("abs", std::vector<ParamSpec>{{"x", -100.0, 100.0}},
                         std::vector<std::string>{"result"}, "(result >= 0)", ref,
                         std::move(mutants));
    }

    // max3: maximum of three via a pairwise local. Frame:
    // [old_x, old_y, old_z, x, y, z, m, result].
    {
        BodyFn ref = [](std::span<double> v) {
            double x = v[3], y = v[4], z = v[5];
            double m = x > y ? x : y;
            v[6] = m;
            v[7] = m > z ? m : z;
            return false;
        };
        std::vector<Mutant> mutants;
        mutants.push_back({"M1", [](std::span<double> v) { // first comparison flipped
                               double x = v[3], y = v[4], z = v[5];
                               double m = x > y ? y : x;
                               v[6] = m;
                               v[7] = m > z ? m : z;
                               return false;
                           }});
        mutants.push_back({"M2", [](std::span<double> v) { // second comparison flipped
                               double x = v[3], y = v[4], z = v[5];
                               double m = x > y ? x : y;
                               v[6] = m;
                               v[7] = m > z ? z : m;
                               return false;
                           }});
        mutants.push_back({"M3", [](std::span<double> v) { // z ignored
                               double x = v[3], y = v[4];
                               double m = x > y ? x : y;
                               v[6] = m;
                               v[7] = m;
                               return false;
                           }});
        mutants.push_back({"M4", [](std::span<double> v) { // y ignored
                               double x = v[3], z = v[5];
                               double m = x;
                               v[6] = m;
                               v[7] = m > z ? m : z;
                               return false;
                           }});
        mutants.push_back({"M5", [](std::span<double> v) { // result off by one
                               double x = v[3], y = v[4], z = v[5];
                               double m = x > y ? x : y;
                               v[6] = m;
                               v[7] = (m > z ? m : z) + 1;
                               return false;
                           }});
        mutants.push_back({"M6", [](std::span<double> v) { // m dropped from result
                               double x = v[3], y = v[4], z = v[5];
                               double m = x > y ? x : y;
                               v[6] = m;
                               v[7] = y > z ? y : z;
                               return false;
                           }});
        out.emplace_back("max3",
                         std::vector<ParamSpec>{{"x", -50.0, 50.0}, {"y", -50.0, 50.0},
                                                {"z", -50.0, 50.0}},
                         std::vector<std::string>{"m", "result"},
                         "(result >= x) && (result >= z)", ref, std::move(mutants));
    }

    // clamp: clamps x into [lo, hi]; ranges keep lo <= hi. Frame:
    // [old_x, old_lo, old_hi, x, lo, hi, result].
    {
        BodyFn ref = [](std::span<double> v) {
            double x = v[3], lo = v[4], hi = v[5];
            v[6] = x < lo ? lo : (x > hi ? hi : x);
            return false;
        };
        std::vector<Mutant> mutants;
        mutants.push_back({"M1", [](std::span<double> v) { // wrong bound below
                               double x = v[3], lo = v[4], hi = v[5];
                               v[6] = x < lo ? hi : (x > hi ? hi : x);
                               return false;
                           }});
        mutants.push_back({"M2", [](std::span<double> v) { // wrong bound above
                               double x = v[3], lo = v[4], hi = v[5];
                               v[6] = x < lo ? lo : (x > hi ? lo : x);
                               return false;
                           }});
        mutants.push_back({"M3", [](std::span<double> v) { // clamping dropped
                               v[6] = v[3];
                               return false;
                           }});
        mutants.push_back({"M4", [](std::span<double> v) { // upper comparison flipped
                               double x = v[3], lo = v[4], hi = v[5];
                               v[6] = x < lo ? lo : (x < hi ? hi : x);
                               return false;
                           }});
        mutants.push_back({"M5", [](std::span<double> v) { // lower comparison flipped
                               double x = v[3], lo = v[4], hi = v[5];
                               v[6] = x > lo ? lo : (x > hi ? hi : x);
                               return false;
                           }});
        mutants.push_back({"M6", [](std::span<double> v) { // lower bound off by one
                               double x = v[3], lo = v[4], hi = v[5];
                               v[6] = x < lo ? lo + 1 : (x > hi ? hi : x);
                               return false;
                           }});
        out.emplace_back("clamp",
                         std::vector<ParamSpec>{{"x", -100.0, 100.0}, {"lo", -50.0, 0.0},
                                                {"hi", 0.0, 50.0}},
                         std::vector<std::string>{"result"}, "(result >= lo)", ref,
                         std::move(mutants));
    }

    // midpoint: a + (b - a) / 2. Frame: [old_a, old_b, a, b, half, result].
    {
        BodyFn ref = [](std::span<double> v) {
            double a = v[2], b = v[3];
            double half = (b - a) / 2;
            v[4] = half;
            v[5] = a + half;
            return false;
        };
        std::vector<Mutant> mutants;
        mutants.push_back({"M1", [](std::span<double> v) { // difference became a sum
                               double a = v[2], b = v[3];
                               double half = (b + a) / 2;
                               v[4] = half;
                               v[5] = a + half;
                               return false;
                           }});
        mutants.push_back({"M2", [](std::span<double> v) { // offset subtracted
                               double a = v[2], b = v[3];
                               double half = (b - a) / 2;
                               v[4] = half;
                               v[5] = a - half;
                               return false;
                           }});
        mutants.push_back({"M3", [](std::span<double> v) { // halving became doubling
                               double a = v[2], b = v[3];
                               double half = (b - a) * 2;
                               v[4] = half;
                               v[5] = a + half;
                               return false;
                           }});
        mutants.push_back({"M4", [](std::span<double> v) { // offset from the wrong end
                               double a = v[2], b = v[3];
                               double half = (b - a) / 2;
                               v[4] = half;
                               v[5] = b + half;
                               return false;
                           }});
        mutants.push_back({"M5", [](std::span<double> v) { // divisor corrupted
                               double a = v[2], b = v[3];
                               double half = (b - a) / 3;
                               v[4] = half;
                               v[5] = a + half;
                               return false;
                           }});
        mutants.push_back({"M6", [](std::span<double> v) { // base term dropped
                               double a = v[2], b = v[3];
                               double half = (b - a) / 2;
                               v[4] = half;
                               v[5] = half;
                               return false;
                           }});
        out.emplace_back("midpoint",
                         std::vector<ParamSpec>{{"a", -100.0, 100.0}, {"b", -100.0, 100.0}},
                         std::vector<std::string>{"half", "result"},
                         "(result >= a) || (result >= b)", ref, std::move(mutants));
    }

    // gcd: Euclid on non-negative integers; a and b hold the loop state at
    // the assertion point. Frame: [old_a, old_b, a, b, result].
    {
        constexpr int kLoopCap = 64;
        BodyFn ref = [](std::span<double> v) {
            double a = v[2], b = v[3];
            for (int i = 0; b != 0; ++i) {
                if (i >= kLoopCap) { v[2] = a; v[3] = b; return true; }
                double t = std::fmod(a, b);
                a = b;
                b = t;
            }
            v[2] = a;
            v[3] = b;
            v[4] = a;
            return false;
        };
        std::vector<Mutant> mutants;
        mutants.push_back({"M1", [](std::span<double> v) { // loop exits one step early
                               double a = v[2], b = v[3];
                               for (int i = 0; b > 1; ++i) {
                                   if (i >= kLoopCap) { v[2] = a; v[3] = b; return true; }
                                   double t = std::fmod(a, b);
                                   a = b;
                                   b = t;
                               }
                               v[2] = a;
                               v[3] = b;
                               v[4] = a;
                               return false;
                           }});
        mutants.push_back({"M2", [](std::span<double> v) { // operands swapped in the remainder
                               double a = v[2], b = v[3];
                               for (int i = 0; b != 0; ++i) {
                                   if (i >= kLoopCap || a == 0) { v[2] = a; v[3] = b; return true; }
                                   double t = std::fmod(b, a);
                                   a = b;
                                   b = t;
                               }
                               v[2] = a;
                               v[3] = b;
                               v[4] = a;
                               return false;
                           }});
        mutants.push_back({"M3", [](std::span<double> v) { // update order swapped
                               double a = v[2], b = v[3];
                               for (int i = 0; b != 0; ++i) {
                                   if (i >= kLoopCap) { v[2] = a; v[3] = b; return true; }
                                   double t = std::fmod(a, b);
                                   b = t;
                                   a = b;
                               }
                               v[2] = a;
                               v[3] = b;
                               v[4] = a;
                               return false;
                           }});
        mutants.push_back({"M4", [](std::span<double> v) { // wrong variable returned
                               double a = v[2], b = v[3];
                               for (int i = 0; b != 0; ++i) {
                                   if (i >= kLoopCap) { v[2] = a; v[3] = b; return true; }
                                   double t = std::fmod(a, b);
                                   a = b;
                                   b = t;
                               }
                               v[2] = a;
                               v[3] = b;
                               v[4] = b;
                               return false;
                           }});
        mutants.push_back({"M5", [](std::span<double> v) { // remainder off by one; may cycle
                               double a = v[2], b = v[3];
                               for (int i = 0; b != 0; ++i) {
                                   if (i >= kLoopCap) { v[2] = a; v[3] = b; return true; }
                                   double t = std::fmod(a, b) + 1;
                                   a = b;
                                   b = t;
                               }
                               v[2] = a;
                               v[3] = b;
                               v[4] = a;
                               return false;
                           }});
        mutants.push_back({"M6", [](std::span<double> v) { // loop guard on the wrong variable
                               double a = v[2], b = v[3];
                               for (int i = 0; a != 0; ++i) {
                                   if (i >= kLoopCap || b == 0) { v[2] = a; v[3] = b; return true; }
                                   double t = std::fmod(a, b);
                                   a = b;
                                   b = t;
                               }
                               v[2] = a;
                               v[3] = b;
                               v[4] = a;
                               return false;
                           }});
        out.emplace_back("gcd",
                         std::vector<ParamSpec>{{"a", 0.0, 100.0, true}, {"b", 0.0, 100.0, true}},
                         std::vector<std::string>{"result"}, "(result >= 0)", ref,
                         std::move(mutants));
    }

    return out;
}

} // namespace

const std::vector<Subject>& builtin_subjects() {
    static const std::vector<Subject> subjects = build_subjects();
    return subjects;
}

const Subject* find_subject(std::string_view name) {
    for (const auto& s : builtin_subjects())
        if (s.name() == name) return &s;
    return nullptr;
}

nlohmann::ordered_json subjects_json() {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& s : builtin_subjects()) {
        nlohmann::ordered_json params = nlohmann::ordered_json::array();
        for (const auto& p : s.params())
            params.push_back({{"name", p.name}, {"min", p.min}, {"max", p.max},
                              {"integral", p.integral}});
        nlohmann::ordered_json sig = nlohmann::ordered_json::array();
        for (const auto& v : s.signature().vars())
            sig.push_back({{"name", v.name}, {"type", type_name(v.type)}});
        out.push_back({{"name", s.name()},
                       {"params", std::move(params)},
                       {"signature", std::move(sig)},
                       {"mutants", s.mutant_ids()},
                       {"initial_assertion", s.initial_assertion()}});
    }
    return out;
}

std::string input_fingerprint(const Subject& subject, std::span<const double> input) {
    std::string fp;
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (i > 0) fp += ",";
        fp += subject.params()[i].name;
        fp += "=";
        fp += number_text(input[i]);
    }
    return fp;
}

namespace {

double sample_param(const ParamSpec& p, Rng& rng) {
    double v;
    if (rng.chance(0.35)) {
        double pool[8];
        int n = 0;
        for (double c : {0.0, 1.0, -1.0, p.min, p.max})
            if (c >= p.min && c <= p.max) pool[n++] = c;
        pool[n++] = std::round(rng.uniform(p.min, p.max)); // integral point
        v = pool[rng.uniform_int(n)];
    } else {
        v = rng.uniform(p.min, p.max);
    }
    if (p.integral) v = std::round(v);
    return std::clamp(v, p.min, p.max);
}

CapturedState capture_body(const Subject& subject, const BodyFn& body,
                           std::span<const double> input, int precision) {
    const auto& sig = subject.signature();
    const std::size_t k = subject.params().size();
    std::vector<double> frame(static_cast<std::size_t>(sig.size()), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        frame[i] = input[i];     // old_<p>
        frame[k + i] = input[i]; // <p>
    }
    CapturedState st;
    st.faulted = body(frame);
    st.values.reserve(frame.size());
    for (double d : frame) st.values.emplace_back(round_value(d, precision));
    return st;
}

} // namespace

std::vector<double> sample_input(const Subject& subject, Rng& rng) {
    std::vector<double> input;
    input.reserve(subject.params().size());
    for (const auto& p : subject.params()) input.push_back(sample_param(p, rng));
    return input;
}

std::vector<std::vector<double>> sample_inputs(const Subject& subject, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_inputs: sample count must be >= 1");
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(sample_input(subject, rng));
    return out;
}

CapturedState run_reference(const Subject& subject, std::span<const double> input, int precision) {
    CapturedState st = capture_body(subject, subject.reference(), input, precision);
    if (st.faulted)
        throw std::logic_error("reference execution faulted for subject '" + subject.name() + "'");
    return st;
}

CapturedRun run_and_capture(const Subject& subject, std::span<const double> input, int precision) {
    CapturedRun run;
    run.fingerprint = input_fingerprint(subject, input);
    run.reference = run_reference(subject, input, precision);
    run.mutants.reserve(subject.mutants().size());
    for (const auto& m : subject.mutants())
        run.mutants.emplace_back(m.id, capture_body(subject, m.body, input, precision));
    return run;
}

StateRepo init_repo(const Subject& subject, int n, Rng& rng, int precision) {
    if (n < 1) throw std::invalid_argument("init_repo: sample count must be >= 1");
    StateRepo repo(subject.signature(), precision);
    for (const auto& input : sample_inputs(subject, n, rng)) {
        auto run = run_and_capture(subject, input, precision);
        repo.ingest(run.reference.values, StateMeta{Origin::InitTest, run.fingerprint, "", false},
                    true);
        for (const auto& [id, st] : run.mutants) {
            if (st.values == run.reference.values) continue; // not incorrect on this input
            repo.ingest(st.values, StateMeta{Origin::InitTest, run.fingerprint, id, st.faulted},
                        false);
        }
    }
    return repo;
}

} // namespace aoi
