#include "core/deficiency.hpp"

namespace aoi {

std::vector<FoundState> find_false_positives(const Subject& subject, const Expr& e,
                                             const DeficiencyConfig& cfg, Rng& rng) {
    std::vector<FoundState> out;
    for (long i = 0; i < cfg.input_budget; ++i) {
        if (static_cast<int>(out.size()) >= cfg.max_findings) break;
        std::vector<double> input = sample_input(subject, rng);
        CapturedState st = run_reference(subject, input, cfg.precision);
        auto r = evaluate(e, st.values, cfg.precision);
        if (!r || !*r)
            out.push_back({st.values, input_fingerprint(subject, input), "", false});
    }
    return out;
}

std::vector<FoundState> find_false_negatives(const Subject& subject, const Expr& e,
                                             const DeficiencyConfig& cfg, Rng& rng) {
    std::vector<FoundState> out;
    const auto used = referenced_vars(e);
    for (long i = 0; i < cfg.input_budget; ++i) {
        if (static_cast<int>(out.size()) >= cfg.max_findings) break;
        std::vector<double> input = sample_input(subject, rng);
        CapturedRun run = run_and_capture(subject, input, cfg.precision);
        for (const auto& [id, st] : run.mutants) {
            if (static_cast<int>(out.size()) >= cfg.max_findings) break;
            bool touched = false;
            for (int idx : used) {
                if (st.values[static_cast<std::size_t>(idx)] !=
                    run.reference.values[static_cast<std::size_t>(idx)]) {
                    touched = true;
                    break;
                }
            }
            if (!touched) continue;
            auto r = evaluate(e, st.values, cfg.precision);
            if (r && *r)
                out.push_back({st.values, run.fingerprint, id, st.faulted});
        }
    }
    return out;
}

DeficiencyReport check_assertion(const Subject& subject, const Expr& e,
                                 const DeficiencyConfig& cfg, Rng& rng) {
    Rng fp_rng = rng.derive(1);
    Rng fn_rng = rng.derive(2);
    DeficiencyReport report;
    report.fp_states = find_false_positives(subject, e, cfg, fp_rng);
    report.fn_states = find_false_negatives(subject, e, cfg, fn_rng);
    report.inputs_examined = 2 * cfg.input_budget;
    report.exhausted = report.fp_states.empty() && report.fn_states.empty();
    return report;
}

nlohmann::ordered_json report_to_json(const DeficiencyReport& report, const VarSignature& sig) {
    auto states = [&](const std::vector<FoundState>& list) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& s : list) {
            nlohmann::ordered_json vars = nlohmann::ordered_json::object();
            for (int i = 0; i < sig.size(); ++i) {
                const auto& v = s.values[static_cast<std::size_t>(i)];
                if (value_type(v) == Type::Boolean) vars[sig.at(i).name] = std::get<bool>(v);
                else vars[sig.at(i).name] = std::get<double>(v);
            }
            nlohmann::ordered_json item;
            item["vars"] = std::move(vars);
            item["input"] = s.input;
            if (!s.mutant.empty()) item["mutant"] = s.mutant;
            if (s.faulted) item["faulted"] = true;
            arr.push_back(std::move(item));
        }
        return arr;
    };
    nlohmann::ordered_json j;
    j["fp_states"] = states(report.fp_states);
    j["fn_states"] = states(report.fn_states);
    j["inputs_examined"] = report.inputs_examined;
    j["exhausted"] = report.exhausted;
    return j;
}

} // namespace aoi
