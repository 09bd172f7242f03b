#include "michelstat/report.hpp"

#include <json.hpp>

namespace michelstat {

namespace {

using njson = nlohmann::ordered_json;

njson to_json_obj(const contract_report& rep) {
    njson j;
    j["contract"] = rep.contract;
    j["status"] = rep.status;
    njson alarms = njson::array();
    for (const alarm& a : rep.alarms) {
        njson ja;
        ja["category"] = a.category;
        ja["line"] = a.where.line;
        ja["col"] = a.where.col;
        ja["entrypoint"] = a.entrypoint;
        ja["detail"] = a.detail;
        alarms.push_back(std::move(ja));
    }
    j["alarms"] = std::move(alarms);
    njson verdicts = njson::array();
    for (const verdict& v : rep.verdicts) {
        njson jv;
        jv["property"] = v.property;
        jv["status"] = v.status;
        verdicts.push_back(std::move(jv));
    }
    j["verdicts"] = std::move(verdicts);
    std::string inv = rep.invariant;
    for (size_t p = inv.find('\n'); p != std::string::npos; p = inv.find('\n', p))
        inv.replace(p, 1, "; ");
    j["invariant"] = inv;
    j["time_ms"] = rep.time_ms;
    return j;
}

} // namespace

contract_report make_report(const std::string& name, const analysis_result& r,
                            const check_result& c, long long time_ms) {
    contract_report rep;
    rep.contract = name;
    rep.status = r.timed_out ? "timeout" : c.alarms.empty() ? "ok" : "alarms";
    rep.alarms = c.alarms;
    rep.verdicts = c.verdicts;
    rep.invariant = r.render_invariant();
    rep.multi_call = r.multi_call;
    rep.fixpoint_verified = r.fixpoint_verified;
    rep.rounds = r.rounds;
    rep.time_ms = time_ms;
    return rep;
}

void write_text(std::ostream& out, const contract_report& rep) {
    out << "== " << rep.contract << " ==\n";
    out << "status: " << rep.status << "\n";
    if (!rep.error.empty()) {
        out << "error: " << rep.error << "\n";
        return;
    }
    out << "invariant:\n";
    std::string inv = rep.invariant.empty() ? std::string("storage unconstrained")
                                            : rep.invariant;
    size_t start = 0;
    while (start <= inv.size()) {
        size_t nl = inv.find('\n', start);
        std::string line = inv.substr(start, nl == std::string::npos ? nl : nl - start);
        if (!line.empty()) out << "  " << line << "\n";
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    if (!rep.alarms.empty()) {
        out << "alarms (" << rep.alarms.size() << "):\n";
        for (const alarm& a : rep.alarms)
            out << "  " << a.category << " at " << a.where.line << ":" << a.where.col
                << " [" << a.entrypoint << "] " << a.detail << "\n";
    }
    for (const verdict& v : rep.verdicts) {
        out << "verdict: " << v.property << ": " << v.status;
        if (!v.note.empty()) out << " (" << v.note << ")";
        out << "\n";
    }
    out << "time: " << rep.time_ms << " ms";
    if (rep.multi_call) {
        out << ", " << rep.rounds << " round(s)";
        if (rep.fixpoint_verified) out << ", fixpoint verified";
    }
    out << "\n";
}

std::string report_json(const contract_report& rep) { return to_json_obj(rep).dump(2); }

std::string reports_json(const std::vector<contract_report>& reps) {
    if (reps.size() == 1) return report_json(reps[0]);
    njson arr = njson::array();
    for (const auto& r : reps) arr.push_back(to_json_obj(r));
    return arr.dump(2);
}

int exit_code_for(const std::vector<contract_report>& reps) {
    int code = 0;
    for (const auto& r : reps) {
        if (r.status == "error" || r.status == "timeout") return 2;
        if (r.status == "alarms") code = std::max(code, 1);
    }
    return code;
}

} // namespace michelstat
