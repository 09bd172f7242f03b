#include "michelstat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <future>
#include <map>
#include <numeric>

#include <CLI11.hpp>

#include "michelstat/analyzer.hpp"
#include "michelstat/checkers.hpp"
#include "michelstat/interp.hpp"
#include "michelstat/log.hpp"
#include "michelstat/parser.hpp"
#include "michelstat/report.hpp"
#include "michelstat/typecheck.hpp"
#include "michelstat/value.hpp"

namespace michelstat {

namespace {

namespace fs = std::filesystem;
using clock_t_ = std::chrono::steady_clock;

struct analyze_opts {
    bool use_sym = true;
    bool multi_call = false;
    bool sender_split = false;
    bool arbitrary_storage = false;
    unsigned narrow = 0;
    std::string storage_lit;
    std::string max_amount;
    double timeout_s = 0.0;
};

long long ms_since(clock_t_::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(clock_t_::now() - t0)
        .count();
}

contract_report analyze_one(const std::string& file, const analyze_opts& ao) {
    auto t0 = clock_t_::now();
    contract_report rep;
    rep.contract = fs::path(file).filename().string();
    try {
        log_line(1, "analyzing " + file);
        typed_script ts = typecheck(parse_file(file));
        analyzer_options opt;
        opt.use_sym = ao.use_sym;
        opt.multi_call = ao.multi_call;
        opt.sender_split = ao.sender_split;
        opt.arbitrary_storage = ao.arbitrary_storage;
        opt.narrow_steps = ao.narrow;
        if (!ao.max_amount.empty()) opt.max_amount = big_int(ao.max_amount);
        if (!ao.storage_lit.empty())
            opt.initial_storage =
                value_of_literal(*parse_literal_string(ao.storage_lit), ts.sc.storage_ty);
        if (ao.timeout_s > 0)
            opt.deadline = clock_t_::now() + std::chrono::milliseconds(static_cast<long long>(
                                                 ao.timeout_s * 1000.0));
        analysis_result r = analyze(ts, opt);
        check_result c = run_checkers(ts, r);
        rep = make_report(rep.contract, r, c, ms_since(t0));
        log_line(1, rep.contract + ": " + rep.status + " in " +
                        std::to_string(rep.time_ms) + " ms");
    } catch (const std::exception& e) {
        rep.status = "error";
        rep.error = e.what();
        rep.time_ms = ms_since(t0);
    }
    return rep;
}

int do_analyze(const std::vector<std::string>& files, const analyze_opts& ao,
               const std::string& format, std::ostream& out) {
    std::vector<contract_report> reps;
    reps.reserve(files.size());
    for (const std::string& f : files) reps.push_back(analyze_one(f, ao));
    if (format == "json") {
        out << reports_json(reps) << "\n";
    } else {
        for (const auto& r : reps) write_text(out, r);
    }
    return exit_code_for(reps);
}

int do_exec(const std::string& file, const std::string& ep_name, const std::string& arg_lit,
            const std::string& storage_lit, const std::string& sender,
            const std::string& amount, std::ostream& out, std::ostream& err) {
    typed_script ts;
    cvalue_ptr arg, stv;
    call_context ctx;
    try {
        ts = typecheck(parse_file(file));
        const entrypoint* ep = find_entrypoint(ts, ep_name);
        if (!ep) {
            err << "unknown entry point: " << ep_name << "\n";
            return 2;
        }
        arg = value_of_literal(*parse_literal_string(arg_lit), ep->ty);
        stv = value_of_literal(*parse_literal_string(storage_lit), ts.sc.storage_ty);
        ctx.sender = sender;
        ctx.source = sender;
        ctx.self = "self";
        ctx.amount = big_int(amount);
        ctx.balance = ctx.amount;
        ctx.now = 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        contract_result res = run_contract(ts, ep_name, arg, stv, ctx);
        out << "storage: " << res.storage->to_string() << "\n";
        out << "operations (" << res.operations.size() << "):\n";
        for (const cvalue_ptr& op : res.operations) out << "  " << op->to_string() << "\n";
        return 0;
    } catch (const interp_failure& f) {
        out << "failed: " << f.to_string() << "\n";
        return 1;
    } catch (const interp_step_limit&) {
        err << "error: step limit exceeded\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int do_corpus(const std::string& dir, double timeout_s, std::ostream& out,
              std::ostream& err) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& de : fs::directory_iterator(dir, ec))
        if (de.path().extension() == ".tz") files.push_back(de.path());
    if (ec) {
        err << "error: cannot read directory " << dir << "\n";
        return 2;
    }
    if (files.empty()) {
        err << "error: no .tz contracts in " << dir << "\n";
        return 2;
    }
    std::sort(files.begin(), files.end());

    analyze_opts ao;
    ao.arbitrary_storage = true;
    ao.multi_call = true;
    ao.timeout_s = timeout_s;
    std::vector<std::future<contract_report>> futs;
    futs.reserve(files.size());
    for (const auto& f : files)
        futs.push_back(std::async(std::launch::async,
                                  [f, ao] { return analyze_one(f.string(), ao); }));
    std::vector<contract_report> reps;
    reps.reserve(futs.size());
    for (auto& fu : futs) reps.push_back(fu.get());

    size_t ok = 0, alarms = 0, errors = 0;
    std::map<std::string, size_t> by_cat;
    long long tmin = 0, tmax = 0, tsum = 0;
    for (size_t k = 0; k < reps.size(); ++k) {
        const contract_report& r = reps[k];
        out << r.contract << ": " << r.status << ", " << r.alarms.size() << " alarm(s), "
            << r.time_ms << " ms";
        if (r.multi_call && r.fixpoint_verified) out << ", fixpoint verified";
        out << "\n";
        if (r.status == "ok") ++ok;
        else if (r.status == "alarms") ++alarms;
        else ++errors;
        for (const alarm& a : r.alarms) ++by_cat[a.category];
        tmin = k == 0 ? r.time_ms : std::min(tmin, r.time_ms);
        tmax = std::max(tmax, r.time_ms);
        tsum += r.time_ms;
    }
    out << "contracts: " << reps.size() << " (ok " << ok << ", alarms " << alarms
        << ", errors " << errors << ")\n";
    if (!by_cat.empty()) {
        out << "alarms by category:";
        bool first = true;
        for (const auto& [cat, n] : by_cat) {
            out << (first ? " " : ", ") << cat << " " << n;
            first = false;
        }
        out << "\n";
    }
    out << "time ms: min " << tmin << ", max " << tmax << ", avg "
        << (tsum / static_cast<long long>(reps.size())) << "\n";
    return exit_code_for(reps);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"michelstat, a sound static analyzer for a Michelson subset"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    std::string domains = "intv+exp", format = "text", storage_lit, max_amount;
    analyze_opts ao;
    auto* an = app.add_subcommand("analyze", "infer storage invariants and report alarms");
    an->add_option("files", files, "contract files")->required()->expected(-1);
    an->add_option("--domains", domains, "abstract domains: intv or intv+exp")
        ->check(CLI::IsMember({"intv", "intv+exp"}));
    an->add_flag("--multi-call", ao.multi_call,
                 "iterate entry points to a fixpoint over unbounded call sequences");
    an->add_flag("--sender-split", ao.sender_split,
                 "partition address-to-mutez maps on the caller's key");
    an->add_flag("--arbitrary-storage", ao.arbitrary_storage,
                 "start from any well-typed storage instead of a concrete one");
    an->add_option("--storage", storage_lit, "initial storage literal");
    an->add_option("--narrow", ao.narrow, "narrowing passes after widening");
    an->add_option("--max-amount", max_amount, "upper bound on AMOUNT in mutez");
    an->add_option("--timeout", ao.timeout_s, "seconds per contract");
    an->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    std::string xfile, xep = "default", xarg, xstorage, xsender = "caller", xamount = "0";
    auto* ex = app.add_subcommand("exec", "run one call on the reference interpreter");
    ex->add_option("file", xfile, "contract file")->required();
    ex->add_option("--entrypoint", xep, "entry point name");
    ex->add_option("--arg", xarg, "argument literal")->required();
    ex->add_option("--storage", xstorage, "storage literal")->required();
    ex->add_option("--sender", xsender, "caller address");
    ex->add_option("--amount", xamount, "attached mutez");

    std::string cdir;
    double ctimeout = 0.0;
    auto* co = app.add_subcommand("corpus", "analyze every .tz contract in a directory");
    co->add_option("dir", cdir, "corpus directory")->required();
    co->add_option("--timeout", ctimeout, "seconds per contract");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (an->parsed()) {
        ao.storage_lit = storage_lit;
        ao.max_amount = max_amount;
        ao.use_sym = domains == "intv+exp";
        return do_analyze(files, ao, format, out);
    }
    if (ex->parsed()) return do_exec(xfile, xep, xarg, xstorage, xsender, xamount, out, err);
    return do_corpus(cdir, ctimeout, out, err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("michelstat");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace michelstat
