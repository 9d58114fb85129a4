#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "adap/error.hpp"
#include "commands.hpp"
#include "internal.hpp"

namespace adap::cli {
namespace {

using nlohmann::json;

Measure parse_measure(const std::string& s) {
    if (s == "euclidean") return Measure::Euclidean;
    if (s == "pearson") return Measure::Pearson;
    if (s == "precomputed") return Measure::Precomputed;
    throw Error(ErrorKind::Parse, "manifest: unknown similarity '" + s + "'");
}

struct Entry {
    std::string name;
    RunConfig config;
    std::string synth_blobs;
    unsigned long long synth_seed = 0;
    json expect;
};

std::vector<Entry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "manifest: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("manifest: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
        throw Error(ErrorKind::Parse, "manifest: expected an object with an 'entries' array");
    if (doc["entries"].empty()) throw Error(ErrorKind::Parse, "manifest: no entries");

    const auto base = std::filesystem::path(path).parent_path();
    std::vector<Entry> entries;
    try {
        for (const auto& e : doc["entries"]) {
            Entry entry;
            entry.name = e.value("name", "entry" + std::to_string(entries.size() + 1));
            auto& c = entry.config;
            c.measure = parse_measure(e.value("similarity", "euclidean"));
            c.header = e.value("header", false);
            if (e.contains("labels")) c.label_column = e["labels"].get<int>();
            c.standardize = e.value("standardize", false);
            c.jitter = e.value("jitter", false);
            c.seed = e.value("seed", 0ULL);
            if (e.contains("input")) {
                auto p = std::filesystem::path(e["input"].get<std::string>());
                c.input = (p.is_absolute() ? p : base / p).string();
            } else if (e.contains("synth")) {
                entry.synth_blobs = e["synth"].at("blobs").get<std::string>();
                entry.synth_seed = e["synth"].value("seed", 0ULL);
                c.header = true;
                c.label_column = -1;
            } else {
                throw Error(ErrorKind::Parse,
                            "manifest: entry '" + entry.name + "' needs 'input' or 'synth'");
            }
            entry.expect = e.value("expect", json::object());
            entries.push_back(std::move(entry));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("manifest: ") + e.what());
    }
    return entries;
}

std::string cell(const std::optional<double>& v, double scale = 1.0) {
    if (!v) return "/";
    std::ostringstream os;
    os << std::setprecision(6) << *v * scale;
    return os.str();
}

// Appends one line per violated expectation.
void check(const Entry& entry, const RunReport& ad, const RunReport& va,
           std::vector<std::string>& failures) {
    const auto& ex = entry.expect;
    auto fail = [&](const std::string& msg) { failures.push_back(entry.name + ": " + msg); };
    if (ex.contains("nc") && ex["nc"].get<std::size_t>() != ad.best.nc())
        fail("expected adaptive nc=" + std::to_string(ex["nc"].get<std::size_t>()) + ", got " +
             std::to_string(ad.best.nc()));
    if (ex.contains("nc_in")) {
        bool ok = false;
        for (const auto& v : ex["nc_in"]) ok = ok || v.get<std::size_t>() == ad.best.nc();
        if (!ok) fail("adaptive nc=" + std::to_string(ad.best.nc()) + " not in " + ex["nc_in"].dump());
    }
    if (ex.contains("min_fm")) {
        const double want = ex["min_fm"].get<double>();
        if (!ad.best_validity.fm || *ad.best_validity.fm < want)
            fail("expected adaptive FM >= " + cell(want) + ", got " + cell(ad.best_validity.fm));
    }
    if (ex.value("vanilla_nc_greater", false) && !(va.best.nc() > ad.best.nc()))
        fail("expected vanilla nc > adaptive nc, got " + std::to_string(va.best.nc()) +
             " vs " + std::to_string(ad.best.nc()));
    if (ex.value("fm_not_worse", false) &&
        !(ad.best_validity.fm && va.best_validity.fm && *ad.best_validity.fm >= *va.best_validity.fm))
        fail("expected adaptive FM >= vanilla FM, got " + cell(ad.best_validity.fm) + " vs " +
             cell(va.best_validity.fm));
    if (ex.contains("vanilla_converged") && ex["vanilla_converged"].get<bool>() != va.converged)
        fail(std::string("expected vanilla converged=") +
             (ex["vanilla_converged"].get<bool>() ? "true" : "false") + ", got " +
             (va.converged ? "true" : "false"));
}

}  // namespace

int cmd_bench(const std::string& suite_path, std::ostream& out, std::ostream& err) {
    std::vector<Entry> entries;
    try {
        entries = load_manifest(suite_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }

    out << std::left << std::setw(20) << "dataset" << std::right << std::setw(7) << "adNC"
        << std::setw(13) << "adErr%" << std::setw(13) << "adSil" << std::setw(13) << "adFM"
        << std::setw(13) << "adTime" << std::setw(6) << "osc" << std::setw(7) << "apNC"
        << std::setw(13) << "apFM" << std::setw(13) << "apTime" << "\n";

    std::vector<std::string> failures;
    bool errored = false;
    for (const auto& entry : entries) {
        try {
            Prepared prepared;
            if (!entry.synth_blobs.empty()) {
                std::istringstream src(synth_csv(parse_blobs(entry.synth_blobs), entry.synth_seed));
                prepared = prepare(entry.config, src);
            } else {
                prepared = prepare(entry.config);
            }
            RunConfig adaptive = entry.config;
            adaptive.mode = Mode::Adaptive;
            RunConfig vanilla = entry.config;
            vanilla.mode = Mode::Vanilla;

            auto timed = [&](const RunConfig& c) {
                const auto t0 = std::chrono::steady_clock::now();
                RunReport r = cluster(c, prepared, nullptr);
                r.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                return r;
            };
            const RunReport ad = timed(adaptive);
            const RunReport va = timed(vanilla);

            out << std::left << std::setw(20) << entry.name << std::right << std::setw(7)
                << ad.best.nc() << std::setw(13) << cell(ad.best_validity.error_rate, 100.0)
                << std::setw(13) << cell(ad.best_validity.sil) << std::setw(13)
                << cell(ad.best_validity.fm) << std::setw(13) << cell(ad.wall_seconds)
                << std::setw(6) << (ad.oscillation_events > 0 ? "yes" : "/") << std::setw(7)
                << va.best.nc() << std::setw(13) << cell(va.best_validity.fm) << std::setw(13)
                << cell(va.wall_seconds) << "\n";
            check(entry, ad, va, failures);
        } catch (const std::exception& e) {
            err << "error: " << entry.name << ": " << e.what() << "\n";
            errored = true;
        }
    }
    for (const auto& f : failures) out << "FAIL " << f << "\n";
    if (!failures.empty() || errored) return kExitBenchFailed;
    out << "all " << entries.size() << " entries passed\n";
    return kExitOk;
}

}  // namespace adap::cli
