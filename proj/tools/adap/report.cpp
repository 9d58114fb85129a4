#include <fstream>
#include <iostream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "adap/error.hpp"
#include "commands.hpp"
#include "internal.hpp"

namespace adap::cli {
namespace {

nlohmann::json opt(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string fmt6(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream os;
    os << std::setprecision(6) << *v;
    return os.str();
}

const char* mode_name(Mode m) { return m == Mode::Adaptive ? "adaptive" : "vanilla"; }

}  // namespace

nlohmann::json report_to_json(const RunReport& r) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : r.table)
        table.push_back({{"nc", row.nc},
                         {"p_used", row.p_used},
                         {"sil", opt(row.sil)},
                         {"fm", opt(row.fm)},
                         {"error", opt(row.error)}});
    return {
        {"mode", mode_name(r.mode)},
        {"n", r.n},
        {"pm", r.pm},
        {"table", table},
        {"best",
         {{"nc", r.best.nc()},
          {"p_used", r.best.p_used},
          {"exemplars", r.best.exemplars},
          {"labels", r.best.labels},
          {"sil", opt(r.best_validity.sil)},
          {"fm", opt(r.best_validity.fm)},
          {"error", opt(r.best_validity.error_rate)}}},
        {"diagnostics",
         {{"iterations", r.iterations},
          {"oscillation_events", r.oscillation_events},
          {"escape_events", r.escape_events},
          {"scan_steps", r.scan_steps},
          {"final_lam", r.final_lam},
          {"final_p", r.final_p},
          {"converged", r.converged},
          {"outcome", r.outcome}}},
        {"timing", {{"wall_seconds", r.wall_seconds}}},
    };
}

std::string report_to_csv(const RunReport& r) {
    std::ostringstream os;
    os << "nc,p_used,sil,fm,error,best\n";
    for (const auto& row : r.table)
        os << row.nc << ',' << fmt6(row.p_used) << ',' << fmt6(row.sil) << ',' << fmt6(row.fm)
           << ',' << fmt6(row.error) << ',' << (row.nc == r.best.nc() ? 1 : 0) << '\n';
    return os.str();
}

void print_table(const RunReport& r, std::ostream& out) {
    out << mode_name(r.mode) << " run: n=" << r.n << " pm=" << fmt6(r.pm)
        << " iterations=" << r.iterations << " outcome=" << r.outcome << "\n";
    out << std::setw(6) << "NC" << std::setw(14) << "p" << std::setw(12) << "Sil"
        << std::setw(12) << "FM" << std::setw(12) << "error" << "\n";
    for (const auto& row : r.table) {
        out << std::setw(6) << row.nc << std::setw(14) << fmt6(row.p_used) << std::setw(12)
            << fmt6(row.sil) << std::setw(12) << fmt6(row.fm) << std::setw(12) << fmt6(row.error)
            << (row.nc == r.best.nc() ? "  <- best" : "") << "\n";
    }
    out << "oscillation events=" << r.oscillation_events << " escapes=" << r.escape_events
        << " final lam=" << fmt6(r.final_lam) << " time=" << fmt6(r.wall_seconds) << "s\n";
}

void write_file(const std::string& path, const std::string& contents) {
    if (path == "-") {
        std::cout << contents;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Parse, "output: cannot open '" + path + "' for writing");
    f << contents;
}

std::string iteration_log_csv(const std::vector<IterationLog>& log) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "iter,k,lam,p,verdict,hdown\n";
    for (const auto& e : log)
        os << e.iteration << ',' << e.k << ',' << e.lam << ',' << e.p << ','
           << (e.verdict == Verdict::Oscillating ? "oscillating" : "calm") << ','
           << (e.hdown ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace adap::cli
