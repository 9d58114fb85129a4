#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "adap/error.hpp"
#include "commands.hpp"
#include "internal.hpp"

namespace adap::cli {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
        throw Error(ErrorKind::Parse, "blob spec: invalid " + what + " '" + s + "'");
    return v;
}

}  // namespace

std::vector<BlobSpec> parse_blobs(const std::string& spec) {
    std::vector<BlobSpec> blobs;
    for (const auto& entry : split(spec, ';')) {
        if (entry.empty()) continue;
        const auto parts = split(entry, ':');
        if (parts.size() != 3)
            throw Error(ErrorKind::Parse,
                        "blob spec: expected 'center:sigma:count', got '" + entry + "'");
        BlobSpec b;
        for (const auto& c : split(parts[0], ',')) b.center.push_back(to_double(c, "center"));
        b.sigma = to_double(parts[1], "sigma");
        const double count = to_double(parts[2], "count");
        if (b.center.empty()) throw Error(ErrorKind::Parse, "blob spec: empty center");
        if (b.sigma < 0.0) throw Error(ErrorKind::Parse, "blob spec: negative sigma");
        if (count < 1.0 || count != std::floor(count))
            throw Error(ErrorKind::Parse, "blob spec: count must be a positive integer");
        b.count = static_cast<std::size_t>(count);
        if (!blobs.empty() && b.center.size() != blobs.front().center.size())
            throw Error(ErrorKind::Parse, "blob spec: centers differ in dimension");
        blobs.push_back(std::move(b));
    }
    if (blobs.empty()) throw Error(ErrorKind::Parse, "blob spec: no blobs given");
    return blobs;
}

std::string synth_csv(const std::vector<BlobSpec>& blobs, unsigned long long seed) {
    if (blobs.empty()) throw Error(ErrorKind::Parse, "blob spec: no blobs given");
    const std::size_t d = blobs.front().center.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t l = 0; l < d; ++l) os << 'x' << l + 1 << ',';
    os << "label\n";
    for (std::size_t c = 0; c < blobs.size(); ++c) {
        const auto& b = blobs[c];
        for (std::size_t i = 0; i < b.count; ++i) {
            for (std::size_t l = 0; l < d; ++l) {
                const double noise = gauss(rng);
                os << (b.sigma > 0.0 ? b.center[l] + b.sigma * noise : b.center[l]) << ',';
            }
            os << c << '\n';
        }
    }
    return os.str();
}

int cmd_synth(const std::string& blobs, unsigned long long seed, const std::string& out,
              std::ostream& err) {
    try {
        write_file(out, synth_csv(parse_blobs(blobs), seed));
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace adap::cli
