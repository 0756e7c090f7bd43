#include <kmob/core/trace_io.hpp>

#include <kmob/core/error.hpp>
#include <kmob/io/json_points.hpp>

#include <json.hpp>

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

namespace kmob {

using nlohmann::json;

namespace {

ProblemParams parse_header(const json& h) {
    ProblemParams p;
    try {
        p.dim = h.at("dim").get<int>();
        p.k = h.at("k").get<int>();
        p.ms = h.at("ms").get<double>();
        p.mc = h.at("mc").get<double>();
        p.delta = h.value("delta", 0.0);
        p.D = h.value("D", 1.0);
    } catch (const json::exception& e) {
        throw InputError(std::string("trace header: ") + e.what());
    }
    p.validate();
    return p;
}

} // namespace

TraceFile read_trace(std::istream& in) {
    TraceFile out;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::map<long long, Point> requests;
    std::map<long long, Configuration> certificate;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw InputError("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.is_object()) throw InputError("trace line " + std::to_string(lineno) + ": not an object");
        try {
            if (!have_header) {
                out.params = parse_header(j);
                out.trace.start = io::config_from_json(j.at("start"), out.params.dim);
                have_header = true;
                continue;
            }
            const long long t = j.at("t").get<long long>();
            if (t < 1) throw InputError("step index must be >= 1");
            if (j.contains("r")) {
                if (!requests.emplace(t, io::point_from_json(j.at("r"), out.params.dim)).second) {
                    throw InputError("duplicate request for step " + std::to_string(t));
                }
            } else if (j.contains("o")) {
                if (!certificate.emplace(t, io::config_from_json(j.at("o"), out.params.dim)).second) {
                    throw InputError("duplicate certificate for step " + std::to_string(t));
                }
            } else {
                throw InputError("line has neither \"r\" nor \"o\"");
            }
        } catch (const json::exception& e) {
            throw InputError("trace line " + std::to_string(lineno) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("trace line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_header) throw InputError("trace file is empty");

    long long expect = 1;
    for (auto& [t, r] : requests) {
        if (t != expect++) throw InputError("request steps are not contiguous from 1");
        out.trace.requests.push_back(std::move(r));
    }
    if (!certificate.empty()) {
        std::vector<Configuration> cert;
        expect = 1;
        for (auto& [t, c] : certificate) {
            if (t != expect++) throw InputError("certificate steps are not contiguous from 1");
            cert.push_back(std::move(c));
        }
        out.trace.certificate = std::move(cert);
    }
    // Shape checks (sizes, dims, finiteness); locality is left to validate_trace.
    if (out.trace.start.size() != static_cast<std::size_t>(out.params.k)) {
        throw InputError("start configuration must list k positions");
    }
    if (out.trace.certificate) {
        if (out.trace.certificate->size() != out.trace.requests.size()) {
            throw InputError("certificate length differs from request count");
        }
        for (const auto& c : *out.trace.certificate) {
            if (c.size() != static_cast<std::size_t>(out.params.k)) {
                throw InputError("certificate configuration must list k positions");
            }
        }
    }
    return out;
}

TraceFile load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open trace file " + path.string());
    return read_trace(in);
}

void write_trace(std::ostream& out, const TraceFile& file) {
    json header;
    header["dim"] = file.params.dim;
    header["k"] = file.params.k;
    header["ms"] = file.params.ms;
    header["mc"] = file.params.mc;
    header["delta"] = file.params.delta;
    header["D"] = file.params.D;
    header["start"] = io::config_to_json(file.trace.start);
    out << header.dump() << '\n';
    for (std::size_t t = 0; t < file.trace.requests.size(); ++t) {
        json line;
        line["t"] = t + 1;
        line["r"] = io::point_to_json(file.trace.requests[t]);
        out << line.dump() << '\n';
    }
    if (file.trace.certificate) {
        for (std::size_t t = 0; t < file.trace.certificate->size(); ++t) {
            json line;
            line["t"] = t + 1;
            line["o"] = io::config_to_json((*file.trace.certificate)[t]);
            out << line.dump() << '\n';
        }
    }
}

void save_trace(const std::filesystem::path& path, const TraceFile& file) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write trace file " + path.string());
    write_trace(out, file);
}

} // namespace kmob
