#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hankelgm/sampled.hpp"

namespace hankelgm {

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

// Value table as CSV (x, re, im) plus a JSON sidecar <path>.json holding the
// grid construction, interpretation, and provenance.  %.17g keeps the round
// trip bit-exact.
inline void write_sampled(const SampledFunction& f, const std::string& path) {
    {
        std::ofstream os(path);
        if (!os) throw ConfigError("write_sampled: cannot open " + path);
        os << "x,re,im\n";
        for (std::size_t i = 0; i < f.size(); ++i)
            os << detail::fmt17(f.grid().node(i)) << ',' << detail::fmt17(f.value(i).real()) << ','
               << detail::fmt17(f.value(i).imag()) << '\n';
    }
    nlohmann::json j;
    j["schema_version"] = 1;
    if (f.grid().per_octave() > 0) {
        j["grid"] = {{"kind", "dyadic"},
                     {"e_lo", f.grid().e_lo()},
                     {"per_octave", f.grid().per_octave()},
                     {"count", f.grid().size()}};
    } else {
        j["grid"] = {{"kind", "explicit"}, {"count", f.grid().size()}};
    }
    j["interp"] = f.interp() == Interp::PiecewiseLinear ? "piecewise-linear" : "piecewise-constant-left";
    j["source"] = f.source();
    if (f.tails()) {
        auto kind_name = [](TailDescriptor::Kind k) {
            switch (k) {
                case TailDescriptor::Kind::Zero: return "zero";
                case TailDescriptor::Kind::Power: return "power";
                default: return "none";
            }
        };
        const TailDescriptor& t = *f.tails();
        j["tails"] = {{"head", {{"kind", kind_name(t.head_kind)}, {"c", t.head_c}, {"e", t.head_e}}},
                      {"tail", {{"kind", kind_name(t.tail_kind)}, {"c", t.tail_c}, {"e", t.tail_e}}}};
    }
    j["warnings"] = f.warnings();
    std::ofstream os(path + ".json");
    if (!os) throw ConfigError("write_sampled: cannot open " + path + ".json");
    os << j.dump(2) << '\n';
}

inline SampledFunction read_sampled(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("read_sampled: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,re,im", 0) != 0)
        throw ConfigError("read_sampled: missing x,re,im header in " + path);
    std::vector<double> xs;
    std::vector<std::complex<double>> vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double x, re, im;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &re, &im) != 3)
            throw ConfigError("read_sampled: bad row '" + line + "' in " + path);
        xs.push_back(x);
        vs.emplace_back(re, im);
    }

    std::ifstream js(path + ".json");
    if (!js) throw ConfigError("read_sampled: missing sidecar " + path + ".json");
    nlohmann::json j;
    js >> j;
    if (j.value("schema_version", 0) != 1)
        throw ConfigError("read_sampled: unsupported schema_version in " + path + ".json");

    Grid grid = Grid::explicit_nodes(xs);
    const auto& jg = j.at("grid");
    if (jg.at("kind") == "dyadic") {
        const int e_lo = jg.at("e_lo"), m = jg.at("per_octave");
        const std::size_t count = jg.at("count");
        const int e_hi = e_lo + static_cast<int>((count - 1) / static_cast<std::size_t>(m));
        Grid rebuilt = Grid::dyadic(e_lo, e_hi, m);
        if (rebuilt.size() != xs.size())
            throw ConfigError("read_sampled: sidecar grid disagrees with CSV rows");
        grid = std::move(rebuilt);
    }
    const std::string interp_name = j.value("interp", "piecewise-linear");
    const Interp interp = interp_name == "piecewise-constant-left" ? Interp::PiecewiseConstantLeft
                                                                   : Interp::PiecewiseLinear;
    SampledFunction f(std::move(grid), std::move(vs), interp);
    f.set_source(j.value("source", ""));
    if (j.contains("tails")) {
        auto kind_of = [](const std::string& s) {
            if (s == "zero") return TailDescriptor::Kind::Zero;
            if (s == "power") return TailDescriptor::Kind::Power;
            return TailDescriptor::Kind::None;
        };
        TailDescriptor t;
        t.head_kind = kind_of(j["tails"]["head"]["kind"]);
        t.head_c = j["tails"]["head"]["c"];
        t.head_e = j["tails"]["head"]["e"];
        t.tail_kind = kind_of(j["tails"]["tail"]["kind"]);
        t.tail_c = j["tails"]["tail"]["c"];
        t.tail_e = j["tails"]["tail"]["e"];
        f.set_tails(t);
    }
    if (j.contains("warnings"))
        for (const auto& w : j["warnings"]) f.add_warning(w.get<std::string>());
    return f;
}

}  // namespace hankelgm
