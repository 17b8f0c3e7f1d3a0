// hankel-gm: experiment driver over the hankelgm headers.
//
// Subcommands:
//   transform   evaluate H_alpha of a descriptor on a dyadic y grid
//               (CSV columns y,re,im,err_est)
//   norm        weighted and/or Lorentz norm of a descriptor
//   gm-certify  general-monotonicity certificate (JSON or CSV profile)
//   equiv       equivalence-ratio sweep from a config file
//   check       built-in consistency checks, one PASS/FAIL line each
//
// Exit codes: 0 pass, 1 check failure (including a refused certificate),
// 2 configuration error, 3 numerical non-convergence.
//
// Usage examples:
//   hankel-gm transform --fn "gauss-hermite:a=1" --alpha 0.5 --out image.csv
//   hankel-gm norm --fn "indicator:a=0,b=1" --p 2 --q 2 --space both
//   hankel-gm gm-certify --fn "dyadic-sign-power:a=0.25,b=8" --lambda 4
//   hankel-gm equiv --config sweep.cfg --out report.json --format json
//   hankel-gm check

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hankelgm/harness.hpp"

namespace {

using namespace hankelgm;

// Sampling window shared by the descriptor subcommands; mirrors the config
// keys of the same names so flag values and config files read alike.
struct WindowFlags {
    int window_lo_exp = -10;
    int window_hi_exp = 5;
    int per_octave = 32;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--window-lo-exp", window_lo_exp, "window start, as a power of 2");
        cmd.add_option("--window-hi-exp", window_hi_exp, "window end, as a power of 2");
        cmd.add_option("--per-octave", per_octave, "sample nodes per octave");
    }

    SampledFunction sample_descriptor(const std::string& desc) const {
        const AnalyticFunction fn = AnalyticFunction::parse(desc);
        const Grid g = Grid::dyadic(window_lo_exp, window_hi_exp, per_octave);
        return sample(fn, g, detail::natural_interp(fn));
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw Error("write failed for '" + path + "'");
}

int run_transform(const std::string& desc, double alpha, const WindowFlags& wf,
                  const TransformSettings& st, const std::string& out_path) {
    const SampledFunction f = wf.sample_descriptor(desc);
    const TransformResult tr = hankel_transform(f, alpha, st);
    std::ostringstream os;
    os << "y,re,im,err_est\n";
    for (std::size_t i = 0; i < tr.values.grid().size(); ++i) {
        const std::complex<double> v = tr.values.value(i);
        os << detail::number_text(tr.values.grid().node(i)) << ','
           << detail::number_text(v.real()) << ',' << detail::number_text(v.imag()) << ','
           << detail::number_text(tr.err_est[i]) << "\n";
    }
    write_text(out_path, os.str());
    return 0;
}

int run_norm(const std::string& desc, double p, double q, const std::string& space,
             const WindowFlags& wf, const std::string& out_path) {
    const SampledFunction f = wf.sample_descriptor(desc);
    std::ostringstream os;
    if (space == "lebesgue" || space == "both")
        os << "lebesgue " << detail::number_text(weighted_norm(f, p, q)) << "\n";
    if (space == "lorentz" || space == "both")
        os << "lorentz " << detail::number_text(lorentz_norm(f, p, q)) << "\n";
    write_text(out_path, os.str());
    return 0;
}

int run_certify(const std::string& desc, double lambda, const WindowFlags& wf,
                const std::string& format, const std::string& out_path) {
    const SampledFunction probe = wf.sample_descriptor(desc);
    const GMCertificate cert = certify_gm(probe, lambda);
    std::string text;
    if (format == "json") {
        nlohmann::ordered_json j;
        j["schema_version"] = 1;
        j["kind"] = "hankelgm-gm-certificate";
        j["fn"] = desc;
        j["lambda"] = detail::json_number(cert.lambda);
        j["nu"] = cert.nu;
        j["is_gm"] = cert.is_gm;
        j["constant"] = detail::json_number(cert.constant);
        j["sup_ratio"] = detail::json_number(cert.sup_ratio);
        j["sup_scale"] = detail::json_number(cert.sup_scale);
        j["note"] = cert.note;
        j["profile"] = nlohmann::ordered_json::array();
        for (const auto& [x, rho] : cert.profile)
            j["profile"].push_back({detail::json_number(x), detail::json_number(rho)});
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "# hankelgm gm certificate v1\n";
        os << "# fn=" << desc << "\n";
        os << "# lambda=" << detail::number_text(cert.lambda) << " nu=" << cert.nu << "\n";
        os << "# is_gm=" << (cert.is_gm ? "true" : "false")
           << " constant=" << detail::number_text(cert.constant) << " note: " << cert.note
           << "\n";
        os << "x,ratio\n";
        for (const auto& [x, rho] : cert.profile)
            os << detail::number_text(x) << ',' << detail::number_text(rho) << "\n";
        text = os.str();
    }
    write_text(out_path, text);
    return cert.is_gm ? 0 : 1;
}

int run_equiv(const std::string& config_path, const std::string& out_path,
              const std::string& format) {
    ExperimentConfig cfg = ExperimentConfig::parse_file(config_path);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format;
    cfg.validate();
    const RatioReport rep = run_equivalence(cfg);
    const ReportFormat fmt = cfg.format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    if (cfg.out_path.empty())
        std::cout << render_report(rep, fmt);
    else
        emit_report(rep, cfg.out_path, fmt);
    return 0;
}

// Compact sweep exercising every flag path; check falls back to it when no
// config is given.
const char* kCheckConfig =
    "alpha = 0.5\n"
    "corpus = gauss-hermite:a=1 ; indicator:a=0,b=1 ; dyadic-sign-power:a=0.25,b=8\n"
    "spaces = 2,2 ; 1.5,1\n"
    "dilations = 1 ; 2\n"
    "window_lo_exp = -10\n"
    "window_hi_exp = 5\n"
    "per_octave = 32\n"
    "y_lo_exp = -5\n"
    "y_hi_exp = 5\n"
    "y_per_octave = 8\n";

int run_check(const std::string& config_path) {
    const ExperimentConfig cfg = config_path.empty()
                                     ? ExperimentConfig::parse_text(kCheckConfig)
                                     : ExperimentConfig::parse_file(config_path);
    bool all_ok = true;
    auto report_line = [&](const char* name, bool ok, const std::string& note) {
        all_ok = all_ok && ok;
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!ok && !note.empty()) std::cout << " (" << note << ")";
        std::cout << "\n";
    };

    const RatioReport rep = run_equivalence(cfg);
    report_line("sweep produces rows", !rep.rows.empty(),
                "all corpus members were skipped");

    std::size_t mismatches = 0;
    for (const auto& r : rep.rows)
        if (r.flag == "mismatch") ++mismatches;
    report_line("no one-sided divergence", mismatches == 0,
                std::to_string(mismatches) + " mismatch row(s)");

    // the sweep's forward ratio must be the same number the direct
    // transform-side check computes on identical inputs
    bool consistent = true;
    std::string detail_note;
    const EquivalenceRow* pick = nullptr;
    for (const auto& r : rep.rows)
        if (r.flag == "ok") { pick = &r; break; }
    if (pick) {
        const AnalyticFunction fn = AnalyticFunction::parse(pick->fn).dilated(pick->c);
        const Grid xg = Grid::dyadic(cfg.window_lo_exp, cfg.window_hi_exp, cfg.per_octave);
        const SampledFunction fs = sample(fn, xg, detail::natural_interp(fn));
        TransformSettings st = cfg.settings;
        st.y_grid = Grid::dyadic(cfg.y_lo_exp, cfg.y_hi_exp, cfg.y_per_octave);
        const PittResult pr = pitt_check(fs, cfg.alpha, pick->p, pick->q, st);
        consistent = std::abs(pr.ratio - pick->ratio_lebesgue) <=
                     1e-12 * std::max(1.0, std::abs(pick->ratio_lebesgue));
        if (!consistent)
            detail_note = detail::number_text(pr.ratio) + " vs " +
                          detail::number_text(pick->ratio_lebesgue);
    }
    report_line("forward ratio matches direct check", consistent, detail_note);

    const RatioReport again = run_equivalence(cfg);
    const bool deterministic = render_report(rep, ReportFormat::Json) ==
                               render_report(again, ReportFormat::Json);
    report_line("identical config gives identical report", deterministic, "");

    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hankel transform and norm-equivalence experiments"};
    app.require_subcommand(1);

    std::string fn_desc, out_path, format, space = "both", tail = "ibp", config_path;
    double alpha = 0.5, p = 2.0, q = 2.0, lambda = 2.0;
    WindowFlags wf;
    TransformSettings st;
    st.cell_order = 3;
    int y_lo_exp = -5, y_hi_exp = 5, y_per_octave = 8;

    CLI::App* t = app.add_subcommand("transform", "evaluate the Hankel transform");
    t->add_option("--fn", fn_desc, "function descriptor")->required();
    t->add_option("--alpha", alpha, "transform order");
    t->add_option("--m", st.truncation_m, "initial truncation band start");
    t->add_option("--n", st.truncation_n, "initial truncation band end");
    t->add_option("--tol", st.quad_tol, "quadrature tolerance");
    t->add_option("--ladder", st.ladder, "truncation ladder rungs");
    t->add_option("--tail", tail, "tail handling: ibp or direct")
        ->check(CLI::IsMember({"ibp", "direct"}));
    t->add_option("--y-lo-exp", y_lo_exp, "y window start, as a power of 2");
    t->add_option("--y-hi-exp", y_hi_exp, "y window end, as a power of 2");
    t->add_option("--y-per-octave", y_per_octave, "y nodes per octave");
    t->add_option("--out", out_path, "output path (stdout when omitted)");
    wf.add_to(*t);

    CLI::App* n = app.add_subcommand("norm", "weighted and Lorentz norms");
    n->add_option("--fn", fn_desc, "function descriptor")->required();
    n->add_option("--p", p, "primary exponent")->required();
    n->add_option("--q", q, "secondary exponent")->required();
    n->add_option("--space", space, "lebesgue, lorentz, or both")
        ->check(CLI::IsMember({"lebesgue", "lorentz", "both"}));
    n->add_option("--out", out_path, "output path (stdout when omitted)");
    wf.add_to(*n);

    CLI::App* g = app.add_subcommand("gm-certify", "general-monotonicity certificate");
    g->add_option("--fn", fn_desc, "function descriptor")->required();
    g->add_option("--lambda", lambda, "block widening factor, a power of 2");
    g->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    g->add_option("--out", out_path, "output path (stdout when omitted)");
    wf.add_to(*g);

    CLI::App* e = app.add_subcommand("equiv", "equivalence-ratio sweep");
    e->add_option("--config", config_path, "flat key=value config file")->required();
    e->add_option("--out", out_path, "output path (overrides the config)");
    e->add_option("--format", format, "csv or json (overrides the config)")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* c = app.add_subcommand("check", "built-in consistency checks");
    c->add_option("--config", config_path, "sweep config (built-in default when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (t->parsed()) {
            st.tail_mode = tail == "direct" ? TailMode::Direct : TailMode::IntegrateByParts;
            st.y_grid = Grid::dyadic(y_lo_exp, y_hi_exp, y_per_octave);
            return run_transform(fn_desc, alpha, wf, st, out_path);
        }
        if (n->parsed()) return run_norm(fn_desc, p, q, space, wf, out_path);
        if (g->parsed())
            return run_certify(fn_desc, lambda, wf, format.empty() ? "json" : format,
                               out_path);
        if (e->parsed()) return run_equiv(config_path, out_path, format);
        if (c->parsed()) return run_check(config_path);
    } catch (const ConvergenceError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    } catch (const AccuracyError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
